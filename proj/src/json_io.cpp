#include "laxconf/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

namespace laxconf {

namespace {

std::string type_name(const json& j) { return j.type_name(); }

carrier carrier_from_keys(const std::string& id, const json& j) {
  if (!j.is_array()) throw parse_error("expected an array of keys for '" + id + "'");
  std::vector<std::string> keys;
  for (const auto& k : j) {
    if (!k.is_string()) throw parse_error("carrier keys must be strings");
    keys.push_back(k.get<std::string>());
  }
  return carrier(id, std::move(keys));
}

vrel closure_preorder(vrel rel) {
  // reflexive-transitive closure over the boolean quantale
  for (std::size_t i = 0; i < rel.rows(); ++i) rel.set(i, i, qvalue::boolean(true));
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < rel.rows(); ++i) {
      for (std::size_t k = 0; k < rel.rows(); ++k) {
        if (!rel.at(i, k).truth()) continue;
        for (std::size_t j = 0; j < rel.rows(); ++j) {
          if (rel.at(k, j).truth() && !rel.at(i, j).truth()) {
            rel.set(i, j, qvalue::boolean(true));
            changed = true;
          }
        }
      }
    }
  }
  return rel;
}

}  // namespace

rational rational_from_json(const json& j, parse_context& ctx) {
  if (j.is_string()) return rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return rational(j.get<long long>());
  if (j.is_number_unsigned()) return rational(static_cast<long long>(j.get<unsigned long long>()));
  if (j.is_number_float()) {
    if (!ctx.allow_float) {
      throw parse_error("floating-point literal requires --allow-float (use \"p/q\" strings for exact input)");
    }
    ctx.saw_float = true;
    return rational::from_double(j.get<double>(), ctx.max_denominator);
  }
  throw parse_error(std::string("cannot read a rational from JSON ") + type_name(j));
}

qvalue qvalue_from_json(quantale_kind k, const json& j, parse_context& ctx) {
  if (j.is_string() && j.get<std::string>() == "inf") {
    if (k != quantale_kind::ext_real) throw parse_error("'inf' only exists in the extreal quantale");
    return qvalue::infinity();
  }
  return qvalue::of(k, rational_from_json(j, ctx));
}

json to_json(const qvalue& v) { return v.str(); }

json to_json(const carrier& c) {
  json out = json::array();
  for (const auto& k : c.keys) out.push_back(k);
  return out;
}

json to_json(const vrel& r) {
  json entries = json::array();
  for (std::size_t i = 0; i < r.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < r.cols(); ++j) row.push_back(to_json(r.at(i, j)));
    entries.push_back(std::move(row));
  }
  return json{{"source", to_json(r.src())},
              {"target", to_json(r.tgt())},
              {"quantale", std::string(quantale_name(r.kind()))},
              {"entries", std::move(entries)}};
}

vrel vrel_from_json(const json& j, parse_context& ctx) {
  if (!j.is_object()) throw parse_error("relation file must be a JSON object");
  carrier src = carrier_from_keys("source", j.at("source"));
  carrier tgt = carrier_from_keys("target", j.at("target"));
  quantale_kind q = parse_quantale(j.at("quantale").get<std::string>());
  const json& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != src.size()) {
    throw parse_error("entries must be a matrix with one row per source key");
  }
  vrel out(src, tgt, q, qvalue::bottom(q));
  for (std::size_t i = 0; i < src.size(); ++i) {
    const json& row = entries[i];
    if (!row.is_array() || row.size() != tgt.size()) throw parse_error("entry row has wrong length");
    for (std::size_t k = 0; k < tgt.size(); ++k) out.set(i, k, qvalue_from_json(q, row[k], ctx));
  }
  return out;
}

namespace {

vcat label_dist_from_json(const carrier& labels, const json& j, parse_context& ctx) {
  if (!j.is_array() || j.size() != labels.size()) {
    throw parse_error("labelDist must be a square matrix over the labels");
  }
  vrel d(labels, labels, quantale_kind::ext_real, qvalue::infinity());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.size() != labels.size()) throw parse_error("labelDist row has wrong length");
    for (std::size_t k = 0; k < labels.size(); ++k) {
      d.set(i, k, qvalue_from_json(quantale_kind::ext_real, row[k], ctx));
    }
  }
  vcat_report rep = check_vcategory(d);
  if (!rep.reflexive || !rep.transitive) {
    throw validation_error("labelDist must be a hemimetric (zero diagonal, triangle inequality)");
  }
  return vcat::trusted(std::move(d));
}

struct transition_row {
  int from, label, to;
  rational prob;
};

transition_row read_transition(const json& t, const carrier& states, const carrier& labels, bool with_label,
                               bool with_prob, parse_context& ctx) {
  transition_row row{0, 0, 0, rational(0)};
  row.from = states.index_of(t.at("from").get<std::string>());
  row.to = states.index_of(t.at("to").get<std::string>());
  if (with_label) row.label = labels.index_of(t.at("label").get<std::string>());
  if (with_prob) row.prob = rational_from_json(t.at("prob"), ctx);
  return row;
}

}  // namespace

coalgebra coalgebra_from_json(const json& j, parse_context& ctx) {
  if (!j.is_object()) throw parse_error("system file must be a JSON object");
  std::string kind = j.at("kind").get<std::string>();
  carrier states = carrier_from_keys("states", j.at("states"));
  coalgebra c;
  c.states = states;

  if (kind == "lts") {
    carrier labels = carrier_from_keys("labels", j.at("labels"));
    lts_order order = j.contains("order") ? parse_lts_order(j.at("order").get<std::string>()) : lts_order::sub;
    c.instance = functor_instance::lts(labels, order);
    std::vector<std::vector<std::pair<int, int>>> succ(states.size());
    for (const auto& t : j.at("transitions")) {
      auto row = read_transition(t, states, labels, true, false, ctx);
      succ[row.from].emplace_back(row.label, row.to);
    }
    for (auto& s : succ) c.structure.push_back(label_set(std::move(s)));
  } else if (kind == "mts") {
    carrier labels = carrier_from_keys("labels", j.at("labels"));
    vrel order(labels, labels, quantale_kind::boolean, qvalue::boolean(false));
    if (j.contains("labelOrder")) {
      for (const auto& pr : j.at("labelOrder")) {
        if (!pr.is_array() || pr.size() != 2) throw parse_error("labelOrder entries must be [below, above] pairs");
        order.set(labels.index_of(pr[0].get<std::string>()), labels.index_of(pr[1].get<std::string>()),
                  qvalue::boolean(true));
      }
    }
    c.instance = functor_instance::mts(labels, closure_preorder(std::move(order)));
    std::vector<std::vector<std::pair<int, int>>> must(states.size()), may(states.size());
    for (const auto& t : j.at("must")) {
      auto row = read_transition(t, states, labels, true, false, ctx);
      must[row.from].emplace_back(row.label, row.to);
      may[row.from].emplace_back(row.label, row.to);  // must transitions are also admissible
    }
    for (const auto& t : j.at("may")) {
      auto row = read_transition(t, states, labels, true, false, ctx);
      may[row.from].emplace_back(row.label, row.to);
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
      c.structure.push_back(mts_pair{label_set(std::move(must[i])), label_set(std::move(may[i]))});
    }
  } else if (kind == "stream") {
    carrier labels = carrier_from_keys("labels", j.at("labels"));
    c.instance = functor_instance::stream(labels, label_dist_from_json(labels, j.at("labelDist"), ctx));
    std::vector<std::optional<labeled_pair>> succ(states.size());
    for (const auto& t : j.at("transitions")) {
      auto row = read_transition(t, states, labels, true, false, ctx);
      if (succ[row.from]) throw validation_error("stream systems need exactly one transition per state");
      succ[row.from] = labeled_pair{row.label, row.to};
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (!succ[i]) throw validation_error("stream systems need exactly one transition per state");
      c.structure.push_back(*succ[i]);
    }
  } else if (kind == "mlmc") {
    carrier labels = carrier_from_keys("labels", j.at("labels"));
    c.instance = functor_instance::mlmc(labels, label_dist_from_json(labels, j.at("labelDist"), ctx));
    std::vector<std::vector<std::pair<std::pair<int, int>, rational>>> succ(states.size());
    for (const auto& t : j.at("transitions")) {
      auto row = read_transition(t, states, labels, true, true, ctx);
      succ[row.from].push_back({{row.label, row.to}, row.prob});
    }
    for (auto& s : succ) c.structure.push_back(labeled_dist(std::move(s)));
  } else if (kind == "weighted") {
    monoid_kind m = j.at("monoid").get<std::string>() == "nat" ? monoid_kind::nat : monoid_kind::nonneg_real;
    c.instance = functor_instance::weighted(m);
    std::vector<std::map<int, rational>> succ(states.size());
    for (const auto& t : j.at("transitions")) {
      int from = states.index_of(t.at("from").get<std::string>());
      int to = states.index_of(t.at("to").get<std::string>());
      succ[from][to] += rational_from_json(t.at("weight"), ctx);
    }
    for (auto& s : succ) {
      c.structure.push_back(monoid_map(std::vector<std::pair<int, rational>>(s.begin(), s.end())));
    }
  } else if (kind == "list") {
    c.instance = functor_instance::list();
    const json& succ = j.at("successors");
    for (const auto& key : states.keys) {
      list_elem l;
      if (succ.contains(key)) {
        for (const auto& entry : succ.at(key)) l.push_back(states.index_of(entry.get<std::string>()));
      }
      c.structure.push_back(std::move(l));
    }
  } else {
    throw parse_error("unknown system kind '" + kind + "'");
  }
  c.validate();
  return c;
}

json to_json(const coalgebra& c) {
  json out;
  const carrier& states = c.states;
  const carrier& labels = c.instance.labels.labels;
  out["states"] = to_json(states);
  switch (c.instance.kind) {
    case functor_kind::lts_pow: {
      out["kind"] = "lts";
      out["order"] = std::string(lts_order_name(c.instance.order));
      out["labels"] = to_json(labels);
      json ts = json::array();
      for (std::size_t x = 0; x < states.size(); ++x) {
        for (auto [a, y] : std::get<label_set>(c.structure[x]).pairs) {
          ts.push_back(json{{"from", states.keys[x]}, {"label", labels.keys[a]}, {"to", states.keys[y]}});
        }
      }
      out["transitions"] = std::move(ts);
      break;
    }
    case functor_kind::mts: {
      out["kind"] = "mts";
      out["labels"] = to_json(labels);
      json order = json::array();
      for (std::size_t a = 0; a < labels.size(); ++a) {
        for (std::size_t b = 0; b < labels.size(); ++b) {
          if (c.instance.labels.label_order->at(a, b).truth()) {
            order.push_back(json::array({labels.keys[a], labels.keys[b]}));
          }
        }
      }
      out["labelOrder"] = std::move(order);
      json must = json::array(), may = json::array();
      for (std::size_t x = 0; x < states.size(); ++x) {
        const auto& p = std::get<mts_pair>(c.structure[x]);
        for (auto [a, y] : p.must.pairs) {
          must.push_back(json{{"from", states.keys[x]}, {"label", labels.keys[a]}, {"to", states.keys[y]}});
        }
        for (auto [a, y] : p.may.pairs) {
          may.push_back(json{{"from", states.keys[x]}, {"label", labels.keys[a]}, {"to", states.keys[y]}});
        }
      }
      out["must"] = std::move(must);
      out["may"] = std::move(may);
      break;
    }
    case functor_kind::stream:
    case functor_kind::mlmc: {
      out["kind"] = c.instance.kind == functor_kind::stream ? "stream" : "mlmc";
      out["labels"] = to_json(labels);
      json dist = json::array();
      for (std::size_t a = 0; a < labels.size(); ++a) {
        json row = json::array();
        for (std::size_t b = 0; b < labels.size(); ++b) {
          row.push_back(to_json(c.instance.labels.label_dist->rel().at(a, b)));
        }
        dist.push_back(std::move(row));
      }
      out["labelDist"] = std::move(dist);
      json ts = json::array();
      for (std::size_t x = 0; x < states.size(); ++x) {
        if (c.instance.kind == functor_kind::stream) {
          const auto& p = std::get<labeled_pair>(c.structure[x]);
          ts.push_back(json{{"from", states.keys[x]}, {"label", labels.keys[p.label]}, {"to", states.keys[p.state]}});
        } else {
          for (const auto& [pt, mass] : std::get<labeled_dist>(c.structure[x]).entries) {
            ts.push_back(json{{"from", states.keys[x]},
                              {"label", labels.keys[pt.first]},
                              {"to", states.keys[pt.second]},
                              {"prob", mass.str()}});
          }
        }
      }
      out["transitions"] = std::move(ts);
      break;
    }
    case functor_kind::monoid_val: {
      out["kind"] = "weighted";
      out["monoid"] = c.instance.monoid == monoid_kind::nat ? "nat" : "real";
      json ts = json::array();
      for (std::size_t x = 0; x < states.size(); ++x) {
        for (const auto& [y, w] : std::get<monoid_map>(c.structure[x]).entries) {
          ts.push_back(json{{"from", states.keys[x]}, {"to", states.keys[y]}, {"weight", w.str()}});
        }
      }
      out["transitions"] = std::move(ts);
      break;
    }
    case functor_kind::list: {
      out["kind"] = "list";
      json succ = json::object();
      for (std::size_t x = 0; x < states.size(); ++x) {
        json l = json::array();
        for (int y : std::get<list_elem>(c.structure[x])) l.push_back(states.keys[y]);
        succ[states.keys[x]] = std::move(l);
      }
      out["successors"] = std::move(succ);
      break;
    }
  }
  return out;
}

std::pair<carrier, list_elem> list_file_from_json(const json& j) {
  if (!j.is_object() || !j.contains("symbols")) throw parse_error("list file must contain a 'symbols' array");
  std::vector<std::string> seen;
  std::vector<std::string> order;
  for (const auto& s : j.at("symbols")) {
    std::string sym = s.get<std::string>();
    if (std::find(seen.begin(), seen.end(), sym) == seen.end()) seen.push_back(sym);
    order.push_back(std::move(sym));
  }
  carrier alphabet("alphabet", seen);
  list_elem word;
  for (const auto& sym : order) word.push_back(alphabet.index_of(sym));
  return {std::move(alphabet), std::move(word)};
}

measure_file measure_from_json(const json& j, parse_context& ctx) {
  measure_file out;
  if (!j.is_object() || !j.contains("mass")) throw parse_error("measure file must contain a 'mass' object");
  if (j.contains("monoid")) {
    out.monoid = j.at("monoid").get<std::string>() == "nat" ? monoid_kind::nat : monoid_kind::nonneg_real;
  }
  for (const auto& [key, val] : j.at("mass").items()) {
    out.keys.push_back(key);
    out.mass.push_back(rational_from_json(val, ctx));
    if (out.monoid == monoid_kind::nat && !out.mass.back().is_integer()) {
      throw validation_error("nat measures need integer masses");
    }
  }
  return out;
}

json element_to_json(const functor_instance& inst, const carrier& states, const functor_element& t) {
  const carrier& labels = inst.labels.labels;
  auto state_key = [&](int x) { return states.keys.at(static_cast<std::size_t>(x)); };
  auto label_key = [&](int a) { return labels.keys.at(static_cast<std::size_t>(a)); };
  if (const auto* u = std::get_if<label_set>(&t)) {
    json out = json::array();
    for (auto [a, x] : u->pairs) out.push_back(json::array({label_key(a), state_key(x)}));
    return out;
  }
  if (const auto* m = std::get_if<mts_pair>(&t)) {
    return json{{"must", element_to_json(inst, states, m->must)}, {"may", element_to_json(inst, states, m->may)}};
  }
  if (const auto* l = std::get_if<list_elem>(&t)) {
    json out = json::array();
    for (int x : *l) out.push_back(state_key(x));
    return out;
  }
  if (const auto* w = std::get_if<monoid_map>(&t)) {
    json out = json::object();
    for (const auto& [x, mass] : w->entries) out[state_key(x)] = mass.str();
    return out;
  }
  if (const auto* p = std::get_if<labeled_pair>(&t)) {
    return json::array({label_key(p->label), state_key(p->state)});
  }
  if (const auto* d = std::get_if<labeled_dist>(&t)) {
    json out = json::array();
    for (const auto& [pt, mass] : d->entries) {
      out.push_back(json{{"label", label_key(pt.first)}, {"state", state_key(pt.second)}, {"prob", mass.str()}});
    }
    return out;
  }
  throw internal_error("unknown element kind");
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw parse_error("invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

}  // namespace laxconf
