#include "laxconf/instances.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace laxconf {

namespace {

qvalue bool_of(bool b) { return qvalue::boolean(b); }

qvalue scale(const rational& mass, const qvalue& v) {
  if (v.kind() != quantale_kind::ext_real) throw validation_error("scale: ext_real expected");
  if (mass.is_zero()) return qvalue::ext_real(rational(0));
  if (v.is_inf()) return qvalue::infinity();
  return qvalue::ext_real(mass * v.finite());
}

int mapped(const set_map& f, int x) {
  if (x < 0 || static_cast<std::size_t>(x) >= f.size()) throw validation_error("fmap: index outside map domain");
  return f[x];
}

// leftmost embedding of `sub` into `sup`, as positions in `sup`
std::optional<std::vector<int>> embedding(const std::vector<int>& sub, const std::vector<int>& sup) {
  std::vector<int> pos;
  std::size_t j = 0;
  for (std::size_t i = 0; i < sub.size(); ++i) {
    while (j < sup.size() && sup[j] != sub[i]) ++j;
    if (j == sup.size()) return std::nullopt;
    pos.push_back(static_cast<int>(j));
    ++j;
  }
  return pos;
}

bool is_subsequence(const std::vector<int>& sub, const std::vector<int>& sup) {
  return embedding(sub, sup).has_value();
}

}  // namespace

std::string_view lts_order_name(lts_order o) {
  switch (o) {
    case lts_order::sub: return "sub";
    case lts_order::sup: return "sup";
    case lts_order::cpl: return "cpl";
    case lts_order::cpl_rev: return "cpl-rev";
    case lts_order::rd: return "rd";
    case lts_order::rd_rev: return "rd-rev";
    case lts_order::discrete: return "discrete";
  }
  throw internal_error("unknown lts order");
}

lts_order parse_lts_order(std::string_view name) {
  if (name == "sub") return lts_order::sub;
  if (name == "sup") return lts_order::sup;
  if (name == "cpl") return lts_order::cpl;
  if (name == "cpl-rev") return lts_order::cpl_rev;
  if (name == "rd") return lts_order::rd;
  if (name == "rd-rev") return lts_order::rd_rev;
  if (name == "discrete") return lts_order::discrete;
  throw parse_error("unknown order '" + std::string(name) + "'");
}

quantale_kind functor_instance::value_kind() const {
  switch (kind) {
    case functor_kind::lts_pow:
    case functor_kind::mts: return quantale_kind::boolean;
    default: return quantale_kind::ext_real;
  }
}

functor_instance functor_instance::lts(carrier labels, lts_order order) {
  functor_instance i;
  i.kind = functor_kind::lts_pow;
  i.order = order;
  i.labels.labels = std::move(labels);
  return i;
}

functor_instance functor_instance::mts(carrier labels, vrel label_order) {
  if (label_order.kind() != quantale_kind::boolean) throw validation_error("mts label order must be boolean");
  if (label_order.src() != labels || label_order.tgt() != labels) {
    throw validation_error("mts label order must be an endorelation on the labels");
  }
  vcat_report rep = check_vcategory(label_order);
  if (!rep.reflexive || !rep.transitive) throw validation_error("mts label order must be a preorder");
  functor_instance i;
  i.kind = functor_kind::mts;
  i.labels.labels = std::move(labels);
  i.labels.label_order = std::move(label_order);
  return i;
}

functor_instance functor_instance::list() {
  functor_instance i;
  i.kind = functor_kind::list;
  return i;
}

functor_instance functor_instance::weighted(monoid_kind m) {
  functor_instance i;
  i.kind = functor_kind::monoid_val;
  i.monoid = m;
  return i;
}

functor_instance functor_instance::stream(carrier labels, vcat label_dist) {
  if (label_dist.kind() != quantale_kind::ext_real) throw validation_error("label distances must be ext_real");
  if (label_dist.base() != labels) throw validation_error("label distance carrier mismatch");
  functor_instance i;
  i.kind = functor_kind::stream;
  i.labels.labels = std::move(labels);
  i.labels.label_dist = std::move(label_dist);
  return i;
}

functor_instance functor_instance::mlmc(carrier labels, vcat label_dist) {
  functor_instance i = stream(std::move(labels), std::move(label_dist));
  i.kind = functor_kind::mlmc;
  return i;
}

// ---- element construction ------------------------------------------------

label_set::label_set(std::vector<std::pair<int, int>> p) : pairs(std::move(p)) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

bool label_set::contains(int label, int state) const {
  return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(label, state));
}

bool label_set::subset_of(const label_set& other) const {
  return std::includes(other.pairs.begin(), other.pairs.end(), pairs.begin(), pairs.end());
}

std::vector<int> label_set::states_for(int label) const {
  std::vector<int> out;
  for (const auto& [a, x] : pairs) {
    if (a == label) out.push_back(x);
  }
  return out;
}

monoid_map::monoid_map(std::vector<std::pair<int, rational>> e) : entries(std::move(e)) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].second.is_negative()) throw validation_error("monoid weight must be nonnegative");
    if (i > 0 && entries[i].first == entries[i - 1].first) throw validation_error("duplicate state in weight map");
  }
  std::erase_if(entries, [](const auto& e_) { return e_.second.is_zero(); });
}

rational monoid_map::at(int state) const {
  for (const auto& [x, m] : entries) {
    if (x == state) return m;
  }
  return rational(0);
}

rational monoid_map::total() const {
  rational sum(0);
  for (const auto& [x, m] : entries) sum += m;
  return sum;
}

labeled_dist::labeled_dist(std::vector<std::pair<std::pair<int, int>, rational>> e) : entries(std::move(e)) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  rational sum(0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].second.is_negative()) throw validation_error("probability must be nonnegative");
    if (i > 0 && entries[i].first == entries[i - 1].first) throw validation_error("duplicate point in distribution");
    sum += entries[i].second;
  }
  std::erase_if(entries, [](const auto& e_) { return e_.second.is_zero(); });
  if (sum != rational(1)) throw validation_error("distribution must sum to exactly 1");
}

rational labeled_dist::at(int label, int state) const {
  for (const auto& [p, m] : entries) {
    if (p == std::make_pair(label, state)) return m;
  }
  return rational(0);
}

bool element_matches_kind(const functor_instance& inst, const functor_element& t) {
  switch (inst.kind) {
    case functor_kind::lts_pow: return std::holds_alternative<label_set>(t);
    case functor_kind::mts: return std::holds_alternative<mts_pair>(t);
    case functor_kind::list: return std::holds_alternative<list_elem>(t);
    case functor_kind::monoid_val: return std::holds_alternative<monoid_map>(t);
    case functor_kind::stream: return std::holds_alternative<labeled_pair>(t);
    case functor_kind::mlmc: return std::holds_alternative<labeled_dist>(t);
  }
  return false;
}

void coalgebra::validate() const {
  if (structure.size() != states.size()) throw validation_error("coalgebra: one successor structure per state required");
  const int nx = static_cast<int>(states.size());
  const int na = static_cast<int>(instance.labels.labels.size());
  auto check_pair = [&](int a, int x) {
    if (a < 0 || a >= na) throw validation_error("coalgebra: label index out of range");
    if (x < 0 || x >= nx) throw validation_error("coalgebra: state index out of range");
  };
  for (const functor_element& t : structure) {
    if (!element_matches_kind(instance, t)) throw validation_error("coalgebra: element kind mismatch");
    if (const auto* u = std::get_if<label_set>(&t)) {
      for (auto [a, x] : u->pairs) check_pair(a, x);
    } else if (const auto* m = std::get_if<mts_pair>(&t)) {
      for (auto [a, x] : m->must.pairs) check_pair(a, x);
      for (auto [a, x] : m->may.pairs) check_pair(a, x);
      if (!m->must.subset_of(m->may)) throw validation_error("mts element: must transitions exceed may transitions");
    } else if (const auto* l = std::get_if<list_elem>(&t)) {
      for (int x : *l) {
        if (x < 0 || x >= nx) throw validation_error("coalgebra: state index out of range");
      }
    } else if (const auto* w = std::get_if<monoid_map>(&t)) {
      for (const auto& [x, mass] : w->entries) {
        if (x < 0 || x >= nx) throw validation_error("coalgebra: state index out of range");
        if (instance.monoid == monoid_kind::nat && !mass.is_integer()) {
          throw validation_error("nat-weighted system requires integer weights");
        }
      }
    } else if (const auto* p = std::get_if<labeled_pair>(&t)) {
      check_pair(p->label, p->state);
    } else if (const auto* d = std::get_if<labeled_dist>(&t)) {
      for (const auto& [pt, mass] : d->entries) check_pair(pt.first, pt.second);
    }
  }
}

// ---- fmap ------------------------------------------------------------------

functor_element fmap(const functor_instance& inst, const set_map& f, const functor_element& t) {
  if (!element_matches_kind(inst, t)) throw validation_error("fmap: element kind mismatch");
  switch (inst.kind) {
    case functor_kind::lts_pow: {
      const auto& u = std::get<label_set>(t);
      std::vector<std::pair<int, int>> out;
      out.reserve(u.pairs.size());
      for (auto [a, x] : u.pairs) out.emplace_back(a, mapped(f, x));
      return label_set(std::move(out));
    }
    case functor_kind::mts: {
      const auto& m = std::get<mts_pair>(t);
      functor_instance sub = inst;
      sub.kind = functor_kind::lts_pow;
      return mts_pair{std::get<label_set>(fmap(sub, f, m.must)), std::get<label_set>(fmap(sub, f, m.may))};
    }
    case functor_kind::list: {
      const auto& l = std::get<list_elem>(t);
      list_elem out;
      out.reserve(l.size());
      for (int x : l) out.push_back(mapped(f, x));
      return out;
    }
    case functor_kind::monoid_val: {
      const auto& w = std::get<monoid_map>(t);
      std::map<int, rational> acc;
      for (const auto& [x, mass] : w.entries) acc[mapped(f, x)] += mass;
      std::vector<std::pair<int, rational>> out(acc.begin(), acc.end());
      return monoid_map(std::move(out));
    }
    case functor_kind::stream: {
      const auto& p = std::get<labeled_pair>(t);
      return labeled_pair{p.label, mapped(f, p.state)};
    }
    case functor_kind::mlmc: {
      const auto& d = std::get<labeled_dist>(t);
      std::map<std::pair<int, int>, rational> acc;
      for (const auto& [pt, mass] : d.entries) acc[{pt.first, mapped(f, pt.second)}] += mass;
      std::vector<std::pair<std::pair<int, int>, rational>> out(acc.begin(), acc.end());
      return labeled_dist(std::move(out));
    }
  }
  throw internal_error("unknown functor kind");
}

// ---- d_FX ------------------------------------------------------------------

namespace {

bool lts_leq(const functor_instance& inst, const label_set& u, const label_set& v) {
  const int na = static_cast<int>(inst.labels.labels.size());
  switch (inst.order) {
    case lts_order::sub: return u.subset_of(v);
    case lts_order::sup: return v.subset_of(u);
    case lts_order::cpl:
      return (u.empty() && v.empty()) || (!u.empty() && u.subset_of(v));
    case lts_order::cpl_rev:
      return (u.empty() && v.empty()) || (!v.empty() && v.subset_of(u));
    case lts_order::rd:
    case lts_order::rd_rev: {
      for (int a = 0; a < na; ++a) {
        auto ua = u.states_for(a);
        auto va = v.states_for(a);
        const auto& lo = inst.order == lts_order::rd ? ua : va;
        const auto& hi = inst.order == lts_order::rd ? va : ua;
        bool ok = (ua.empty() && va.empty()) ||
                  (!lo.empty() && std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()));
        if (!ok) return false;
      }
      return true;
    }
    case lts_order::discrete: return u == v;
  }
  throw internal_error("unknown lts order");
}

bool label_below(const functor_instance& inst, int a, int b) {
  return inst.labels.label_order->at(a, b).truth();
}

bool mts_leq(const functor_instance& inst, const mts_pair& s, const mts_pair& t) {
  // every may pair of s survives upward into t, every must pair of t is
  // justified downward in s
  for (auto [a, x] : s.may.pairs) {
    bool found = false;
    for (auto [b, x2] : t.may.pairs) {
      if (x2 == x && label_below(inst, a, b)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  for (auto [b, x] : t.must.pairs) {
    bool found = false;
    for (auto [a, x2] : s.must.pairs) {
      if (x2 == x && label_below(inst, a, b)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

qvalue label_dist_at(const functor_instance& inst, int a, int b) {
  return inst.labels.label_dist->rel().at(a, b);
}

qvalue mlmc_distance(const functor_instance& inst, const labeled_dist& mu, const labeled_dist& nu) {
  // transport across labels within each state slice; mass may not move
  // between states
  std::set<int> states;
  for (const auto& [pt, m] : mu.entries) states.insert(pt.second);
  for (const auto& [pt, m] : nu.entries) states.insert(pt.second);
  const std::size_t na = inst.labels.labels.size();

  flow_network net;
  std::map<std::pair<int, int>, int> left, right;
  for (int x : states) {
    for (std::size_t a = 0; a < na; ++a) {
      rational m = mu.at(static_cast<int>(a), x);
      if (!m.is_zero()) left[{static_cast<int>(a), x}] = net.add_node("l", m);
    }
    for (std::size_t b = 0; b < na; ++b) {
      rational m = nu.at(static_cast<int>(b), x);
      if (!m.is_zero()) right[{static_cast<int>(b), x}] = net.add_node("r", -m);
    }
  }
  for (const auto& [la, li] : left) {
    for (const auto& [rb, ri] : right) {
      if (la.second != rb.second) continue;  // state mismatch: infinite cost, omitted
      net.add_arc(li, ri, std::nullopt, label_dist_at(inst, la.first, rb.first));
    }
  }
  return min_cost_flow(net).optimal_cost;
}

}  // namespace

qvalue element_distance(const functor_instance& inst, const functor_element& t1, const functor_element& t2) {
  if (!element_matches_kind(inst, t1) || !element_matches_kind(inst, t2)) {
    throw validation_error("element_distance: element kind mismatch");
  }
  switch (inst.kind) {
    case functor_kind::lts_pow:
      return bool_of(lts_leq(inst, std::get<label_set>(t1), std::get<label_set>(t2)));
    case functor_kind::mts:
      return bool_of(mts_leq(inst, std::get<mts_pair>(t1), std::get<mts_pair>(t2)));
    case functor_kind::list: {
      const auto& s = std::get<list_elem>(t1);
      const auto& t = std::get<list_elem>(t2);
      if (is_subsequence(s, t) || is_subsequence(t, s)) {
        long long gap = static_cast<long long>(s.size()) - static_cast<long long>(t.size());
        return qvalue::ext_real(rational(gap < 0 ? -gap : gap));
      }
      return qvalue::infinity();
    }
    case functor_kind::monoid_val: {
      const auto& mu = std::get<monoid_map>(t1);
      const auto& nu = std::get<monoid_map>(t2);
      rational sum(0);
      std::set<int> support;
      for (const auto& [x, m] : mu.entries) support.insert(x);
      for (const auto& [x, m] : nu.entries) support.insert(x);
      for (int x : support) sum += max(rational(0), nu.at(x) - mu.at(x));
      return qvalue::ext_real(sum);
    }
    case functor_kind::stream: {
      const auto& p1 = std::get<labeled_pair>(t1);
      const auto& p2 = std::get<labeled_pair>(t2);
      if (p1.state != p2.state) return qvalue::infinity();
      return label_dist_at(inst, p1.label, p2.label);
    }
    case functor_kind::mlmc:
      return mlmc_distance(inst, std::get<labeled_dist>(t1), std::get<labeled_dist>(t2));
  }
  throw internal_error("unknown functor kind");
}

// ---- liftings ----------------------------------------------------------------

lifting default_lifting(const functor_instance& inst) {
  switch (inst.kind) {
    case functor_kind::lts_pow: return lifting::of(lifting_id::box);
    case functor_kind::mts: return lifting::of(lifting_id::mts_box);
    case functor_kind::list: return lifting::of(lifting_id::list_sum);
    case functor_kind::monoid_val: return lifting::of(lifting_id::expect);
    case functor_kind::stream: return lifting::of(lifting_id::stream_proj);
    case functor_kind::mlmc: return lifting::of(lifting_id::mlmc_expect);
  }
  throw internal_error("unknown functor kind");
}

qvalue lift(const functor_instance& inst, const lifting& l, const std::vector<qvalue>& f,
            const functor_element& t) {
  const quantale_kind q = inst.value_kind();
  auto pred = [&](int x) -> const qvalue& {
    if (x < 0 || static_cast<std::size_t>(x) >= f.size()) throw validation_error("lift: predicate index out of range");
    return f[x];
  };
  switch (l.id) {
    case lifting_id::box: {
      if (inst.kind != functor_kind::lts_pow) break;
      qvalue acc = qvalue::top(q);
      for (auto [a, x] : std::get<label_set>(t).pairs) acc = meet(acc, pred(x));
      return acc;
    }
    case lifting_id::diamond: {
      if (inst.kind != functor_kind::lts_pow) break;
      qvalue acc = qvalue::bottom(q);
      for (auto [a, x] : std::get<label_set>(t).pairs) acc = join(acc, pred(x));
      return acc;
    }
    case lifting_id::box_label: {
      if (inst.kind != functor_kind::lts_pow) break;
      qvalue acc = qvalue::top(q);
      for (auto [a, x] : std::get<label_set>(t).pairs) {
        if (a == l.at_label) acc = meet(acc, pred(x));
      }
      return acc;
    }
    case lifting_id::diamond_label: {
      if (inst.kind != functor_kind::lts_pow) break;
      qvalue acc = qvalue::bottom(q);
      for (auto [a, x] : std::get<label_set>(t).pairs) {
        if (a == l.at_label) acc = join(acc, pred(x));
      }
      return acc;
    }
    case lifting_id::mts_box: {
      if (inst.kind != functor_kind::mts) break;
      qvalue acc = qvalue::top(q);
      for (auto [a, x] : std::get<mts_pair>(t).may.pairs) acc = meet(acc, pred(x));
      return acc;
    }
    case lifting_id::list_sum: {
      if (inst.kind != functor_kind::list) break;
      qvalue acc = qvalue::unit(q);
      for (int x : std::get<list_elem>(t)) acc = tensor(acc, pred(x));
      return acc;
    }
    case lifting_id::expect: {
      if (inst.kind != functor_kind::monoid_val) break;
      qvalue acc = qvalue::ext_real(rational(0));
      for (const auto& [x, mass] : std::get<monoid_map>(t).entries) acc = tensor(acc, scale(mass, pred(x)));
      return acc;
    }
    case lifting_id::stream_proj: {
      if (inst.kind != functor_kind::stream) break;
      return pred(std::get<labeled_pair>(t).state);
    }
    case lifting_id::mlmc_expect: {
      if (inst.kind != functor_kind::mlmc) break;
      qvalue acc = qvalue::ext_real(rational(0));
      for (const auto& [pt, mass] : std::get<labeled_dist>(t).entries) acc = tensor(acc, scale(mass, pred(pt.second)));
      return acc;
    }
    case lifting_id::diamond_at: {
      if (inst.kind != functor_kind::stream) break;
      const auto& p = std::get<labeled_pair>(t);
      if (l.at_label < 0 || static_cast<std::size_t>(l.at_label) >= inst.labels.labels.size()) {
        throw validation_error("diamond_at: label index out of range");
      }
      return tensor(label_dist_at(inst, p.label, l.at_label), pred(p.state));
    }
  }
  throw validation_error("lifting not defined for this instance kind");
}

}  // namespace laxconf
