#include <algorithm>
#include <map>
#include <set>

#include "laxconf/instances.hpp"

namespace laxconf {

namespace {

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

// one chosen preimage per target index
std::vector<int> section_of(const set_map& f, std::size_t target_size) {
  std::vector<int> sec(target_size, -1);
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (sec[f[x]] < 0) sec[f[x]] = static_cast<int>(x);
  }
  return sec;
}

label_set preimage_set(const label_set& v, const set_map& f) {
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t x = 0; x < f.size(); ++x) {
    for (auto [a, y] : v.pairs) {
      if (f[x] == y) pairs.emplace_back(a, static_cast<int>(x));
    }
  }
  return label_set(std::move(pairs));
}

label_set intersect(const label_set& a, const label_set& b) {
  std::vector<std::pair<int, int>> pairs;
  std::set_intersection(a.pairs.begin(), a.pairs.end(), b.pairs.begin(), b.pairs.end(),
                        std::back_inserter(pairs));
  return label_set(std::move(pairs));
}

label_set lts_coolness(const functor_instance& inst, const set_map& f, const label_set& u,
                       const label_set& target, bool mirrored) {
  label_set pre = preimage_set(target, f);
  bool shrink;  // whether the witness must sit inside u
  switch (inst.order) {
    case lts_order::sub: shrink = mirrored; break;
    case lts_order::sup: shrink = !mirrored; break;
    case lts_order::cpl: shrink = mirrored; break;
    case lts_order::cpl_rev: shrink = !mirrored; break;
    case lts_order::rd: shrink = mirrored; break;
    case lts_order::rd_rev: shrink = !mirrored; break;
    case lts_order::discrete: {
      // related means equal images, in which case u itself is the witness
      if (std::get<label_set>(fmap(inst, f, u)) == target) return u;
      return pre;
    }
    default: throw internal_error("unknown lts order");
  }
  if (!shrink) return pre;
  label_set clipped = intersect(pre, u);
  // the clipped set maps back onto the target only when the relatedness
  // premise holds; fall back to the full preimage otherwise
  if (std::get<label_set>(fmap(inst, f, clipped)) == target) return clipped;
  return pre;
}

monoid_map monoid_coolness(const set_map& f, std::size_t target_size, const monoid_map& mu,
                           const monoid_map& target) {
  // per target point, raise or lower the fiber slots so they push onto the
  // target mass; greedy slot filling keeps the per-slot moves summing to the
  // per-point move
  std::map<int, rational> out;
  for (std::size_t y = 0; y < target_size; ++y) {
    std::vector<int> xs;
    std::vector<rational> slots;
    for (std::size_t x = 0; x < f.size(); ++x) {
      if (f[x] == static_cast<int>(y)) {
        xs.push_back(static_cast<int>(x));
        slots.push_back(mu.at(static_cast<int>(x)));
      }
    }
    rational want = target.at(static_cast<int>(y));
    if (xs.empty()) {
      if (!want.is_zero()) throw validation_error("coolness witness requires a surjective map");
      continue;
    }
    auto adjusted = greedy_decompose(slots, want);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!adjusted[i].is_zero()) out[xs[i]] += adjusted[i];
    }
  }
  return monoid_map(std::vector<std::pair<int, rational>>(out.begin(), out.end()));
}

labeled_dist mlmc_pullback_section(const set_map& f, std::size_t target_size, const labeled_dist& target) {
  auto sec = section_of(f, target_size);
  std::map<std::pair<int, int>, rational> acc;
  for (const auto& [pt, m] : target.entries) acc[{pt.first, sec[pt.second]}] += m;
  return labeled_dist(std::vector<std::pair<std::pair<int, int>, rational>>(acc.begin(), acc.end()));
}

labeled_dist mlmc_coolness(const functor_instance& inst, const set_map& f, std::size_t target_size,
                           const labeled_dist& mu, const labeled_dist& target, bool mirrored) {
  labeled_dist nu = std::get<labeled_dist>(fmap(inst, f, mu));
  // optimal label coupling between nu and the target (in the direction asked
  // for); infinite distance degenerates to a section pullback
  std::set<int> ys;
  for (const auto& [pt, m] : nu.entries) ys.insert(pt.second);
  for (const auto& [pt, m] : target.entries) ys.insert(pt.second);
  const std::size_t na = inst.labels.labels.size();

  flow_network net;
  std::map<std::pair<int, int>, int> from_nodes, to_nodes;
  const labeled_dist& from = mirrored ? target : nu;
  const labeled_dist& to = mirrored ? nu : target;
  for (int y : ys) {
    for (std::size_t a = 0; a < na; ++a) {
      rational m = from.at(static_cast<int>(a), y);
      if (!m.is_zero()) from_nodes[{static_cast<int>(a), y}] = net.add_node("f", m);
      rational m2 = to.at(static_cast<int>(a), y);
      if (!m2.is_zero()) to_nodes[{static_cast<int>(a), y}] = net.add_node("t", -m2);
    }
  }
  std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> arc_keys;
  for (const auto& [fk, fi] : from_nodes) {
    for (const auto& [tk, ti] : to_nodes) {
      if (fk.second != tk.second) continue;
      net.add_arc(fi, ti, std::nullopt, inst.labels.label_dist->rel().at(fk.first, tk.first));
      arc_keys.push_back({fk, tk});
    }
  }
  transport_result res = min_cost_flow(net);
  if (res.optimal_cost.is_inf()) return mlmc_pullback_section(f, target_size, target);

  // redistribute each coupled label channel over the state fiber of mu
  std::map<std::pair<int, int>, rational> out;
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    rational mass = res.flow[i];
    if (mass.is_zero()) continue;
    auto [fk, tk] = arc_keys[i];
    // label pair along the coupling; (a,y) is always the nu side
    int a = mirrored ? tk.first : fk.first;
    int b = mirrored ? fk.first : tk.first;
    int y = fk.second;
    rational denom = nu.at(a, y);
    for (std::size_t x = 0; x < f.size(); ++x) {
      if (f[x] != y) continue;
      rational mx = mu.at(a, static_cast<int>(x));
      if (mx.is_zero()) continue;
      out[{b, static_cast<int>(x)}] += mass * (mx / denom);
    }
  }
  return labeled_dist(std::vector<std::pair<std::pair<int, int>, rational>>(out.begin(), out.end()));
}

}  // namespace

functor_element coolness_witness(const functor_instance& inst, const set_map& f, const carrier& x,
                                 const carrier& y, const functor_element& t,
                                 const functor_element& t_target, bool mirrored) {
  if (f.size() != x.size()) throw validation_error("coolness_witness: map size mismatch");
  if (!is_surjective(f, y.size())) throw validation_error("coolness_witness: surjective map required");
  if (!element_matches_kind(inst, t) || !element_matches_kind(inst, t_target)) {
    throw validation_error("coolness_witness: element kind mismatch");
  }

  switch (inst.kind) {
    case functor_kind::lts_pow:
      return lts_coolness(inst, f, std::get<label_set>(t), std::get<label_set>(t_target), mirrored);
    case functor_kind::mts: {
      const auto& s = std::get<mts_pair>(t);
      const auto& tgt = std::get<mts_pair>(t_target);
      label_set may_w = preimage_set(tgt.may, f);
      // must pairs additionally need a justifying pair in the source element
      std::vector<std::pair<int, int>> must_pairs;
      for (auto [b, xi] : preimage_set(tgt.must, f).pairs) {
        bool justified = false;
        const label_set& base = mirrored ? s.may : s.must;
        for (auto [a, x2] : base.pairs) {
          bool rel = mirrored ? inst.labels.label_order->at(b, a).truth()
                              : inst.labels.label_order->at(a, b).truth();
          if (x2 == xi && rel) {
            justified = true;
            break;
          }
        }
        if (justified) must_pairs.emplace_back(b, xi);
      }
      label_set must_w{std::move(must_pairs)};
      if (mirrored) {
        // mirrored witnesses clip the may side against the source element
        std::vector<std::pair<int, int>> clipped;
        for (auto [a, xi] : may_w.pairs) {
          for (auto [b, x2] : s.may.pairs) {
            if (x2 == xi && inst.labels.label_order->at(a, b).truth()) {
              clipped.emplace_back(a, xi);
              break;
            }
          }
        }
        label_set may_c{std::move(clipped)};
        functor_element cand = mts_pair{must_w.subset_of(may_c) ? must_w : intersect(must_w, may_c), may_c};
        if (std::get<mts_pair>(fmap(inst, f, cand)) == tgt) return cand;
        return mts_pair{preimage_set(tgt.must, f), preimage_set(tgt.may, f)};
      }
      functor_element cand = mts_pair{must_w, may_w};
      if (std::get<mts_pair>(fmap(inst, f, cand)) == tgt) return cand;
      return mts_pair{preimage_set(tgt.must, f), preimage_set(tgt.may, f)};
    }
    case functor_kind::list: {
      const auto& s = std::get<list_elem>(t);
      const auto& tgt = std::get<list_elem>(t_target);
      list_elem fs = std::get<list_elem>(fmap(inst, f, s));
      auto sec = section_of(f, y.size());
      if (auto emb = embedding(tgt, fs)) {
        // target embeds into the image: thin s out along the same indices
        list_elem out;
        for (int idx : *emb) out.push_back(s[idx]);
        return out;
      }
      if (auto emb2 = embedding(fs, tgt)) {
        // image embeds into the target: widen s with section preimages
        list_elem out;
        std::size_t k = 0;
        for (std::size_t j = 0; j < tgt.size(); ++j) {
          if (k < emb2->size() && (*emb2)[k] == static_cast<int>(j)) {
            out.push_back(s[k]);
            ++k;
          } else {
            out.push_back(sec[tgt[j]]);
          }
        }
        return out;
      }
      // infinite distance: any preimage works
      list_elem out;
      for (int yy : tgt) out.push_back(sec[yy]);
      return out;
    }
    case functor_kind::monoid_val:
      return monoid_coolness(f, y.size(), std::get<monoid_map>(t), std::get<monoid_map>(t_target));
    case functor_kind::stream: {
      const auto& p = std::get<labeled_pair>(t);
      const auto& tgt = std::get<labeled_pair>(t_target);
      if (f[p.state] == tgt.state) return labeled_pair{tgt.label, p.state};
      auto sec = section_of(f, y.size());
      return labeled_pair{tgt.label, sec[tgt.state]};
    }
    case functor_kind::mlmc:
      return mlmc_coolness(inst, f, y.size(), std::get<labeled_dist>(t), std::get<labeled_dist>(t_target),
                           mirrored);
  }
  throw internal_error("unknown functor kind");
}

std::vector<rational> dense_weights(const monoid_map& m, std::size_t n) {
  std::vector<rational> out(n, rational(0));
  for (const auto& [x, mass] : m.entries) {
    if (x < 0 || static_cast<std::size_t>(x) >= n) throw validation_error("weight index out of range");
    out[x] = mass;
  }
  return out;
}

rational_matrix dense_dist(const labeled_dist& d, std::size_t labels, std::size_t states) {
  rational_matrix out(labels, std::vector<rational>(states, rational(0)));
  for (const auto& [pt, mass] : d.entries) {
    if (pt.first < 0 || static_cast<std::size_t>(pt.first) >= labels || pt.second < 0 ||
        static_cast<std::size_t>(pt.second) >= states) {
      throw validation_error("distribution point out of range");
    }
    out[pt.first][pt.second] = mass;
  }
  return out;
}

std::vector<functor_element> enumerate_elements(const functor_instance& inst, const carrier& states,
                                                std::size_t max_list_len, std::size_t max_pool) {
  std::vector<functor_element> out;
  auto guard = [&]() {
    if (out.size() > max_pool) throw cap_error("element pool exceeded cap");
  };
  switch (inst.kind) {
    case functor_kind::lts_pow: {
      std::vector<std::pair<int, int>> ground;
      for (std::size_t a = 0; a < inst.labels.labels.size(); ++a) {
        for (std::size_t s = 0; s < states.size(); ++s) ground.emplace_back(static_cast<int>(a), static_cast<int>(s));
      }
      if (ground.size() > 20) throw cap_error("ground set too large to enumerate");
      for (unsigned long long mask = 0; mask < (1ull << ground.size()); ++mask) {
        std::vector<std::pair<int, int>> pairs;
        for (std::size_t i = 0; i < ground.size(); ++i) {
          if (mask & (1ull << i)) pairs.push_back(ground[i]);
        }
        out.push_back(label_set(std::move(pairs)));
        guard();
      }
      return out;
    }
    case functor_kind::mts: {
      functor_instance plain = inst;
      plain.kind = functor_kind::lts_pow;
      auto sets = enumerate_elements(plain, states, max_list_len, max_pool);
      for (const auto& may : sets) {
        const auto& may_set = std::get<label_set>(may);
        for (const auto& must : sets) {
          const auto& must_set = std::get<label_set>(must);
          if (must_set.subset_of(may_set)) {
            out.push_back(mts_pair{must_set, may_set});
            guard();
          }
        }
      }
      return out;
    }
    case functor_kind::list: {
      std::vector<list_elem> level{{}};
      out.push_back(list_elem{});
      for (std::size_t len = 1; len <= max_list_len; ++len) {
        std::vector<list_elem> next;
        for (const auto& l : level) {
          for (std::size_t s = 0; s < states.size(); ++s) {
            list_elem e = l;
            e.push_back(static_cast<int>(s));
            out.push_back(e);
            guard();
            next.push_back(std::move(e));
          }
        }
        level = std::move(next);
      }
      return out;
    }
    case functor_kind::stream: {
      for (std::size_t a = 0; a < inst.labels.labels.size(); ++a) {
        for (std::size_t s = 0; s < states.size(); ++s) {
          out.push_back(labeled_pair{static_cast<int>(a), static_cast<int>(s)});
          guard();
        }
      }
      return out;
    }
    case functor_kind::monoid_val:
    case functor_kind::mlmc:
      throw cap_error("weight-valued element spaces are not enumerable");
  }
  throw internal_error("unknown functor kind");
}

}  // namespace laxconf
