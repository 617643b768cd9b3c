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

std::vector<std::pair<int, int>> ground_pairs(const functor_instance& inst, const carrier& states) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t a = 0; a < inst.labels.labels.size(); ++a) {
    for (std::size_t x = 0; x < states.size(); ++x) {
      out.emplace_back(static_cast<int>(a), static_cast<int>(x));
    }
  }
  return out;
}

label_set set_from_mask(const std::vector<std::pair<int, int>>& ground, unsigned long long mask) {
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < ground.size(); ++i) {
    if (mask & (1ull << i)) pairs.push_back(ground[i]);
  }
  return label_set(std::move(pairs));
}

void enumerate_subsequences(const list_elem& s, std::size_t min_len,
                            std::set<list_elem>& out) {
  const std::size_t n = s.size();
  if (n > 20) throw cap_error("list too long to enumerate subsequences");
  for (unsigned long long mask = 0; mask < (1ull << n); ++mask) {
    list_elem sub;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1ull << i)) sub.push_back(s[i]);
    }
    if (sub.size() >= min_len) out.insert(std::move(sub));
  }
}

void enumerate_supersequences(const list_elem& s, std::size_t extra, const std::vector<int>& pool,
                              std::set<list_elem>& out, std::size_t cap, std::size_t& work) {
  if (++work > cap * 10) throw cap_error("lax neighbor enumeration exceeded cap");
  if (extra == 0) {
    out.insert(s);
    if (out.size() > cap) throw cap_error("lax neighbor enumeration exceeded cap");
    return;
  }
  for (std::size_t pos = 0; pos <= s.size(); ++pos) {
    for (int c : pool) {
      list_elem t = s;
      t.insert(t.begin() + static_cast<long>(pos), c);
      enumerate_supersequences(t, extra - 1, pool, out, cap, work);
    }
  }
}

}  // namespace

std::vector<neighbor> lax_neighbors(const functor_instance& inst, const functor_element& t,
                                    const qvalue& budget, const carrier& states,
                                    const std::vector<int>& pool, bool mirrored,
                                    const element_limits& limits) {
  if (budget.kind() != inst.value_kind()) throw validation_error("lax_neighbors: budget from wrong quantale");
  if (budget.is_bottom()) throw validation_error("lax_neighbors: bottom budget");
  std::vector<neighbor> out;
  auto push = [&](functor_element e, qvalue cost) {
    if (!leq(budget, cost)) return;  // below the budget: drop
    out.push_back({std::move(e), std::move(cost)});
    if (out.size() > limits.max_neighbors) throw cap_error("lax neighbor enumeration exceeded cap");
  };
  auto cost_of = [&](const functor_element& cand) {
    return mirrored ? element_distance(inst, cand, t) : element_distance(inst, t, cand);
  };

  switch (inst.kind) {
    case functor_kind::lts_pow: {
      auto ground = ground_pairs(inst, states);
      if (ground.size() > 20) throw cap_error("label-state ground set too large to enumerate");
      for (unsigned long long mask = 0; mask < (1ull << ground.size()); ++mask) {
        label_set cand = set_from_mask(ground, mask);
        qvalue c = cost_of(cand);
        if (!c.is_bottom()) push(cand, c);
      }
      return out;
    }
    case functor_kind::mts: {
      auto ground = ground_pairs(inst, states);
      if (ground.size() > 14) throw cap_error("label-state ground set too large to enumerate");
      for (unsigned long long may = 0; may < (1ull << ground.size()); ++may) {
        for (unsigned long long must = may;; must = (must - 1) & may) {
          mts_pair cand{set_from_mask(ground, must), set_from_mask(ground, may)};
          qvalue c = cost_of(cand);
          if (!c.is_bottom()) push(cand, c);
          if (must == 0) break;
        }
      }
      return out;
    }
    case functor_kind::list: {
      const auto& s = std::get<list_elem>(t);
      if (budget.is_inf()) throw validation_error("lax_neighbors: bottom budget");
      rational b = budget.finite();
      if (b > rational(64)) throw cap_error("list neighbor budget too large to enumerate");
      std::size_t gap = 0;
      while (rational(static_cast<long long>(gap) + 1) <= b) ++gap;
      std::set<list_elem> cands;
      std::size_t min_len = s.size() > gap ? s.size() - gap : 0;
      enumerate_subsequences(s, min_len, cands);
      std::size_t work = 0;
      for (std::size_t extra = 1; extra <= gap; ++extra) {
        enumerate_supersequences(s, extra, pool, cands, limits.max_neighbors, work);
      }
      for (const auto& cand : cands) {
        qvalue c = cost_of(cand);
        if (!c.is_bottom()) push(cand, c);
      }
      return out;
    }
    case functor_kind::stream: {
      const auto& p = std::get<labeled_pair>(t);
      for (std::size_t c = 0; c < inst.labels.labels.size(); ++c) {
        labeled_pair cand{static_cast<int>(c), p.state};
        qvalue v = cost_of(cand);
        if (!v.is_bottom()) push(cand, v);
      }
      return out;
    }
    case functor_kind::monoid_val:
    case functor_kind::mlmc:
      throw validation_error("lax neighborhoods of weight-valued elements are handled by the transport module");
  }
  throw internal_error("unknown functor kind");
}

std::vector<int> initial_actions(const coalgebra& c, int state) {
  if (c.instance.kind != functor_kind::lts_pow) throw validation_error("initial_actions: lts coalgebra expected");
  if (state < 0 || static_cast<std::size_t>(state) >= c.states.size()) {
    throw validation_error("initial_actions: state out of range");
  }
  std::set<int> acts;
  for (auto [a, x] : std::get<label_set>(c.structure[state]).pairs) acts.insert(a);
  return std::vector<int>(acts.begin(), acts.end());
}

// ---- exact squares -------------------------------------------------------

exact_square pullback_square(const carrier& x, const carrier& y, const carrier& z, const set_map& f,
                             const set_map& g) {
  if (f.size() != x.size() || g.size() != y.size()) throw validation_error("pullback: map sizes must match carriers");
  exact_square sq;
  sq.x = x;
  sq.y = y;
  sq.z = z;
  sq.f = f;
  sq.g = g;
  std::vector<std::string> keys;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (f[i] == g[j]) {
        keys.push_back(x.keys[i] + '\x1f' + y.keys[j]);
        sq.u.push_back(static_cast<int>(i));
        sq.v.push_back(static_cast<int>(j));
      }
    }
  }
  sq.p = carrier(x.id + "*z*" + y.id, std::move(keys));
  return sq;
}

namespace {

// index of the pullback element (x,y), or -1
int pullback_index(const exact_square& sq, int x, int y) {
  for (std::size_t p = 0; p < sq.u.size(); ++p) {
    if (sq.u[p] == x && sq.v[p] == y) return static_cast<int>(p);
  }
  return -1;
}

// splits the mass vector `vals` (slots in given order) down/up so it sums to
// target; returns per-slot values
std::vector<rational> resize_slots(const std::vector<rational>& vals, const rational& target) {
  return greedy_decompose(vals, target);
}

// northwest-corner coupling of two equal-mass slot vectors
std::vector<std::vector<rational>> northwest(const std::vector<rational>& rows,
                                             const std::vector<rational>& cols) {
  std::vector<std::vector<rational>> plan(rows.size(), std::vector<rational>(cols.size(), rational(0)));
  std::vector<rational> r = rows, c = cols;
  std::size_t i = 0, j = 0;
  while (i < r.size() && j < c.size()) {
    if (r[i].is_zero()) {
      ++i;
      continue;
    }
    if (c[j].is_zero()) {
      ++j;
      continue;
    }
    rational m = min(r[i], c[j]);
    plan[i][j] = m;
    r[i] -= m;
    c[j] -= m;
  }
  return plan;
}

std::optional<functor_element> monoid_exactness_witness(const exact_square& sq, const monoid_map& mu,
                                                        const monoid_map& nu, const set_map& f,
                                                        const set_map& g) {
  // shrink both sides to the pointwise min of their pushforwards, then
  // couple within each fiber of z
  std::map<int, rational> push_mu, push_nu;
  for (const auto& [x, m] : mu.entries) push_mu[f[x]] += m;
  for (const auto& [y, m] : nu.entries) push_nu[g[y]] += m;
  std::vector<std::pair<int, rational>> out;
  for (std::size_t z = 0; z < sq.z.size(); ++z) {
    int zi = static_cast<int>(z);
    rational sigma = min(push_mu.count(zi) ? push_mu[zi] : rational(0),
                         push_nu.count(zi) ? push_nu[zi] : rational(0));
    if (sigma.is_zero()) continue;
    std::vector<int> xs, ys;
    std::vector<rational> mu_slots, nu_slots;
    for (std::size_t x = 0; x < sq.x.size(); ++x) {
      if (f[x] == zi) {
        xs.push_back(static_cast<int>(x));
        mu_slots.push_back(mu.at(static_cast<int>(x)));
      }
    }
    for (std::size_t y = 0; y < sq.y.size(); ++y) {
      if (g[y] == zi) {
        ys.push_back(static_cast<int>(y));
        nu_slots.push_back(nu.at(static_cast<int>(y)));
      }
    }
    auto mu_low = resize_slots(mu_slots, sigma);
    auto nu_low = resize_slots(nu_slots, sigma);
    auto plan = northwest(mu_low, nu_low);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = 0; j < ys.size(); ++j) {
        if (plan[i][j].is_zero()) continue;
        int p = pullback_index(sq, xs[i], ys[j]);
        if (p < 0) throw internal_error("pullback misses fiber pair");
        out.emplace_back(p, plan[i][j]);
      }
    }
  }
  std::map<int, rational> acc;
  for (const auto& [p, m] : out) acc[p] += m;
  return monoid_map(std::vector<std::pair<int, rational>>(acc.begin(), acc.end()));
}

// optimal label coupling of two distributions that share state marginals:
// sigma[(a,z),(b,z)] with expected label distance equal to their distance
std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, rational> optimal_label_coupling(
    const functor_instance& inst, const labeled_dist& mu, const labeled_dist& nu, bool& infinite) {
  std::set<int> zs;
  for (const auto& [pt, m] : mu.entries) zs.insert(pt.second);
  for (const auto& [pt, m] : nu.entries) zs.insert(pt.second);
  const std::size_t na = inst.labels.labels.size();
  flow_network net;
  std::vector<std::pair<int, int>> left_keys, right_keys;
  std::map<std::pair<int, int>, int> left, right;
  for (int z : zs) {
    for (std::size_t a = 0; a < na; ++a) {
      rational m = mu.at(static_cast<int>(a), z);
      if (!m.is_zero()) {
        left[{static_cast<int>(a), z}] = net.add_node("l", m);
        left_keys.emplace_back(static_cast<int>(a), z);
      }
      rational m2 = nu.at(static_cast<int>(a), z);
      if (!m2.is_zero()) {
        right[{static_cast<int>(a), z}] = net.add_node("r", -m2);
        right_keys.emplace_back(static_cast<int>(a), z);
      }
    }
  }
  struct arc_key {
    std::pair<int, int> from, to;
  };
  std::vector<arc_key> arc_keys;
  for (const auto& [lk, li] : left) {
    for (const auto& [rk, ri] : right) {
      if (lk.second != rk.second) continue;
      net.add_arc(li, ri, std::nullopt, inst.labels.label_dist->rel().at(lk.first, rk.first));
      arc_keys.push_back({lk, rk});
    }
  }
  transport_result res = min_cost_flow(net);
  std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, rational> sigma;
  if (res.optimal_cost.is_inf()) {
    infinite = true;
    return sigma;
  }
  infinite = false;
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    if (!res.flow[i].is_zero()) sigma[{arc_keys[i].from, arc_keys[i].to}] = res.flow[i];
  }
  return sigma;
}

std::optional<functor_element> mlmc_exactness_witness(const functor_instance& inst, const exact_square& sq,
                                                      const labeled_dist& mu, const labeled_dist& nu) {
  labeled_dist push_mu = std::get<labeled_dist>(fmap(inst, sq.f, mu));
  labeled_dist push_nu = std::get<labeled_dist>(fmap(inst, sq.g, nu));
  bool infinite = false;
  auto sigma = optimal_label_coupling(inst, push_mu, push_nu, infinite);
  if (infinite) return std::nullopt;

  // split every coupled (a,z)->(b,z) channel across the (x,y) fibers of z,
  // proportionally to mu and nu restricted to the fiber
  std::map<std::pair<int, int>, rational> rho;  // (label a, pullback index)
  for (const auto& [ch, mass] : sigma) {
    auto [az, bz] = ch;
    int a = az.first, z = az.second, b = bz.first;
    rational denom_mu = push_mu.at(a, z);
    rational denom_nu = push_nu.at(b, z);
    for (std::size_t x = 0; x < sq.x.size(); ++x) {
      if (sq.f[x] != z) continue;
      rational mx = mu.at(a, static_cast<int>(x));
      if (mx.is_zero()) continue;
      for (std::size_t y = 0; y < sq.y.size(); ++y) {
        if (sq.g[y] != z) continue;
        rational ny = nu.at(b, static_cast<int>(y));
        if (ny.is_zero()) continue;
        int p = pullback_index(sq, static_cast<int>(x), static_cast<int>(y));
        if (p < 0) throw internal_error("pullback misses fiber pair");
        rho[{a, p}] += mass * (mx / denom_mu) * (ny / denom_nu);
      }
    }
  }
  std::vector<std::pair<std::pair<int, int>, rational>> entries;
  for (const auto& [k, m] : rho) entries.push_back({k, m});
  return labeled_dist(std::move(entries));
}

}  // namespace

std::optional<functor_element> exactness_witness(const functor_instance& inst, const exact_square& sq,
                                                 const functor_element& t1, const functor_element& t2) {
  functor_element left = fmap(inst, sq.f, t1);
  functor_element right = fmap(inst, sq.g, t2);
  if (element_distance(inst, left, right).is_bottom()) return std::nullopt;

  switch (inst.kind) {
    case functor_kind::lts_pow: {
      const auto& u = std::get<label_set>(t1);
      const auto& v = std::get<label_set>(t2);
      std::vector<std::pair<int, int>> w;
      for (auto [a, x] : u.pairs) {
        for (auto [b, y] : v.pairs) {
          if (a != b) continue;
          int p = pullback_index(sq, x, y);
          if (p >= 0) w.emplace_back(a, p);
        }
      }
      return label_set(std::move(w));
    }
    case functor_kind::mts: {
      const auto& s = std::get<mts_pair>(t1);
      const auto& t = std::get<mts_pair>(t2);
      auto build = [&](const label_set& l1, const label_set& l2) {
        std::vector<std::pair<int, int>> w;
        for (auto [a, x] : l1.pairs) {
          for (auto [b, y] : l2.pairs) {
            if (!inst.labels.label_order->at(a, b).truth()) continue;
            int p = pullback_index(sq, x, y);
            if (p >= 0) w.emplace_back(a, p);
          }
        }
        return label_set(std::move(w));
      };
      return mts_pair{build(s.must, t.must), build(s.may, t.may)};
    }
    case functor_kind::list: {
      const auto& s = std::get<list_elem>(t1);
      const auto& t = std::get<list_elem>(t2);
      const auto& fs = std::get<list_elem>(left);
      const auto& gt = std::get<list_elem>(right);
      list_elem w;
      if (auto emb = embedding(fs, gt)) {
        for (std::size_t i = 0; i < s.size(); ++i) {
          int p = pullback_index(sq, s[i], t[(*emb)[i]]);
          if (p < 0) throw internal_error("pullback misses matched list entry");
          w.push_back(p);
        }
      } else if (auto emb2 = embedding(gt, fs)) {
        for (std::size_t j = 0; j < t.size(); ++j) {
          int p = pullback_index(sq, s[(*emb2)[j]], t[j]);
          if (p < 0) throw internal_error("pullback misses matched list entry");
          w.push_back(p);
        }
      } else {
        throw internal_error("finite list distance without subsequence relation");
      }
      return w;
    }
    case functor_kind::stream: {
      const auto& p1 = std::get<labeled_pair>(t1);
      const auto& p2 = std::get<labeled_pair>(t2);
      int p = pullback_index(sq, p1.state, p2.state);
      if (p < 0) return std::nullopt;
      return labeled_pair{p1.label, p};
    }
    case functor_kind::monoid_val:
      return monoid_exactness_witness(sq, std::get<monoid_map>(t1), std::get<monoid_map>(t2), sq.f, sq.g);
    case functor_kind::mlmc:
      return mlmc_exactness_witness(inst, sq, std::get<labeled_dist>(t1), std::get<labeled_dist>(t2));
  }
  throw internal_error("unknown functor kind");
}

}  // namespace laxconf
