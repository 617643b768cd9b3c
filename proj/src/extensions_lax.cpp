#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "laxconf/extensions.hpp"

namespace laxconf {

namespace {

struct rmat {
  std::size_t nx = 0, ny = 0;
  std::vector<std::optional<rational>> v;
  const std::optional<rational>& at(int x, int y) const { return v[static_cast<std::size_t>(x) * ny + y]; }
};

rmat to_rmat(const vrel& r) {
  rmat m;
  m.nx = r.rows();
  m.ny = r.cols();
  m.v.resize(m.nx * m.ny);
  for (std::size_t i = 0; i < m.nx; ++i) {
    for (std::size_t j = 0; j < m.ny; ++j) {
      const qvalue& q = r.at(i, j);
      if (!q.is_inf()) m.v[i * m.ny + j] = q.finite();
    }
  }
  return m;
}

set_map proj_map(std::size_t nx, std::size_t ny, bool second) {
  set_map f(nx * ny);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) f[i * ny + j] = static_cast<int>(second ? j : i);
  }
  return f;
}

// ---- boolean canonical-witness routes ----------------------------------------

bool lts_lax_bool(const functor_instance& inst, const vrel& r, const label_set& u, const label_set& v) {
  const std::size_t nx = r.rows(), ny = r.cols();
  bool forward_family =
      inst.order == lts_order::sub || inst.order == lts_order::cpl || inst.order == lts_order::rd;

  // canonical coupling: on the forward side all related sources take part,
  // on the backward side only pairs already present in u and v
  std::vector<std::pair<int, int>> w_pairs;
  for (auto [a, y] : v.pairs) {
    for (std::size_t x = 0; x < nx; ++x) {
      if (!r.at(x, y).truth()) continue;
      if (!forward_family && !u.contains(a, static_cast<int>(x))) continue;
      w_pairs.emplace_back(a, static_cast<int>(x * ny + y));
    }
  }
  label_set w(std::move(w_pairs));

  functor_element left = fmap(inst, proj_map(nx, ny, false), w);
  functor_element right = fmap(inst, proj_map(nx, ny, true), w);
  return element_distance(inst, u, std::get<label_set>(left)).truth() &&
         element_distance(inst, std::get<label_set>(right), v).truth();
}

bool mts_lax_bool(const functor_instance& inst, const vrel& r, const mts_pair& s, const mts_pair& t) {
  const std::size_t nx = r.rows(), ny = r.cols();
  auto below = [&](int a, int b) { return inst.labels.label_order->at(a, b).truth(); };

  auto build = [&](const label_set& l1, const label_set& l2) {
    std::vector<std::pair<int, int>> pairs;
    for (auto [a, x] : l1.pairs) {
      for (auto [b, y] : l2.pairs) {
        if (below(a, b) && r.at(x, y).truth()) {
          pairs.emplace_back(a, static_cast<int>(static_cast<std::size_t>(x) * ny + y));
        }
      }
    }
    return label_set(std::move(pairs));
  };
  mts_pair w{build(s.must, t.must), build(s.may, t.may)};
  if (!w.must.subset_of(w.may)) return false;

  functor_element left = fmap(inst, proj_map(nx, ny, false), w);
  functor_element right = fmap(inst, proj_map(nx, ny, true), w);
  return element_distance(inst, s, std::get<mts_pair>(left)).truth() &&
         element_distance(inst, std::get<mts_pair>(right), t).truth();
}

// ---- list route ---------------------------------------------------------------

std::vector<int> list_pool(const rmat& r, const list_elem& s, const list_elem& other_side, bool left) {
  std::set<int> pool(s.begin(), s.end());
  std::set<int> other(other_side.begin(), other_side.end());
  if (left) {
    for (std::size_t x = 0; x < r.nx; ++x) {
      for (int y : other) {
        if (r.at(static_cast<int>(x), y)) {
          pool.insert(static_cast<int>(x));
          break;
        }
      }
    }
  } else {
    for (std::size_t y = 0; y < r.ny; ++y) {
      for (int x : other) {
        if (r.at(x, static_cast<int>(y))) {
          pool.insert(static_cast<int>(y));
          break;
        }
      }
    }
  }
  return std::vector<int>(pool.begin(), pool.end());
}

void supersequences_at(const list_elem& base, std::size_t extra, const std::vector<int>& pool,
                       std::set<list_elem>& out, std::size_t cap, std::size_t& work) {
  if (++work > cap * 10) throw cap_error("list route enumeration exceeded cap");
  if (extra == 0) {
    out.insert(base);
    if (out.size() > cap) throw cap_error("list route enumeration exceeded cap");
    return;
  }
  for (std::size_t pos = 0; pos <= base.size(); ++pos) {
    for (int c : pool) {
      list_elem t = base;
      t.insert(t.begin() + static_cast<long>(pos), c);
      supersequences_at(t, extra - 1, pool, out, cap, work);
    }
  }
}

qvalue list_lax(const vrel& rel, const list_elem& s, const list_elem& t, const element_limits& limits) {
  rmat r = to_rmat(rel);
  const std::size_t ns = s.size(), nt = t.size();
  if (ns > 20 || nt > 20) throw cap_error("list too long for the lax route");

  std::vector<int> pool_s = list_pool(r, s, t, true);
  std::vector<int> pool_t = list_pool(r, t, s, false);

  // subsequences, bucketed by length
  auto subs_of = [](const list_elem& base) {
    std::vector<std::vector<list_elem>> by_len(base.size() + 1);
    std::set<list_elem> seen;
    for (unsigned long long mask = 0; mask < (1ull << base.size()); ++mask) {
      list_elem sub;
      for (std::size_t i = 0; i < base.size(); ++i) {
        if (mask & (1ull << i)) sub.push_back(base[i]);
      }
      if (seen.insert(sub).second) by_len[sub.size()].push_back(std::move(sub));
    }
    return by_len;
  };
  auto subs_s = subs_of(s);
  auto subs_t = subs_of(t);

  std::optional<rational> best;  // empty = infinite
  auto consider = [&](const list_elem& a, const list_elem& b, const rational& gaps) {
    rational acc = gaps;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto& c = r.at(a[i], b[i]);
      if (!c) return;
      acc += *c;
      if (best && *best <= acc) return;
    }
    if (!best || acc < *best) best = acc;
  };

  auto gap_of = [&](std::size_t n) {
    long long gs = static_cast<long long>(n) - static_cast<long long>(ns);
    long long gt = static_cast<long long>(n) - static_cast<long long>(nt);
    return rational((gs < 0 ? -gs : gs) + (gt < 0 ? -gt : gt));
  };

  // intermediate lengths beyond ns+nt cost more than the always-available
  // empty route; visit lengths in order of increasing structural cost so the
  // bound tightens early
  std::vector<std::size_t> lengths(ns + nt + 1);
  std::iota(lengths.begin(), lengths.end(), 0u);
  std::sort(lengths.begin(), lengths.end(),
            [&](std::size_t a, std::size_t b) { return gap_of(a) < gap_of(b); });

  std::map<std::size_t, std::vector<list_elem>> sup_s, sup_t;
  std::size_t work = 0;
  auto side = [&](bool left, std::size_t n) -> const std::vector<list_elem>& {
    const list_elem& base = left ? s : t;
    auto& subs = left ? subs_s : subs_t;
    if (n <= base.size()) return subs[n];
    auto& cache = left ? sup_s : sup_t;
    auto it = cache.find(n);
    if (it == cache.end()) {
      std::set<list_elem> gen;
      supersequences_at(base, n - base.size(), left ? pool_s : pool_t, gen, limits.max_neighbors, work);
      it = cache.emplace(n, std::vector<list_elem>(gen.begin(), gen.end())).first;
    }
    return it->second;
  };

  for (std::size_t n : lengths) {
    rational gaps = gap_of(n);
    if (best && *best <= gaps) continue;
    const auto& as = side(true, n);
    const auto& bs = side(false, n);
    for (const auto& a : as) {
      for (const auto& b : bs) consider(a, b, gaps);
    }
  }
  return best ? qvalue::ext_real(*best) : qvalue::infinity();
}

}  // namespace

qvalue wasserstein_lax(const extension& ext, const vrel& r, const functor_element& t1,
                       const functor_element& t2, const element_limits& limits) {
  if (r.kind() != ext.instance.value_kind()) throw validation_error("relation quantale does not match the instance");
  switch (ext.instance.kind) {
    case functor_kind::lts_pow:
      return qvalue::boolean(lts_lax_bool(ext.instance, r, std::get<label_set>(t1), std::get<label_set>(t2)));
    case functor_kind::mts:
      return qvalue::boolean(mts_lax_bool(ext.instance, r, std::get<mts_pair>(t1), std::get<mts_pair>(t2)));
    case functor_kind::list:
      return list_lax(r, std::get<list_elem>(t1), std::get<list_elem>(t2), limits);
    case functor_kind::stream: {
      const auto& p = std::get<labeled_pair>(t1);
      const auto& q = std::get<labeled_pair>(t2);
      const vrel& da = ext.instance.labels.label_dist->rel();
      qvalue acc = qvalue::bottom(quantale_kind::ext_real);
      for (std::size_t c = 0; c < ext.instance.labels.labels.size(); ++c) {
        acc = join(acc, tensor(tensor(da.at(p.label, c), r.at(p.state, q.state)), da.at(c, q.label)));
      }
      return acc;
    }
    case functor_kind::monoid_val: {
      auto mu = dense_weights(std::get<monoid_map>(t1), r.rows());
      auto nu = dense_weights(std::get<monoid_map>(t2), r.cols());
      return unbalanced_ot(r, mu, nu);
    }
    case functor_kind::mlmc: {
      const std::size_t na = ext.instance.labels.labels.size();
      auto md = dense_dist(std::get<labeled_dist>(t1), na, r.rows());
      auto nd = dense_dist(std::get<labeled_dist>(t2), na, r.cols());
      return mlmc_bipartite(r, *ext.instance.labels.label_dist, md, nd).optimal_cost;
    }
  }
  throw internal_error("unknown functor kind");
}

qvalue wasserstein_lax_pooled(const extension& ext, const vrel& r, const functor_element& t1,
                              const functor_element& t2, const std::vector<functor_element>& pool1,
                              const std::vector<functor_element>& pool2, const element_limits& limits) {
  const quantale_kind q = ext.instance.value_kind();
  extension exact = ext;
  exact.kind = extension_kind::wasserstein_exact;
  qvalue acc = qvalue::bottom(q);
  for (const functor_element& u : pool1) {
    qvalue left = element_distance(ext.instance, t1, u);
    if (left.is_bottom()) continue;
    for (const functor_element& v : pool2) {
      qvalue right = element_distance(ext.instance, v, t2);
      if (right.is_bottom()) continue;
      qvalue mid = wasserstein_exact(exact, r, u, v, limits);
      acc = join(acc, tensor(tensor(left, mid), right));
      if (acc.is_top()) return acc;
    }
  }
  return acc;
}

qvalue kantorovich(const extension& ext, const vrel& r, const functor_element& t1,
                   const functor_element& t2, const element_limits& limits) {
  if (r.kind() != ext.instance.value_kind()) throw validation_error("relation quantale does not match the instance");
  const quantale_kind q = ext.instance.value_kind();
  grid_spec grid = ext.grid.values.empty() ? grid_spec::standard(q) : ext.grid;
  grid.validate(q);

  const std::size_t n = r.rows();
  const std::size_t g = grid.values.size();
  double combos = std::pow(static_cast<double>(g), static_cast<double>(n));
  if (combos > static_cast<double>(limits.max_neighbors)) {
    throw cap_error("predicate grid too large to enumerate");
  }

  qvalue acc = qvalue::top(q);
  std::vector<std::size_t> digit(n, 0);
  std::vector<qvalue> f(n, g == 0 ? qvalue::bottom(q) : grid.values[0]);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) f[i] = grid.values[digit[i]];
    std::vector<qvalue> rf = rel_image(r, f);
    for (const lifting& l : ext.kliftings) {
      acc = meet(acc, hom(lift(ext.instance, l, f, t1), lift(ext.instance, l, rf, t2)));
    }
    std::size_t i = 0;
    while (i < n && ++digit[i] == g) {
      digit[i] = 0;
      ++i;
    }
    if (i == n || n == 0) break;
  }
  return acc;
}

namespace {

qvalue closed_sim_step(const functor_instance& inst, const vrel& r, const label_set& u, const label_set& v) {
  auto related = [&](int x, int y) { return r.at(x, y).truth(); };
  auto forth = [&]() {
    for (auto [a, x] : u.pairs) {
      bool ok = false;
      for (int y : v.states_for(a)) {
        if (related(x, y)) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
    return true;
  };
  auto back = [&]() {
    for (auto [a, y] : v.pairs) {
      bool ok = false;
      for (int x : u.states_for(a)) {
        if (related(x, y)) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
    return true;
  };
  auto label_emptiness = [&]() {
    for (std::size_t a = 0; a < inst.labels.labels.size(); ++a) {
      if (u.states_for(static_cast<int>(a)).empty() != v.states_for(static_cast<int>(a)).empty()) return false;
    }
    return true;
  };
  bool verdict = false;
  switch (inst.order) {
    case lts_order::sub: verdict = forth(); break;
    case lts_order::sup: verdict = back(); break;
    case lts_order::cpl: verdict = forth() && (u.empty() == v.empty()); break;
    case lts_order::cpl_rev: verdict = back() && (u.empty() == v.empty()); break;
    case lts_order::rd: verdict = forth() && label_emptiness(); break;
    case lts_order::rd_rev: verdict = back() && label_emptiness(); break;
    case lts_order::discrete: verdict = forth() && back(); break;
  }
  return qvalue::boolean(verdict);
}

qvalue closed_modal_refine(const functor_instance& inst, const vrel& r, const mts_pair& s, const mts_pair& t) {
  auto below = [&](int a, int b) { return inst.labels.label_order->at(a, b).truth(); };
  // every may pair on the left survives upward, every must pair on the right
  // is justified downward
  for (auto [a, x] : s.may.pairs) {
    bool ok = false;
    for (auto [b, y] : t.may.pairs) {
      if (below(a, b) && r.at(x, y).truth()) {
        ok = true;
        break;
      }
    }
    if (!ok) return qvalue::boolean(false);
  }
  for (auto [b, y] : t.must.pairs) {
    bool ok = false;
    for (auto [a, x] : s.must.pairs) {
      if (below(a, b) && r.at(x, y).truth()) {
        ok = true;
        break;
      }
    }
    if (!ok) return qvalue::boolean(false);
  }
  return qvalue::boolean(true);
}

qvalue closed_edit_distance(const vrel& rel, const list_elem& s, const list_elem& t) {
  rmat r = to_rmat(rel);
  const std::size_t ns = s.size(), nt = t.size();
  std::vector<std::vector<std::optional<rational>>> d(ns + 1, std::vector<std::optional<rational>>(nt + 1));
  d[0][0] = rational(0);
  for (std::size_t i = 1; i <= ns; ++i) d[i][0] = rational(static_cast<long long>(i));
  for (std::size_t j = 1; j <= nt; ++j) d[0][j] = rational(static_cast<long long>(j));
  auto relax = [](std::optional<rational>& slot, const std::optional<rational>& cand) {
    if (!cand) return;
    if (!slot || *cand < *slot) slot = cand;
  };
  for (std::size_t i = 1; i <= ns; ++i) {
    for (std::size_t j = 1; j <= nt; ++j) {
      std::optional<rational> bestv;
      if (d[i - 1][j]) relax(bestv, *d[i - 1][j] + rational(1));
      if (d[i][j - 1]) relax(bestv, *d[i][j - 1] + rational(1));
      const auto& sub = r.at(s[i - 1], t[j - 1]);
      if (d[i - 1][j - 1] && sub) relax(bestv, *d[i - 1][j - 1] + *sub);
      d[i][j] = bestv;
    }
  }
  return d[ns][nt] ? qvalue::ext_real(*d[ns][nt]) : qvalue::infinity();
}

}  // namespace

qvalue closed_form(const extension& ext, const vrel& r, const functor_element& t1,
                   const functor_element& t2, const element_limits&) {
  if (r.kind() != ext.instance.value_kind()) throw validation_error("relation quantale does not match the instance");
  switch (ext.closed) {
    case closed_form_id::sim_step:
      if (ext.instance.kind != functor_kind::lts_pow) throw validation_error("sim_step needs an lts instance");
      return closed_sim_step(ext.instance, r, std::get<label_set>(t1), std::get<label_set>(t2));
    case closed_form_id::modal_refine_step:
      if (ext.instance.kind != functor_kind::mts) throw validation_error("modal_refine_step needs an mts instance");
      return closed_modal_refine(ext.instance, r, std::get<mts_pair>(t1), std::get<mts_pair>(t2));
    case closed_form_id::stream_tensor: {
      if (ext.instance.kind != functor_kind::stream) throw validation_error("stream_tensor needs a stream instance");
      const auto& p = std::get<labeled_pair>(t1);
      const auto& q = std::get<labeled_pair>(t2);
      return tensor(ext.instance.labels.label_dist->rel().at(p.label, q.label), r.at(p.state, q.state));
    }
    case closed_form_id::mlmc_tiered: {
      if (ext.instance.kind != functor_kind::mlmc) throw validation_error("mlmc_tiered needs an mlmc instance");
      const std::size_t na = ext.instance.labels.labels.size();
      auto md = dense_dist(std::get<labeled_dist>(t1), na, r.rows());
      auto nd = dense_dist(std::get<labeled_dist>(t2), na, r.cols());
      return mlmc_tiered(r, *ext.instance.labels.label_dist, md, nd).optimal_cost;
    }
    case closed_form_id::edit_distance_dp:
      if (ext.instance.kind != functor_kind::list) throw validation_error("edit_distance_dp needs a list instance");
      return closed_edit_distance(r, std::get<list_elem>(t1), std::get<list_elem>(t2));
    case closed_form_id::unbalanced_transport: {
      if (ext.instance.kind != functor_kind::monoid_val) {
        throw validation_error("unbalanced_transport needs a weighted instance");
      }
      auto mu = dense_weights(std::get<monoid_map>(t1), r.rows());
      auto nu = dense_weights(std::get<monoid_map>(t2), r.cols());
      return unbalanced_ot(r, mu, nu);
    }
  }
  throw internal_error("unknown closed form");
}

qvalue apply_extension(const extension& ext, const vrel& r, const functor_element& t1,
                       const functor_element& t2, const element_limits& limits) {
  switch (ext.kind) {
    case extension_kind::wasserstein_exact: return wasserstein_exact(ext, r, t1, t2, limits);
    case extension_kind::wasserstein_lax: return wasserstein_lax(ext, r, t1, t2, limits);
    case extension_kind::kantorovich: return kantorovich(ext, r, t1, t2, limits);
    case extension_kind::closed_form: return closed_form(ext, r, t1, t2, limits);
  }
  throw internal_error("unknown extension kind");
}

}  // namespace laxconf
