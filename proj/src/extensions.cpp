#include "laxconf/extensions.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "laxconf/json_io.hpp"

namespace laxconf {

namespace {

std::vector<qvalue> flatten_rel(const vrel& r) {
  std::vector<qvalue> f;
  f.reserve(r.rows() * r.cols());
  for (std::size_t i = 0; i < r.rows(); ++i) {
    for (std::size_t j = 0; j < r.cols(); ++j) f.push_back(r.at(i, j));
  }
  return f;
}

void require_rel_kind(const extension& ext, const vrel& r) {
  if (r.kind() != ext.instance.value_kind()) {
    throw validation_error("relation quantale does not match the instance");
  }
}

}  // namespace

grid_spec grid_spec::standard(quantale_kind k) {
  grid_spec g;
  switch (k) {
    case quantale_kind::boolean:
      g.values = {qvalue::boolean(false), qvalue::boolean(true)};
      break;
    case quantale_kind::ext_real:
      g.values = {qvalue::ext_real(rational(0)), qvalue::ext_real(rational(1, 2)), qvalue::ext_real(rational(1)),
                  qvalue::ext_real(rational(2)), qvalue::infinity()};
      break;
    case quantale_kind::unit_trunc:
      g.values = {qvalue::unit_trunc(rational(0)), qvalue::unit_trunc(rational(1, 2)), qvalue::unit_trunc(rational(1))};
      break;
  }
  return g;
}

void grid_spec::validate(quantale_kind k) const {
  bool top = false, bottom = false, unit = false;
  for (const qvalue& v : values) {
    if (v.kind() != k) throw validation_error("grid value from wrong quantale");
    top |= v.is_top();
    bottom |= v.is_bottom();
    unit |= v.is_unit();
  }
  if (!top || !bottom || !unit) throw validation_error("grid must contain top, bottom and the unit");
}

extension extension::wasserstein_exact(functor_instance inst) {
  extension e;
  e.kind = extension_kind::wasserstein_exact;
  e.lift_id = default_lifting(inst);
  e.instance = std::move(inst);
  return e;
}

extension extension::wasserstein_lax(functor_instance inst) {
  extension e = wasserstein_exact(std::move(inst));
  e.kind = extension_kind::wasserstein_lax;
  return e;
}

extension extension::kantorovich(functor_instance inst) {
  std::vector<lifting> lifts = dual_liftings(inst);
  return kantorovich(std::move(inst), std::move(lifts), grid_spec{});
}

extension extension::kantorovich(functor_instance inst, std::vector<lifting> lifts, grid_spec grid) {
  extension e;
  e.kind = extension_kind::kantorovich;
  if (grid.values.empty()) grid = grid_spec::standard(inst.value_kind());
  grid.validate(inst.value_kind());
  e.grid = std::move(grid);
  e.kliftings = std::move(lifts);
  e.lift_id = default_lifting(inst);
  e.instance = std::move(inst);
  return e;
}

extension extension::closed_form_for(functor_instance inst) {
  extension e;
  e.kind = extension_kind::closed_form;
  e.lift_id = default_lifting(inst);
  switch (inst.kind) {
    case functor_kind::lts_pow: e.closed = closed_form_id::sim_step; break;
    case functor_kind::mts: e.closed = closed_form_id::modal_refine_step; break;
    case functor_kind::stream: e.closed = closed_form_id::stream_tensor; break;
    case functor_kind::mlmc: e.closed = closed_form_id::mlmc_tiered; break;
    case functor_kind::list: e.closed = closed_form_id::edit_distance_dp; break;
    case functor_kind::monoid_val: e.closed = closed_form_id::unbalanced_transport; break;
  }
  e.instance = std::move(inst);
  return e;
}

std::vector<lifting> dual_liftings(const functor_instance& inst) {
  // couplings keep labels aligned on the coupling side; the predicate side
  // has to carry the labels itself, hence the per-label families
  switch (inst.kind) {
    case functor_kind::lts_pow: {
      std::vector<lifting> out;
      const int labels = static_cast<int>(inst.labels.labels.size());
      switch (inst.order) {
        case lts_order::sub:
          for (int a = 0; a < labels; ++a) out.push_back(lifting::at(lifting_id::diamond_label, a));
          return out;
        case lts_order::sup:
          for (int a = 0; a < labels; ++a) out.push_back(lifting::at(lifting_id::box_label, a));
          return out;
        case lts_order::discrete:
          for (int a = 0; a < labels; ++a) {
            out.push_back(lifting::at(lifting_id::box_label, a));
            out.push_back(lifting::at(lifting_id::diamond_label, a));
          }
          return out;
        default:
          throw validation_error("no Kantorovich lifting set shipped for this order variant");
      }
    }
    case functor_kind::stream: {
      std::vector<lifting> out;
      for (std::size_t a = 0; a < inst.labels.labels.size(); ++a) {
        out.push_back(lifting::at(lifting_id::diamond_at, static_cast<int>(a)));
      }
      return out;
    }
    default:
      throw validation_error("no Kantorovich lifting set shipped for this instance");
  }
}

// ---- coupling enumeration ---------------------------------------------------

namespace {

void lts_couplings_rec(const std::vector<std::pair<int, int>>& u_pairs,
                       const std::vector<std::vector<int>>& partners, std::size_t idx,
                       std::vector<std::pair<int, int>>& chosen, std::set<std::pair<int, int>>& covered,
                       const std::set<std::pair<int, int>>& v_pairs, std::size_t ny,
                       std::vector<label_set>& out, const element_limits& limits, std::size_t& work) {
  if (++work > limits.max_couplings * 16) throw cap_error("coupling enumeration exceeded cap");
  if (idx == u_pairs.size()) {
    if (covered.size() == v_pairs.size()) {
      out.push_back(label_set(chosen));
      if (out.size() > limits.max_couplings) throw cap_error("coupling enumeration exceeded cap");
    }
    return;
  }
  auto [a, x] = u_pairs[idx];
  const auto& ys = partners[idx];
  // nonempty subset of partner targets for this pair
  for (unsigned long long mask = 1; mask < (1ull << ys.size()); ++mask) {
    std::size_t added = chosen.size();
    std::vector<std::pair<int, int>> newly;
    for (std::size_t k = 0; k < ys.size(); ++k) {
      if (mask & (1ull << k)) {
        chosen.emplace_back(a, static_cast<int>(static_cast<std::size_t>(x) * ny + ys[k]));
        auto key = std::make_pair(a, ys[k]);
        if (covered.insert(key).second) newly.push_back(key);
      }
    }
    lts_couplings_rec(u_pairs, partners, idx + 1, chosen, covered, v_pairs, ny, out, limits, work);
    chosen.resize(added);
    for (const auto& key : newly) covered.erase(key);
  }
}

std::vector<label_set> lts_couplings(const label_set& u, const label_set& v, std::size_t ny,
                                     const element_limits& limits) {
  std::vector<std::vector<int>> partners;
  for (auto [a, x] : u.pairs) {
    std::vector<int> ys = v.states_for(a);
    if (ys.empty()) return {};
    partners.push_back(std::move(ys));
  }
  std::set<std::pair<int, int>> v_pairs(v.pairs.begin(), v.pairs.end());
  std::vector<label_set> out;
  std::vector<std::pair<int, int>> chosen;
  std::set<std::pair<int, int>> covered;
  std::size_t work = 0;
  lts_couplings_rec(u.pairs, partners, 0, chosen, covered, v_pairs, ny, out, limits, work);
  return out;
}

// all nonnegative integer matrices with the given row and column sums
void matrix_couplings_rec(const std::vector<long long>& rows, std::vector<long long>& cols_left,
                          std::size_t row, std::size_t col, long long row_left,
                          std::vector<std::vector<long long>>& cur,
                          std::vector<std::vector<std::vector<long long>>>& out,
                          const element_limits& limits, std::size_t& work) {
  if (++work > limits.max_couplings * 64) throw cap_error("coupling enumeration exceeded cap");
  if (row == rows.size()) {
    if (std::all_of(cols_left.begin(), cols_left.end(), [](long long c) { return c == 0; })) {
      out.push_back(cur);
      if (out.size() > limits.max_couplings) throw cap_error("coupling enumeration exceeded cap");
    }
    return;
  }
  if (col == cols_left.size()) {
    if (row_left == 0) {
      matrix_couplings_rec(rows, cols_left, row + 1, 0, row + 1 < rows.size() ? rows[row + 1] : 0, cur, out,
                           limits, work);
    }
    return;
  }
  long long most = std::min(row_left, cols_left[col]);
  for (long long put = 0; put <= most; ++put) {
    cur[row][col] = put;
    cols_left[col] -= put;
    matrix_couplings_rec(rows, cols_left, row, col + 1, row_left - put, cur, out, limits, work);
    cols_left[col] += put;
    cur[row][col] = 0;
  }
}

std::vector<std::vector<std::vector<long long>>> matrix_couplings(const std::vector<long long>& rows,
                                                                  const std::vector<long long>& cols,
                                                                  const element_limits& limits) {
  long long total_r = std::accumulate(rows.begin(), rows.end(), 0ll);
  long long total_c = std::accumulate(cols.begin(), cols.end(), 0ll);
  if (total_r != total_c) return {};
  std::vector<std::vector<std::vector<long long>>> out;
  std::vector<long long> cols_left = cols;
  std::vector<std::vector<long long>> cur(rows.size(), std::vector<long long>(cols.size(), 0));
  std::size_t work = 0;
  matrix_couplings_rec(rows, cols_left, 0, 0, rows.empty() ? 0 : rows[0], cur, out, limits, work);
  return out;
}

long long lcm_denominator(std::initializer_list<const std::vector<rational>*> vecs) {
  long long l = 1;
  for (const auto* v : vecs) {
    for (const rational& r : *v) l = std::lcm(l, r.den());
  }
  return l;
}

}  // namespace

std::vector<functor_element> couplings(const functor_instance& inst, const functor_element& t1,
                                       const carrier& x, const functor_element& t2, const carrier& y,
                                       const element_limits& limits) {
  const std::size_t ny = y.size();
  switch (inst.kind) {
    case functor_kind::lts_pow: {
      std::vector<functor_element> out;
      for (auto& w : lts_couplings(std::get<label_set>(t1), std::get<label_set>(t2), ny, limits)) {
        out.push_back(std::move(w));
      }
      return out;
    }
    case functor_kind::mts: {
      const auto& s = std::get<mts_pair>(t1);
      const auto& t = std::get<mts_pair>(t2);
      auto musts = lts_couplings(s.must, t.must, ny, limits);
      auto mays = lts_couplings(s.may, t.may, ny, limits);
      std::vector<functor_element> out;
      for (const auto& mu : musts) {
        for (const auto& ma : mays) {
          if (mu.subset_of(ma)) {
            out.push_back(mts_pair{mu, ma});
            if (out.size() > limits.max_couplings) throw cap_error("coupling enumeration exceeded cap");
          }
        }
      }
      return out;
    }
    case functor_kind::list: {
      const auto& s = std::get<list_elem>(t1);
      const auto& t = std::get<list_elem>(t2);
      if (s.size() != t.size()) return {};
      list_elem zip;
      for (std::size_t i = 0; i < s.size(); ++i) {
        zip.push_back(static_cast<int>(static_cast<std::size_t>(s[i]) * ny + t[i]));
      }
      return {zip};
    }
    case functor_kind::stream: {
      const auto& p = std::get<labeled_pair>(t1);
      const auto& q = std::get<labeled_pair>(t2);
      if (p.label != q.label) return {};
      return {labeled_pair{p.label, static_cast<int>(static_cast<std::size_t>(p.state) * ny + q.state)}};
    }
    case functor_kind::monoid_val: {
      auto mu = dense_weights(std::get<monoid_map>(t1), x.size());
      auto nu = dense_weights(std::get<monoid_map>(t2), y.size());
      long long l = lcm_denominator({&mu, &nu});
      std::vector<long long> rows, cols;
      for (const auto& m : mu) rows.push_back((m * rational(l)).num());
      for (const auto& m : nu) cols.push_back((m * rational(l)).num());
      std::vector<functor_element> out;
      for (const auto& plan : matrix_couplings(rows, cols, limits)) {
        std::vector<std::pair<int, rational>> entries;
        for (std::size_t i = 0; i < mu.size(); ++i) {
          for (std::size_t j = 0; j < nu.size(); ++j) {
            if (plan[i][j] > 0) {
              entries.emplace_back(static_cast<int>(i * ny + j), rational(plan[i][j], l));
            }
          }
        }
        out.push_back(monoid_map(std::move(entries)));
      }
      return out;
    }
    case functor_kind::mlmc: {
      const auto& mu = std::get<labeled_dist>(t1);
      const auto& nu = std::get<labeled_dist>(t2);
      const std::size_t na = inst.labels.labels.size();
      auto md = dense_dist(mu, na, x.size());
      auto nd = dense_dist(nu, na, y.size());
      long long l = 1;
      for (const auto& row : md) l = std::lcm(l, lcm_denominator({&row}));
      for (const auto& row : nd) l = std::lcm(l, lcm_denominator({&row}));
      // per label, couple the slices; the overall couplings are all products
      std::vector<std::vector<std::vector<std::vector<long long>>>> per_label(na);
      for (std::size_t a = 0; a < na; ++a) {
        std::vector<long long> rows, cols;
        long long ra = 0, ca = 0;
        for (const auto& m : md[a]) {
          rows.push_back((m * rational(l)).num());
          ra += rows.back();
        }
        for (const auto& m : nd[a]) {
          cols.push_back((m * rational(l)).num());
          ca += cols.back();
        }
        if (ra != ca) return {};  // label slices with unequal mass: no couplings
        per_label[a] = matrix_couplings(rows, cols, limits);
        if (per_label[a].empty()) return {};
      }
      std::vector<functor_element> out;
      std::vector<std::size_t> pick(na, 0);
      while (true) {
        std::vector<std::pair<std::pair<int, int>, rational>> entries;
        for (std::size_t a = 0; a < na; ++a) {
          const auto& plan = per_label[a][pick[a]];
          for (std::size_t i = 0; i < x.size(); ++i) {
            for (std::size_t j = 0; j < ny; ++j) {
              if (plan[i][j] > 0) {
                entries.push_back({{static_cast<int>(a), static_cast<int>(i * ny + j)}, rational(plan[i][j], l)});
              }
            }
          }
        }
        out.push_back(labeled_dist(std::move(entries)));
        if (out.size() > limits.max_couplings) throw cap_error("coupling enumeration exceeded cap");
        std::size_t a = 0;
        while (a < na && ++pick[a] == per_label[a].size()) {
          pick[a] = 0;
          ++a;
        }
        if (a == na) break;
      }
      return out;
    }
  }
  throw internal_error("unknown functor kind");
}

// ---- exact engine ------------------------------------------------------------

qvalue wasserstein_exact_enumerated(const extension& ext, const vrel& r, const functor_element& t1,
                                    const functor_element& t2, const element_limits& limits) {
  require_rel_kind(ext, r);
  const quantale_kind q = ext.instance.value_kind();
  std::vector<qvalue> flat = flatten_rel(r);
  qvalue acc = qvalue::bottom(q);
  for (const functor_element& t : couplings(ext.instance, t1, r.src(), t2, r.tgt(), limits)) {
    acc = join(acc, lift(ext.instance, ext.lift_id, flat, t));
    if (acc.is_top()) break;
  }
  return acc;
}

std::optional<functor_element> optimal_coupling(const extension& ext, const vrel& r,
                                                const functor_element& t1, const functor_element& t2,
                                                const element_limits& limits) {
  std::vector<qvalue> flat = flatten_rel(r);
  auto cs = couplings(ext.instance, t1, r.src(), t2, r.tgt(), limits);
  if (cs.empty()) return std::nullopt;
  qvalue best = qvalue::bottom(ext.instance.value_kind());
  std::vector<qvalue> values;
  values.reserve(cs.size());
  for (const functor_element& t : cs) {
    values.push_back(lift(ext.instance, ext.lift_id, flat, t));
    best = join(best, values.back());
  }
  functor_instance prod_inst = ext.instance;
  carrier prod = product_carrier(r.src(), r.tgt());
  const functor_element* pick = nullptr;
  std::string pick_key;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (values[i] != best) continue;
    std::string key = element_to_json(prod_inst, prod, cs[i]).dump();
    if (!pick || key < pick_key) {
      pick = &cs[i];
      pick_key = std::move(key);
    }
  }
  return *pick;
}

qvalue wasserstein_exact(const extension& ext, const vrel& r, const functor_element& t1,
                         const functor_element& t2, const element_limits& limits) {
  require_rel_kind(ext, r);
  switch (ext.instance.kind) {
    case functor_kind::monoid_val: {
      if (ext.lift_id.id != lifting_id::expect) break;
      auto mu = dense_weights(std::get<monoid_map>(t1), r.rows());
      auto nu = dense_weights(std::get<monoid_map>(t2), r.cols());
      rational ma = std::accumulate(mu.begin(), mu.end(), rational(0));
      rational mb = std::accumulate(nu.begin(), nu.end(), rational(0));
      if (ma != mb) return qvalue::infinity();  // no couplings: empty join
      return balanced_ot(r, mu, nu);
    }
    case functor_kind::mlmc: {
      if (ext.lift_id.id != lifting_id::mlmc_expect) break;
      // transport within each label slice at relation cost
      const std::size_t na = ext.instance.labels.labels.size();
      auto md = dense_dist(std::get<labeled_dist>(t1), na, r.rows());
      auto nd = dense_dist(std::get<labeled_dist>(t2), na, r.cols());
      flow_network net;
      std::vector<std::vector<int>> left(na), right(na);
      for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t i = 0; i < r.rows(); ++i) left[a].push_back(net.add_node("l", md[a][i]));
        for (std::size_t j = 0; j < r.cols(); ++j) right[a].push_back(net.add_node("r", -nd[a][j]));
      }
      for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t i = 0; i < r.rows(); ++i) {
          for (std::size_t j = 0; j < r.cols(); ++j) {
            net.add_arc(left[a][i], right[a][j], std::nullopt, r.at(i, j));
          }
        }
      }
      return min_cost_flow(net).optimal_cost;
    }
    default: break;
  }
  return wasserstein_exact_enumerated(ext, r, t1, t2, limits);
}

}  // namespace laxconf
