#include <algorithm>
#include <set>

#include "lawcheck_internal.hpp"

namespace laxconf {
namespace detail {

namespace {

std::vector<qvalue> gen_predicate(splitmix64& rng, quantale_kind q, std::size_t n) {
  std::vector<qvalue> f;
  for (std::size_t i = 0; i < n; ++i) f.push_back(gen_value(rng, q));
  return f;
}

std::vector<qvalue> join_pred(const std::vector<qvalue>& a, const std::vector<qvalue>& b) {
  std::vector<qvalue> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(join(a[i], b[i]));
  return out;
}

std::vector<qvalue> tensor_pred(const std::vector<qvalue>& a, const std::vector<qvalue>& b) {
  std::vector<qvalue> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(tensor(a[i], b[i]));
  return out;
}

// the normality witness recipe per real-valued instance
std::optional<functor_element> normality_witness(const functor_instance& inst, const functor_element& t1,
                                                 const functor_element& t2) {
  switch (inst.kind) {
    case functor_kind::list: {
      const auto& a = std::get<list_elem>(t1);
      const auto& b = std::get<list_elem>(t2);
      auto is_sub = [](const list_elem& s, const list_elem& t) {
        std::size_t j = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
          while (j < t.size() && t[j] != s[i]) ++j;
          if (j == t.size()) return false;
          ++j;
        }
        return true;
      };
      return is_sub(a, b) ? t1 : t2;
    }
    case functor_kind::monoid_val: {
      const auto& mu = std::get<monoid_map>(t1);
      const auto& nu = std::get<monoid_map>(t2);
      std::vector<std::pair<int, rational>> entries;
      for (const auto& [x, m] : mu.entries) {
        rational other = nu.at(x);
        rational lo = min(m, other);
        if (!lo.is_zero()) entries.emplace_back(x, lo);
      }
      return functor_element(monoid_map(std::move(entries)));
    }
    case functor_kind::stream:
    case functor_kind::mlmc:
      return t1;
    default:
      return std::nullopt;
  }
}

struct lifted_target {
  std::string instance_key;
  lifting lift_id;
};

std::vector<lifted_target> targets_for_lifting(const std::string& key) {
  if (key == "box") {
    std::vector<lifted_target> out;
    for (const char* o : {"lts-sub", "lts-sup", "lts-cpl", "lts-cpl-rev", "lts-rd", "lts-rd-rev", "lts-discrete"}) {
      out.push_back({o, lifting::of(lifting_id::box)});
    }
    return out;
  }
  if (key == "mts-box") return {{"mts", lifting::of(lifting_id::mts_box)}};
  if (key == "list-sum") return {{"list", lifting::of(lifting_id::list_sum)}};
  if (key == "expect-nat") return {{"weighted-nat", lifting::of(lifting_id::expect)}};
  if (key == "expect-real") return {{"weighted-real", lifting::of(lifting_id::expect)}};
  if (key == "stream-proj") return {{"stream", lifting::of(lifting_id::stream_proj)}};
  if (key == "mlmc-expect") return {{"mlmc", lifting::of(lifting_id::mlmc_expect)}};
  throw parse_error("unknown lifting target '" + key + "'");
}

}  // namespace

// ---- well-behaved predicate liftings -------------------------------------

law_report run_well_behaved(const law_suite& s, const std::string& target) {
  auto cases = targets_for_lifting(target);
  auto trial = [cases](splitmix64& rng, int bound) -> std::optional<std::string> {
    for (const auto& c : cases) {
      functor_instance inst = gen_instance(rng, c.instance_key);
      const quantale_kind q = inst.value_kind();
      carrier x = gen_carrier(rng, "x", std::min(bound, 2));

      std::vector<qvalue> f = gen_predicate(rng, q, x.size());
      std::vector<qvalue> g = gen_predicate(rng, q, x.size());
      std::vector<qvalue> f_up = join_pred(f, gen_predicate(rng, q, x.size()));
      functor_element t = gen_element(rng, inst, x);

      // monotone
      if (!leq(lift(inst, c.lift_id, f, t), lift(inst, c.lift_id, f_up, t))) {
        return cx({{"law", "lifting-monotone"}, {"instance", c.instance_key}});
      }
      // unit preservation
      std::vector<qvalue> units(x.size(), qvalue::unit(q));
      if (!leq(qvalue::unit(q), lift(inst, c.lift_id, units, t))) {
        return cx({{"law", "lifting-unit"}, {"instance", c.instance_key}});
      }

      // normality
      if (q == quantale_kind::boolean) {
        auto pool = enumerate_elements(inst, x, 3, 4096);
        std::vector<bool> sat_f, sat_g, sat_fg;
        for (const auto& u : pool) {
          sat_f.push_back(lift(inst, c.lift_id, f, u).truth());
          sat_g.push_back(lift(inst, c.lift_id, g, u).truth());
          sat_fg.push_back(lift(inst, c.lift_id, tensor_pred(f, g), u).truth());
        }
        for (std::size_t i = 0; i < pool.size(); ++i) {
          if (!sat_f[i]) continue;
          for (std::size_t j = 0; j < pool.size(); ++j) {
            if (!sat_g[j] || !element_distance(inst, pool[i], pool[j]).truth()) continue;
            bool found = false;
            for (std::size_t k = 0; k < pool.size() && !found; ++k) {
              found = sat_fg[k] && element_distance(inst, pool[i], pool[k]).truth() &&
                      element_distance(inst, pool[k], pool[j]).truth();
            }
            if (!found) {
              return cx({{"law", "lifting-normality"},
                         {"instance", c.instance_key},
                         {"t1", element_to_json(inst, x, pool[i])},
                         {"t2", element_to_json(inst, x, pool[j])}});
            }
          }
        }
      } else {
        functor_element t2 = gen_element(rng, inst, x);
        qvalue d12 = element_distance(inst, t, t2);
        if (!d12.is_bottom()) {
          auto t3 = normality_witness(inst, t, t2);
          if (!t3) return cx({{"law", "lifting-normality"}, {"missing-recipe", c.instance_key}});
          qvalue split = tensor(element_distance(inst, t, *t3), element_distance(inst, *t3, t2));
          if (split != d12) {
            return cx({{"law", "lifting-normality-split"},
                       {"instance", c.instance_key},
                       {"d", d12.str()},
                       {"split", split.str()}});
          }
          qvalue lhs = lift(inst, c.lift_id, tensor_pred(f, g), *t3);
          qvalue rhs = tensor(lift(inst, c.lift_id, f, t), lift(inst, c.lift_id, g, t2));
          if (!leq(rhs, lhs)) {
            return cx({{"law", "lifting-normality-value"},
                       {"instance", c.instance_key},
                       {"witness-value", lhs.str()},
                       {"bound", rhs.str()}});
          }
        }
      }
    }
    return std::nullopt;
  };
  return run_trials(s, target, "lifting/well-behaved", trial);
}

// ---- characterizations ----------------------------------------------------

namespace {

std::vector<int> initials(const coalgebra& c, int x) { return initial_actions(c, x); }

bool direct_simulation(lts_order order, const coalgebra& a, const coalgebra& b, const vrel& r) {
  for (std::size_t x = 0; x < a.states.size(); ++x) {
    for (std::size_t y = 0; y < b.states.size(); ++y) {
      if (!r.at(x, y).truth()) continue;
      const auto& ax = std::get<label_set>(a.structure[x]);
      const auto& by = std::get<label_set>(b.structure[y]);
      bool need_forth =
          order == lts_order::sub || order == lts_order::cpl || order == lts_order::rd || order == lts_order::discrete;
      bool need_back = order == lts_order::sup || order == lts_order::cpl_rev || order == lts_order::rd_rev ||
                       order == lts_order::discrete;
      if (need_forth) {
        for (auto [lab, xs] : ax.pairs) {
          bool ok = false;
          for (int ys : by.states_for(lab)) {
            if (r.at(xs, ys).truth()) {
              ok = true;
              break;
            }
          }
          if (!ok) return false;
        }
      }
      if (need_back) {
        for (auto [lab, ys] : by.pairs) {
          bool ok = false;
          for (int xs : ax.states_for(lab)) {
            if (r.at(xs, ys).truth()) {
              ok = true;
              break;
            }
          }
          if (!ok) return false;
        }
      }
      if (order == lts_order::cpl || order == lts_order::cpl_rev) {
        if (initials(a, static_cast<int>(x)).empty() != initials(b, static_cast<int>(y)).empty()) return false;
      }
      if (order == lts_order::rd || order == lts_order::rd_rev) {
        if (initials(a, static_cast<int>(x)) != initials(b, static_cast<int>(y))) return false;
      }
    }
  }
  return true;
}

bool direct_modal_refinement(const coalgebra& a, const coalgebra& b, const vrel& r) {
  const auto& order = *a.instance.labels.label_order;
  for (std::size_t x = 0; x < a.states.size(); ++x) {
    for (std::size_t y = 0; y < b.states.size(); ++y) {
      if (!r.at(x, y).truth()) continue;
      const auto& px = std::get<mts_pair>(a.structure[x]);
      const auto& py = std::get<mts_pair>(b.structure[y]);
      for (auto [la, xs] : px.may.pairs) {
        bool ok = false;
        for (auto [lb, ys] : py.may.pairs) {
          if (order.at(la, lb).truth() && r.at(xs, ys).truth()) {
            ok = true;
            break;
          }
        }
        if (!ok) return false;
      }
      for (auto [lb, ys] : py.must.pairs) {
        bool ok = false;
        for (auto [la, xs] : px.must.pairs) {
          if (order.at(la, lb).truth() && r.at(xs, ys).truth()) {
            ok = true;
            break;
          }
        }
        if (!ok) return false;
      }
    }
  }
  return true;
}

}  // namespace

law_report run_characterizations(const law_suite& s, const std::string& target) {
  auto trial = [target](splitmix64& rng, int bound) -> std::optional<std::string> {
    element_limits lim;
    if (target == "lts-sim") {
      for (const char* key : {"lts-sub", "lts-sup", "lts-cpl", "lts-cpl-rev", "lts-rd", "lts-rd-rev",
                              "lts-discrete"}) {
        functor_instance inst = gen_instance(rng, key);
        coalgebra a = gen_coalgebra(rng, inst, bound);
        coalgebra b = gen_coalgebra(rng, inst, bound);
        vrel r = gen_rel(rng, a.states, b.states, quantale_kind::boolean);
        bool direct = direct_simulation(inst.order, a, b, r);
        bool lax = is_simulation(a, b, extension::wasserstein_lax(inst), r, lim);
        bool closed = is_simulation(a, b, extension::closed_form_for(inst), r, lim);
        if (direct != lax || lax != closed) {
          return cx({{"law", "similarity-variants"},
                     {"order", key},
                     {"direct", direct},
                     {"lax", lax},
                     {"closed", closed},
                     {"r", to_json(r)}});
        }
      }
      return std::nullopt;
    }
    if (target == "mts-refine") {
      functor_instance inst = gen_instance(rng, "mts");
      coalgebra a = gen_coalgebra(rng, inst, bound);
      coalgebra b = gen_coalgebra(rng, inst, bound);
      vrel r = gen_rel(rng, a.states, b.states, quantale_kind::boolean);
      bool direct = direct_modal_refinement(a, b, r);
      bool lax = is_simulation(a, b, extension::wasserstein_lax(inst), r, lim);
      bool closed = is_simulation(a, b, extension::closed_form_for(inst), r, lim);
      if (direct != lax || lax != closed) {
        return cx({{"law", "modal-refinement"}, {"direct", direct}, {"lax", lax}, {"closed", closed}});
      }
      return std::nullopt;
    }
    if (target == "stream-tensor") {
      functor_instance inst = gen_instance(rng, "stream");
      carrier x = gen_carrier(rng, "x", bound);
      carrier y = gen_carrier(rng, "y", bound);
      vrel r = gen_rel(rng, x, y, quantale_kind::ext_real);
      functor_element t1 = gen_element(rng, inst, x);
      functor_element t2 = gen_element(rng, inst, y);
      extension lax = extension::wasserstein_lax(inst);
      qvalue engine = wasserstein_lax(lax, r, t1, t2, lim);
      qvalue closed = closed_form(extension::closed_form_for(inst), r, t1, t2, lim);
      qvalue pooled = wasserstein_lax_pooled(lax, r, t1, t2, enumerate_elements(inst, x, 0),
                                             enumerate_elements(inst, y, 0), lim);
      if (engine != closed || engine != pooled) {
        return cx({{"law", "stream-tensor"},
                   {"engine", engine.str()},
                   {"closed", closed.str()},
                   {"pooled", pooled.str()}});
      }
      return std::nullopt;
    }
    if (target == "mlmc-exact") {
      functor_instance inst = gen_instance(rng, "mlmc");
      carrier x = gen_carrier(rng, "x", bound);
      carrier y = gen_carrier(rng, "y", bound);
      vrel r = gen_rel(rng, x, y, quantale_kind::ext_real);
      functor_element t1 = gen_element(rng, inst, x);
      functor_element t2 = gen_element(rng, inst, y);
      qvalue engine = wasserstein_exact(extension::wasserstein_exact(inst), r, t1, t2, lim);
      // discrete-label product transport over the flattened carriers
      const std::size_t na = inst.labels.labels.size();
      carrier px = product_carrier(inst.labels.labels, x);
      carrier py = product_carrier(inst.labels.labels, y);
      vrel cost(px, py, quantale_kind::ext_real, qvalue::infinity());
      for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t i = 0; i < x.size(); ++i) {
          for (std::size_t j = 0; j < y.size(); ++j) {
            cost.set(a * x.size() + i, a * y.size() + j, r.at(i, j));
          }
        }
      }
      auto md = dense_dist(std::get<labeled_dist>(t1), na, x.size());
      auto nd = dense_dist(std::get<labeled_dist>(t2), na, y.size());
      std::vector<rational> mu, nu;
      for (std::size_t a = 0; a < na; ++a) {
        for (const auto& v : md[a]) mu.push_back(v);
      }
      for (std::size_t a = 0; a < na; ++a) {
        for (const auto& v : nd[a]) nu.push_back(v);
      }
      qvalue product = balanced_ot(cost, mu, nu);
      if (engine != product) {
        return cx({{"law", "label-slice-transport"}, {"engine", engine.str()}, {"product", product.str()}});
      }
      return std::nullopt;
    }
    if (target == "mlmc-lax") {
      functor_instance inst = gen_instance(rng, "mlmc");
      carrier x = gen_carrier(rng, "x", bound);
      carrier y = gen_carrier(rng, "y", bound);
      vrel r = gen_rel(rng, x, y, quantale_kind::ext_real);
      functor_element t1 = gen_element(rng, inst, x);
      functor_element t2 = gen_element(rng, inst, y);
      qvalue bip = wasserstein_lax(extension::wasserstein_lax(inst), r, t1, t2, lim);
      qvalue tier = closed_form(extension::closed_form_for(inst), r, t1, t2, lim);
      if (bip != tier) {
        return cx({{"law", "tensor-transport"}, {"bipartite", bip.str()}, {"tiered", tier.str()}});
      }
      return std::nullopt;
    }
    throw parse_error("unknown characterization target '" + target + "'");
  };
  return run_trials(s, target, "characterization", trial);
}

// ---- dualities -----------------------------------------------------------------

law_report run_dualities(const law_suite& s, const std::string& target) {
  auto trial = [target](splitmix64& rng, int bound) -> std::optional<std::string> {
    element_limits lim;
    if (target == "stream") {
      functor_instance inst = gen_instance(rng, "stream-metric");
      carrier x = gen_carrier(rng, "x", std::min(bound, 2));
      carrier y = gen_carrier(rng, "y", std::min(bound, 2));
      vrel r = gen_rel(rng, x, y, quantale_kind::ext_real);
      functor_element t1 = gen_element(rng, inst, x);
      functor_element t2 = gen_element(rng, inst, y);
      qvalue k = kantorovich(extension::kantorovich(inst), r, t1, t2, lim);
      qvalue w = closed_form(extension::closed_form_for(inst), r, t1, t2, lim);
      // the sampled meet can only under-report the distance
      if (!leq(w, k)) return cx({{"law", "stream-grid-bound"}, {"kant", k.str()}, {"tensor", w.str()}});
      // the optimal predicate (unit at one point, bottom elsewhere) lies on
      // every grid, so the sampled meet is in fact exact here
      if (k != w) return cx({{"law", "stream-shift-family"}, {"kant", k.str()}, {"tensor", w.str()}});
      // lifted predicates respect the structure (hom-functoriality)
      std::vector<qvalue> f;
      for (std::size_t i = 0; i < x.size(); ++i) f.push_back(gen_value(rng, quantale_kind::ext_real));
      functor_element t1b = gen_element(rng, inst, x);
      for (const lifting& l : dual_liftings(inst)) {
        qvalue lhs = element_distance(inst, t1, t1b);
        qvalue rhs = hom(lift(inst, l, f, t1), lift(inst, l, f, t1b));
        if (!leq(lhs, rhs)) return cx({{"law", "hom-functorial"}, {"d", lhs.str()}, {"hom", rhs.str()}});
      }
      return std::nullopt;
    }
    std::string key = target == "bool-sub" ? "lts-sub" : target == "bool-sup" ? "lts-sup" : "lts-discrete";
    functor_instance inst = gen_instance(rng, key);
    carrier x = gen_carrier(rng, "x", bound);
    carrier y = gen_carrier(rng, "y", bound);
    vrel r = gen_rel(rng, x, y, quantale_kind::boolean);
    functor_element t1 = gen_element(rng, inst, x);
    functor_element t2 = gen_element(rng, inst, y);
    qvalue k = kantorovich(extension::kantorovich(inst), r, t1, t2, lim);
    qvalue w = wasserstein_lax(extension::wasserstein_lax(inst), r, t1, t2, lim);
    if (k != w) {
      return cx({{"law", "bool-duality"},
                 {"target", target},
                 {"kant", k.str()},
                 {"wass", w.str()},
                 {"t1", element_to_json(inst, x, t1)},
                 {"t2", element_to_json(inst, y, t2)},
                 {"r", to_json(r)}});
    }
    // hom-functoriality of the dual liftings
    std::vector<qvalue> f;
    for (std::size_t i = 0; i < x.size(); ++i) f.push_back(gen_value(rng, quantale_kind::boolean));
    functor_element t1b = gen_element(rng, inst, x);
    for (const lifting& l : dual_liftings(inst)) {
      if (!leq(element_distance(inst, t1, t1b), hom(lift(inst, l, f, t1), lift(inst, l, f, t1b)))) {
        return cx({{"law", "hom-functorial"}, {"target", target}});
      }
    }
    return std::nullopt;
  };
  return run_trials(s, target, "duality", trial);
}

// ---- diagonal relations and graphs ------------------------------------------

law_report run_g_diag(const law_suite& s, const std::string& target) {
  quantale_kind q = parse_quantale(target);
  auto trial = [q](splitmix64& rng, int bound) -> std::optional<std::string> {
    carrier x = gen_carrier(rng, "x", bound + 1);
    carrier y = gen_carrier(rng, "y", bound + 1);
    set_map f = gen_map(rng, x.size(), y.size());
    std::vector<qvalue> g;
    for (std::size_t i = 0; i < y.size(); ++i) g.push_back(gen_value(rng, q));
    std::vector<qvalue> gf;
    for (std::size_t i = 0; i < x.size(); ++i) gf.push_back(g[f[i]]);
    vrel lhs = compose(graph_rel(f, x, y, q), diag(gf, x, q));
    vrel rhs = compose(diag(g, y, q), graph_rel(f, x, y, q));
    if (!(lhs == rhs)) return cx({{"law", "graph-diagonal-commutation"}, {"lhs", to_json(lhs)}});
    return std::nullopt;
  };
  return run_trials(s, target, "relation/graph-diagonal-commutation", trial);
}

// ---- four-way distributor agreement ------------------------------------------

law_report run_distributor_agreement(const law_suite& s, const std::string& target) {
  quantale_kind q = parse_quantale(target);
  auto trial = [q](splitmix64& rng, int bound) -> std::optional<std::string> {
    carrier x = gen_carrier(rng, "x", bound + 1);
    carrier y = gen_carrier(rng, "y", bound + 1);
    vcat dx = gen_cat(rng, x, q);
    vcat dy = gen_cat(rng, y, q);
    // half the trials absorb the categories into r so both verdicts occur
    vrel r = gen_rel(rng, x, y, q);
    if (rng.chance(1, 2)) r = compose(dy.rel(), compose(r, dx.rel()));
    distributor_agreement rep = check_distributor_consistent(r, dx, dy);
    if (!rep.agree()) {
      return cx({{"law", "distributor-four-way"},
                 {"r", to_json(r)},
                 {"ineq", rep.absorb_inequality},
                 {"eq", rep.absorb_equality},
                 {"hom", rep.hom_functorial},
                 {"glued", rep.glued_category}});
    }
    return std::nullopt;
  };
  return run_trials(s, target, "relation/distributor-four-way", trial);
}

}  // namespace detail
}  // namespace laxconf
