#include <algorithm>
#include <set>

#include "lawcheck_internal.hpp"

namespace laxconf {
namespace detail {

law_report run_trials(const law_suite& s, const std::string& target, const char* tag, const trial_fn& trial) {
  law_report rep;
  rep.suite = std::string(suite_name(s.id));
  rep.target = target;
  rep.law_tag = tag;
  for (long long i = 0; i < s.trials; ++i) {
    splitmix64 rng(trial_seed(s.seed, target, i));
    std::optional<std::string> fail;
    try {
      fail = trial(rng, s.carrier_bound);
    } catch (const cap_error& e) {
      fail = std::string("cap: ") + e.what();
    }
    if (fail) {
      ++rep.failed;
      if (rep.counterexamples.size() < 8) {
        rep.counterexamples.push_back("trial " + std::to_string(i) + ": " + *fail);
      }
    } else {
      ++rep.passed;
    }
  }
  return rep;
}

std::string cx(std::initializer_list<std::pair<std::string, json>> fields) {
  json j = json::object();
  for (const auto& [k, v] : fields) j[k] = v;
  return j.dump();
}

// sampled element pool; full space for the enumerable kinds, capped
std::vector<functor_element> pool_for(splitmix64& rng, const functor_instance& inst, const carrier& c,
                                      std::size_t sampled) {
  try {
    auto all = enumerate_elements(inst, c, 3, 4096);
    if (all.size() <= 24) return all;
    std::vector<functor_element> out;
    for (std::size_t i = 0; i < 24; ++i) out.push_back(all[rng.below(all.size())]);
    return out;
  } catch (const cap_error&) {
    std::vector<functor_element> out;
    for (std::size_t i = 0; i < sampled; ++i) out.push_back(gen_element(rng, inst, c));
    return out;
  }
}

vrel join_rel(const vrel& a, const vrel& b) {
  vrel out(a.src(), a.tgt(), a.kind(), qvalue::bottom(a.kind()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.set(i, j, join(a.at(i, j), b.at(i, j)));
  }
  return out;
}

namespace {

struct engine_target {
  std::string instance_key;
  std::string engine_key;
};

engine_target split_target(const std::string& target) {
  if (target == "kant-stream") return {"stream-metric", "kant"};
  if (target.rfind("kant-", 0) == 0) return {target.substr(5), "kant"};
  return {target, "wass-lax"};
}

}  // namespace

// ---- lax extension axioms ------------------------------------------------

law_report run_lax_axioms(const law_suite& s, const std::string& target) {
  auto [inst_key, engine_key] = split_target(target);
  auto trial = [inst_key = inst_key, engine_key = engine_key](splitmix64& rng,
                                                              int bound) -> std::optional<std::string> {
    functor_instance inst = gen_instance(rng, inst_key);
    const quantale_kind q = inst.value_kind();
    carrier x = gen_carrier(rng, "x", bound);
    carrier y = gen_carrier(rng, "y", bound);
    carrier z = gen_carrier(rng, "z", bound);
    vrel r = gen_rel(rng, x, y, q);
    vrel s2 = gen_rel(rng, y, z, q);
    vrel r_up = join_rel(r, gen_rel(rng, x, y, q));  // r below r_up by construction
    extension ext = engine_for(inst, engine_key);
    element_limits lim;

    functor_element t1 = gen_element(rng, inst, x);
    functor_element t1b = gen_element(rng, inst, x);
    functor_element t3 = gen_element(rng, inst, z);
    functor_element ty = gen_element(rng, inst, y);

    // monotonicity
    if (!leq(apply_extension(ext, r, t1, ty, lim), apply_extension(ext, r_up, t1, ty, lim))) {
      return cx({{"law", "monotone"}, {"r", to_json(r)}, {"r_up", to_json(r_up)}});
    }

    // lax composition over a sampled intermediate pool (a pool violation is a
    // genuine violation; the pool join sits below the full join)
    {
      auto pool = pool_for(rng, inst, y, 5);
      qvalue lhs = qvalue::bottom(q);
      for (const functor_element& u : pool) {
        lhs = join(lhs, tensor(apply_extension(ext, r, t1, u, lim), apply_extension(ext, s2, u, t3, lim)));
      }
      qvalue rhs = apply_extension(ext, compose(s2, r), t1, t3, lim);
      if (!leq(lhs, rhs)) {
        return cx({{"law", "lax-composition"}, {"r", to_json(r)}, {"s", to_json(s2)}, {"lhs", lhs.str()}, {"rhs", rhs.str()}});
      }
    }

    // graph bounds
    {
      set_map f = gen_map(rng, x.size(), y.size());
      functor_element ft1 = fmap(inst, f, t1);
      qvalue fwd = apply_extension(ext, graph_rel(f, x, y, q), t1, ft1, lim);
      qvalue bwd = apply_extension(ext, cograph_rel(f, x, y, q), ft1, t1, lim);
      if (!leq(qvalue::unit(q), fwd) || !leq(qvalue::unit(q), bwd)) {
        return cx({{"law", "graph-bounds"}, {"fwd", fwd.str()}, {"bwd", bwd.str()}});
      }
    }

    // structure absorption at the diagonal
    {
      qvalue lhs = element_distance(inst, t1, t1b);
      qvalue rhs = apply_extension(ext, vrel::delta(x, q), t1, t1b, lim);
      if (!leq(lhs, rhs)) {
        return cx({{"law", "structure-absorption"}, {"d", lhs.str()}, {"L-delta", rhs.str()}});
      }
    }

    // composite normality of the lifting, pointwise over the full element
    // space (only the enumerable kinds admit an exact evaluation; oversized
    // pools skip the law rather than sample it, since a sampled join could
    // flag spurious violations)
    if (engine_key == "wass-lax" &&
        (inst.kind == functor_kind::lts_pow || inst.kind == functor_kind::mts ||
         inst.kind == functor_kind::stream)) {
      set_map f = gen_map(rng, x.size(), y.size());
      set_map g = gen_map(rng, x.size(), z.size());
      std::vector<qvalue> p, qv;
      for (std::size_t i = 0; i < y.size(); ++i) p.push_back(gen_value(rng, q));
      for (std::size_t i = 0; i < z.size(); ++i) qv.push_back(gen_value(rng, q));
      std::vector<qvalue> pq;
      for (std::size_t i = 0; i < x.size(); ++i) pq.push_back(tensor(p[f[i]], qv[g[i]]));
      std::vector<functor_element> pool;
      try {
        pool = enumerate_elements(inst, x, 3, 8192);
      } catch (const cap_error&) {
        return std::nullopt;
      }
      functor_element u = gen_element(rng, inst, y);
      functor_element w = gen_element(rng, inst, z);
      qvalue middle = qvalue::bottom(q), rhs = qvalue::bottom(q);
      for (const functor_element& t : pool) {
        qvalue across = tensor(element_distance(inst, u, fmap(inst, f, t)),
                               element_distance(inst, fmap(inst, g, t), w));
        middle = join(middle, across);
        rhs = join(rhs, tensor(element_distance(inst, u, fmap(inst, f, t)),
                               tensor(lift(inst, ext.lift_id, pq, t),
                                      element_distance(inst, fmap(inst, g, t), w))));
      }
      qvalue lhs = tensor(lift(inst, ext.lift_id, p, u), tensor(middle, lift(inst, ext.lift_id, qv, w)));
      if (!leq(lhs, rhs)) {
        return cx({{"law", "composite-normality"}, {"lhs", lhs.str()}, {"rhs", rhs.str()}});
      }
    }
    return std::nullopt;
  };
  return run_trials(s, target, "extension/lax-axioms", trial);
}

// ---- distributoriality ------------------------------------------------------

law_report run_distributoriality(const law_suite& s, const std::string& target) {
  if (target == "list-wass-exact") {
    auto trial = [](splitmix64& rng, int bound) -> std::optional<std::string> {
      functor_instance inst = functor_instance::list();
      extension ext = extension::wasserstein_exact(inst);
      carrier x = gen_carrier(rng, "x", bound);
      functor_element t1, t2;
      // the seeded deterministic pair first, then random search
      if (rng.below(2) == 0) {
        t1 = list_elem{0};
        t2 = list_elem{0, 0};
      } else {
        t1 = gen_element(rng, inst, x);
        t2 = gen_element(rng, inst, x);
      }
      qvalue d = element_distance(inst, t1, t2);
      qvalue lde = wasserstein_exact(ext, vrel::delta(x, quantale_kind::ext_real), t1, t2);
      if (!leq(d, lde)) {
        // a violation of absorption: exactly what this control is hunting
        return cx({{"law", "structure-absorption-negative"},
                   {"t1", element_to_json(inst, x, t1)},
                   {"t2", element_to_json(inst, x, t2)},
                   {"d", d.str()},
                   {"L-delta", lde.str()}});
      }
      return std::nullopt;
    };
    law_report rep = run_trials(s, target, "extension/structure-absorption-negative", trial);
    rep.expect_counterexample = true;
    return rep;
  }

  auto trial = [target](splitmix64& rng, int bound) -> std::optional<std::string> {
    functor_instance inst = gen_instance(rng, target);
    const quantale_kind q = inst.value_kind();
    carrier x = gen_carrier(rng, "x", bound);
    carrier y = gen_carrier(rng, "y", bound);
    vrel r = gen_rel(rng, x, y, q);
    extension ext = extension::wasserstein_lax(inst);
    element_limits lim;

    // absorption at the diagonal
    functor_element t1 = gen_element(rng, inst, x);
    functor_element t1b = gen_element(rng, inst, x);
    if (!leq(element_distance(inst, t1, t1b), apply_extension(ext, vrel::delta(x, q), t1, t1b, lim))) {
      return cx({{"law", "structure-absorption"},
                 {"t1", element_to_json(inst, x, t1)},
                 {"t2", element_to_json(inst, x, t1b)}});
    }

    // distributor form of the lifted relation over sampled pools
    auto pool_x = pool_for(rng, inst, x, 4);
    auto pool_y = pool_for(rng, inst, y, 4);
    if (pool_x.size() > 8) pool_x.resize(8);
    if (pool_y.size() > 8) pool_y.resize(8);
    std::vector<std::string> kx, ky;
    for (std::size_t i = 0; i < pool_x.size(); ++i) kx.push_back("px" + std::to_string(i));
    for (std::size_t i = 0; i < pool_y.size(); ++i) ky.push_back("py" + std::to_string(i));
    carrier cx_(std::string("pool-x"), kx), cy(std::string("pool-y"), ky);
    vrel lr(cx_, cy, q, qvalue::bottom(q));
    vrel dfx(cx_, cx_, q, qvalue::bottom(q));
    vrel dfy(cy, cy, q, qvalue::bottom(q));
    for (std::size_t i = 0; i < pool_x.size(); ++i) {
      for (std::size_t j = 0; j < pool_y.size(); ++j) {
        lr.set(i, j, apply_extension(ext, r, pool_x[i], pool_y[j], lim));
      }
    }
    for (std::size_t i = 0; i < pool_x.size(); ++i) {
      for (std::size_t j = 0; j < pool_x.size(); ++j) {
        dfx.set(i, j, element_distance(inst, pool_x[i], pool_x[j]));
      }
    }
    for (std::size_t i = 0; i < pool_y.size(); ++i) {
      for (std::size_t j = 0; j < pool_y.size(); ++j) {
        dfy.set(i, j, element_distance(inst, pool_y[i], pool_y[j]));
      }
    }
    if (!leq_rel(compose(lr, vcat::trusted(dfx).rel()), lr) ||
        !leq_rel(compose(vcat::trusted(dfy).rel(), lr), lr)) {
      return cx({{"law", "distributor-form"}, {"r", to_json(r)}});
    }
    return std::nullopt;
  };
  return run_trials(s, target, "extension/structure-absorption", trial);
}

// ---- exact squares ----------------------------------------------------------

law_report run_exact_squares(const law_suite& s, const std::string& target) {
  auto trial = [target](splitmix64& rng, int bound) -> std::optional<std::string> {
    functor_instance inst = gen_instance(rng, target);
    carrier z = gen_carrier(rng, "z", bound);
    carrier x = gen_carrier(rng, "x", bound);
    carrier y = gen_carrier(rng, "y", bound);
    set_map f = gen_map(rng, x.size(), z.size());
    set_map g = gen_map(rng, y.size(), z.size());
    exact_square sq = pullback_square(x, y, z, f, g);

    functor_element t1 = gen_element(rng, inst, x);
    functor_element t2 = gen_element(rng, inst, y);
    qvalue base = element_distance(inst, fmap(inst, sq.f, t1), fmap(inst, sq.g, t2));
    auto w = exactness_witness(inst, sq, t1, t2);

    if (base.is_bottom()) {
      if (w) return cx({{"law", "exact-squares"}, {"unexpected-witness", true}});
      return std::nullopt;
    }
    if (!w) return cx({{"law", "exact-squares"}, {"missing-witness", true}, {"base", base.str()}});
    qvalue left = element_distance(inst, t1, fmap(inst, sq.u, *w));
    qvalue right = element_distance(inst, fmap(inst, sq.v, *w), t2);
    if (!leq(base, tensor(left, right))) {
      return cx({{"law", "exact-squares"},
                 {"base", base.str()},
                 {"left", left.str()},
                 {"right", right.str()}});
    }
    // the other inclusion is plain functoriality, so the witness value is tight
    if (!leq(tensor(left, right), base)) {
      return cx({{"law", "exact-squares-tightness"}, {"base", base.str()}});
    }
    return std::nullopt;
  };
  return run_trials(s, target, "functor/exact-squares", trial);
}

// ---- coolness -----------------------------------------------------------------

law_report run_coolness(const law_suite& s, const std::string& target) {
  auto trial = [target](splitmix64& rng, int bound) -> std::optional<std::string> {
    functor_instance inst = gen_instance(rng, target);
    carrier y = gen_carrier(rng, "y", bound);
    std::size_t extra = rng.below(static_cast<std::uint64_t>(bound));
    std::vector<std::string> keys;
    for (std::size_t i = 0; i < y.size() + extra; ++i) keys.push_back("x" + std::to_string(i));
    carrier x("x", keys);
    set_map f = gen_surjection(rng, x.size(), y.size());

    functor_element t = gen_element(rng, inst, x);
    functor_element tt = gen_element(rng, inst, y);

    for (bool mirrored : {false, true}) {
      functor_element w = coolness_witness(inst, f, x, y, t, tt, mirrored);
      if (!(fmap(inst, f, w) == tt)) {
        return cx({{"law", "coolness-projection"}, {"mirrored", mirrored}});
      }
      qvalue bound_v = mirrored ? element_distance(inst, tt, fmap(inst, f, t))
                                : element_distance(inst, fmap(inst, f, t), tt);
      qvalue got = mirrored ? element_distance(inst, w, t) : element_distance(inst, t, w);
      if (!leq(bound_v, got)) {
        return cx({{"law", "coolness-bound"},
                   {"mirrored", mirrored},
                   {"target", element_to_json(inst, y, tt)},
                   {"bound", bound_v.str()},
                   {"got", got.str()}});
      }
    }

    // converse inclusion = functor sends maps to structure-preserving maps
    functor_element t2 = gen_element(rng, inst, x);
    if (!leq(element_distance(inst, t, t2), element_distance(inst, fmap(inst, f, t), fmap(inst, f, t2)))) {
      return cx({{"law", "coolness-equality-form"}});
    }
    if (inst.kind == functor_kind::list) {
      // symmetric structure shortcut applies here
      if (element_distance(inst, t, t2) != element_distance(inst, t2, t)) {
        return cx({{"law", "coolness-symmetry"}});
      }
    }
    return std::nullopt;
  };
  return run_trials(s, target, "functor/coolness", trial);
}

}  // namespace detail
}  // namespace laxconf
