// Acceptance suite: one criterion per section, one verdict line each.
// Everything asserts exact values; there are no tolerances to tune because
// all arithmetic is rational.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

#include "laxconf/json_io.hpp"
#include "laxconf/lawcheck.hpp"
#include "support/brute_force.hpp"
#include "support/oracles.hpp"

using namespace laxconf;

namespace {

qvalue ext(long long n) { return qvalue::ext_real(rational(n)); }

struct outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    pass = false;
    if (detail.empty()) detail = why;
  }
};

// ---- 1: axiom suites on every shipped pair ---------------------------------

outcome criterion_lax_axioms() {
  outcome out;
  law_suite s;
  s.id = suite_id::lax_axioms;
  s.trials = 200;
  s.seed = 1;
  s.carrier_bound = 3;
  for (const auto& rep : run_suite(s)) {
    if (!rep.ok()) out.fail(rep.target + " failed " + std::to_string(rep.failed) + " trials");
  }
  return out;
}

// ---- 2: negative control surfaces its counterexample ------------------------

outcome criterion_negative_control() {
  outcome out;
  law_suite s;
  s.id = suite_id::distributoriality;
  s.trials = 1000;
  s.seed = 2;
  s.carrier_bound = 3;
  law_report rep = run_target(s, "list-wass-exact");
  if (!rep.expect_counterexample || rep.counterexamples.empty()) {
    out.fail("no counterexample found in 1000 trials");
  }
  return out;
}

// ---- 3: textbook edit distances ----------------------------------------------

outcome criterion_edit_distance() {
  outcome out;
  carrier alphabet("s", {"a", "b", "c", "d"});
  vrel r(alphabet, alphabet, quantale_kind::ext_real, ext(1));
  for (std::size_t i = 0; i < alphabet.size(); ++i) r.set(i, i, ext(0));
  functor_instance inst = functor_instance::list();
  extension lax = extension::wasserstein_lax(inst);
  extension exact = extension::wasserstein_exact(inst);

  splitmix64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    list_elem s, t;
    std::size_t ls = rng.below(7), lt = rng.below(7);
    for (std::size_t k = 0; k < ls; ++k) s.push_back(static_cast<int>(rng.below(4)));
    for (std::size_t k = 0; k < lt; ++k) t.push_back(static_cast<int>(rng.below(4)));
    // reference recurrence over plain integers
    std::vector<std::vector<long long>> d(ls + 1, std::vector<long long>(lt + 1, 0));
    for (std::size_t i = 0; i <= ls; ++i) d[i][0] = static_cast<long long>(i);
    for (std::size_t j = 0; j <= lt; ++j) d[0][j] = static_cast<long long>(j);
    for (std::size_t i = 1; i <= ls; ++i) {
      for (std::size_t j = 1; j <= lt; ++j) {
        d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (s[i - 1] == t[j - 1] ? 0 : 1)});
      }
    }
    if (wasserstein_lax(lax, r, s, t) != ext(d[ls][lt])) {
      out.fail("lax mismatch at trial " + std::to_string(trial));
      break;
    }
    // equal-length prefix pair doubles as the positional-mismatch check
    std::size_t len = std::min(ls, lt);
    list_elem s2(s.begin(), s.begin() + static_cast<long>(len));
    list_elem t2(t.begin(), t.begin() + static_cast<long>(len));
    long long mismatches = 0;
    for (std::size_t k = 0; k < len; ++k) mismatches += s2[k] != t2[k] ? 1 : 0;
    if (wasserstein_exact(exact, r, s2, t2) != ext(mismatches)) {
      out.fail("exact mismatch at trial " + std::to_string(trial));
      break;
    }
  }
  return out;
}

// ---- 4: greatest simulations vs relation enumeration -------------------------

outcome criterion_simulations() {
  outcome out;
  splitmix64 rng(4);
  for (const char* key : {"lts-sub", "lts-cpl", "lts-rd", "lts-sup", "lts-cpl-rev", "lts-rd-rev"}) {
    for (int trial = 0; trial < 100; ++trial) {
      functor_instance inst = gen_instance(rng, key);
      coalgebra a = gen_coalgebra(rng, inst, 4);
      coalgebra b = gen_coalgebra(rng, inst, 4);
      distance_report rep = behavioural_distance(a, b, extension::wasserstein_lax(inst));
      if (!rep.converged_exact || rep.distances != oracle::greatest_simulation(a, b)) {
        out.fail(std::string(key) + " trial " + std::to_string(trial));
        return out;
      }
    }
  }
  return out;
}

// ---- 5: modal refinement against the two clauses ------------------------------

outcome criterion_modal_refinement() {
  outcome out;
  splitmix64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    // label posets up to three elements
    carrier labels = gen_carrier(rng, "a", 3);
    vcat order = gen_cat(rng, labels, quantale_kind::boolean);
    functor_instance inst = functor_instance::mts(labels, order.rel());
    coalgebra a = gen_coalgebra(rng, inst, 4);
    coalgebra b = gen_coalgebra(rng, inst, 4);

    vrel r = gen_rel(rng, a.states, b.states, quantale_kind::boolean);
    bool engine = is_simulation(a, b, extension::wasserstein_lax(inst), r);
    bool direct = oracle::is_refinement_mask(a, b, [&] {
      unsigned long long mask = 0;
      for (std::size_t x = 0; x < a.states.size(); ++x) {
        for (std::size_t y = 0; y < b.states.size(); ++y) {
          if (r.at(x, y).truth()) mask |= 1ull << (x * b.states.size() + y);
        }
      }
      return mask;
    }());
    if (engine != direct) {
      out.fail("verdict mismatch at trial " + std::to_string(trial));
      return out;
    }
    distance_report rep = behavioural_distance(a, b, extension::wasserstein_lax(inst));
    if (rep.distances != oracle::greatest_refinement(a, b)) {
      out.fail("greatest refinement mismatch at trial " + std::to_string(trial));
      return out;
    }
  }
  return out;
}

// ---- 6: stream optimum, exhaustively -------------------------------------------

outcome criterion_stream_tensor() {
  outcome out;
  const std::vector<qvalue> vals{ext(0), qvalue::ext_real(rational(1, 2)), ext(1), ext(2),
                                 qvalue::infinity()};
  carrier labels("a", {"a0", "a1"});
  carrier x("x", {"x0"});
  carrier y("y", {"y0"});
  // every hemimetric on two labels with values from the sample set
  for (const qvalue& d01 : vals) {
    for (const qvalue& d10 : vals) {
      vrel d(labels, labels, quantale_kind::ext_real, ext(0));
      d.set(0, 1, d01);
      d.set(1, 0, d10);
      auto rep = check_vcategory(d);
      if (!rep.reflexive || !rep.transitive) continue;
      functor_instance inst = functor_instance::stream(labels, vcat::trusted(d));
      extension lax = extension::wasserstein_lax(inst);
      for (const qvalue& rv : vals) {
        vrel r(x, y, quantale_kind::ext_real, rv);
        for (int la = 0; la < 2; ++la) {
          for (int lb = 0; lb < 2; ++lb) {
            qvalue got = wasserstein_lax(lax, r, labeled_pair{la, 0}, labeled_pair{lb, 0});
            qvalue expect = tensor(d.at(la, lb), rv);
            if (got != expect) {
              out.fail("mismatch at labels " + std::to_string(la) + "," + std::to_string(lb));
              return out;
            }
          }
        }
      }
    }
  }
  return out;
}

// ---- 7: unbalanced transport vs the slack objective ----------------------------

outcome criterion_unbalanced() {
  outcome out;
  splitmix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t m = 1 + rng.below(4), n = 1 + rng.below(4);
    std::vector<std::string> xk, yk;
    for (std::size_t i = 0; i < m; ++i) xk.push_back("x" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) yk.push_back("y" + std::to_string(j));
    carrier x("x", xk), y("y", yk);
    vrel cost(x, y, quantale_kind::ext_real, qvalue::infinity());
    std::vector<std::vector<std::optional<rational>>> cells(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        qvalue v = gen_value(rng, quantale_kind::ext_real);
        cost.set(i, j, v);
        cells[i].push_back(v.is_inf() ? std::nullopt : std::optional<rational>(v.finite()));
      }
    }
    auto masses = [&](std::size_t k) {
      std::vector<rational> ms;
      for (std::size_t i = 0; i < k; ++i) {
        ms.push_back(rational(static_cast<long long>(rng.below(5)),
                              1 + static_cast<long long>(rng.below(4))));
      }
      return ms;
    };
    std::vector<rational> mu = masses(m), nu = masses(n);

    // definitional objective: creation before, expected cost, creation after
    std::vector<std::pair<std::size_t, std::size_t>> usable;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (cells[i][j]) usable.emplace_back(i, j);
      }
    }
    oracle::lp prob;
    prob.c.assign(usable.size() + m + n, rational(0));
    for (std::size_t k = 0; k < usable.size(); ++k) prob.c[k] = *cells[usable[k].first][usable[k].second];
    for (std::size_t i = 0; i < m + n; ++i) prob.c[usable.size() + i] = rational(1);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<rational> row(prob.c.size(), rational(0));
      for (std::size_t k = 0; k < usable.size(); ++k) {
        if (usable[k].first == i) row[k] = rational(1);
      }
      row[usable.size() + i] = rational(-1);
      prob.a.push_back(std::move(row));
      prob.b.push_back(mu[i]);
      prob.rels.push_back(oracle::lp::rel::le);
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<rational> row(prob.c.size(), rational(0));
      for (std::size_t k = 0; k < usable.size(); ++k) {
        if (usable[k].second == j) row[k] = rational(1);
      }
      row[usable.size() + m + j] = rational(1);
      prob.a.push_back(std::move(row));
      prob.b.push_back(nu[j]);
      prob.rels.push_back(oracle::lp::rel::ge);
    }
    auto expect = oracle::solve_lp(prob);
    if (!expect || unbalanced_ot(cost, mu, nu) != qvalue::ext_real(*expect)) {
      out.fail("slack objective mismatch at trial " + std::to_string(trial));
      return out;
    }

    // equal-mass side condition: cheap transport matches the balanced optimum
    rational total(0);
    for (const auto& v : mu) total += v;
    vrel cheap(x, y, quantale_kind::ext_real, ext(0));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        cheap.set(i, j, qvalue::ext_real(rational(static_cast<long long>(rng.below(2)), 2)));
      }
    }
    std::vector<rational> nu2(n, rational(0));
    nu2[0] = total;
    if (unbalanced_ot(cheap, mu, nu2) != balanced_ot(cheap, mu, nu2)) {
      out.fail("balanced agreement failed at trial " + std::to_string(trial));
      return out;
    }
  }
  return out;
}

// ---- 8: the two network realizations ---------------------------------------------

outcome criterion_mlmc_networks() {
  outcome out;
  splitmix64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    carrier labels = gen_carrier(rng, "a", 4);
    carrier x = gen_carrier(rng, "x", 4);
    carrier y = gen_carrier(rng, "y", 4);
    vcat da = gen_cat(rng, labels, quantale_kind::ext_real);
    vrel r = gen_rel(rng, x, y, quantale_kind::ext_real);
    functor_instance inst = functor_instance::mlmc(labels, da);
    auto mu = dense_dist(std::get<labeled_dist>(gen_element(rng, inst, x)), labels.size(), x.size());
    auto nu = dense_dist(std::get<labeled_dist>(gen_element(rng, inst, y)), labels.size(), y.size());
    auto bip = mlmc_bipartite(r, da, mu, nu);
    auto tier = mlmc_tiered(r, da, mu, nu);
    if (bip.optimal_cost != tier.optimal_cost) {
      out.fail("cost mismatch at trial " + std::to_string(trial));
      return out;
    }
  }
  // arc-count scaling on fully finite instances
  for (std::size_t n = 2; n <= 8; ++n) {
    std::vector<std::string> ks;
    for (std::size_t i = 0; i < n; ++i) ks.push_back("k" + std::to_string(i));
    carrier labels("a", ks), x("x", ks), y("y", ks);
    vrel dar(labels, labels, quantale_kind::ext_real, ext(1));
    for (std::size_t i = 0; i < n; ++i) dar.set(i, i, ext(0));
    vcat da = vcat::checked(dar);
    vrel r(x, y, quantale_kind::ext_real, ext(1));
    rational_matrix mu(n, std::vector<rational>(n, rational(0)));
    rational_matrix nu(n, std::vector<rational>(n, rational(0)));
    mu[0][0] = rational(1);
    nu[0][0] = rational(1);
    auto bip = mlmc_bipartite(r, da, mu, nu);
    auto tier = mlmc_tiered(r, da, mu, nu);
    if (bip.stats.finite_arc_count != n * n * n * n) out.fail("product arc count at n=" + std::to_string(n));
    if (tier.stats.finite_arc_count != 3 * n * n * n) out.fail("tiered arc count at n=" + std::to_string(n));
  }
  return out;
}

// ---- 9: dualities -------------------------------------------------------------------

outcome criterion_dualities() {
  outcome out;
  law_suite s;
  s.id = suite_id::dualities;
  s.trials = 500;
  s.seed = 9;
  s.carrier_bound = 3;
  for (const auto& rep : run_suite(s)) {
    if (!rep.ok()) out.fail(rep.target + " failed " + std::to_string(rep.failed) + " trials");
  }
  return out;
}

// ---- 10: well-behaved liftings ------------------------------------------------------

outcome criterion_well_behaved() {
  outcome out;
  law_suite s;
  s.id = suite_id::well_behaved;
  s.trials = 200;
  s.seed = 10;
  s.carrier_bound = 3;
  auto reports = run_suite(s);
  if (reports.size() != 7) out.fail("expected seven lifting targets");
  for (const auto& rep : reports) {
    if (!rep.ok()) out.fail(rep.target + " failed " + std::to_string(rep.failed) + " trials");
  }
  return out;
}

// ---- 11: fixpoint sanity --------------------------------------------------------------

outcome criterion_fixpoint_sanity() {
  outcome out;
  splitmix64 rng(11);
  for (const char* key : {"lts-sub", "lts-sup", "lts-cpl", "lts-cpl-rev", "lts-rd", "lts-rd-rev",
                          "lts-discrete", "mts", "list", "weighted-nat", "weighted-real", "stream",
                          "mlmc"}) {
    functor_instance inst = gen_instance(rng, key);
    coalgebra a = gen_coalgebra(rng, inst, 3);
    fixpoint_config cfg;
    cfg.max_iterations = 50;
    distance_report rep = behavioural_distance(a, a, extension::wasserstein_lax(inst), cfg);
    for (std::size_t i = 0; i < a.states.size(); ++i) {
      if (!leq(qvalue::unit(inst.value_kind()), rep.distances.at(i, i))) {
        out.fail(std::string(key) + ": diagonal below the unit");
      }
    }
  }
  for (int trial = 0; trial < 50; ++trial) {
    functor_instance inst = gen_instance(rng, "lts-sub");
    coalgebra a = gen_coalgebra(rng, inst, 4);
    coalgebra b = gen_coalgebra(rng, inst, 4);
    distance_report rep = behavioural_distance(a, b, extension::wasserstein_lax(inst));
    long long bound = static_cast<long long>(a.states.size() * b.states.size()) + 1;
    if (!rep.converged_exact || rep.iterations > bound) out.fail("iteration bound exceeded");
  }
  // four-way distributor agreement at carriers up to four
  law_suite s;
  s.id = suite_id::distributor_agreement;
  s.trials = 200;
  s.seed = 11;
  s.carrier_bound = 3;  // generators add one, reaching size four
  for (const auto& rep : run_suite(s)) {
    if (!rep.ok()) out.fail("distributor agreement: " + rep.target);
  }
  // diagonal/graph commutation, exhaustive over maps and sampled predicates
  const std::vector<qvalue> vals{ext(0), ext(1), qvalue::infinity()};
  for (std::size_t nx = 1; nx <= 4; ++nx) {
    for (std::size_t ny = 1; ny <= 2; ++ny) {
      std::vector<std::string> xk, yk;
      for (std::size_t i = 0; i < nx; ++i) xk.push_back("x" + std::to_string(i));
      for (std::size_t i = 0; i < ny; ++i) yk.push_back("y" + std::to_string(i));
      carrier x("x", xk), y("y", yk);
      std::size_t nmaps = 1;
      for (std::size_t i = 0; i < nx; ++i) nmaps *= ny;
      for (std::size_t code = 0; code < nmaps; ++code) {
        set_map f(nx);
        std::size_t c = code;
        for (std::size_t i = 0; i < nx; ++i) {
          f[i] = static_cast<int>(c % ny);
          c /= ny;
        }
        std::size_t npreds = 1;
        for (std::size_t i = 0; i < ny; ++i) npreds *= vals.size();
        for (std::size_t pc = 0; pc < npreds; ++pc) {
          std::vector<qvalue> g;
          std::size_t p = pc;
          for (std::size_t i = 0; i < ny; ++i) {
            g.push_back(vals[p % vals.size()]);
            p /= vals.size();
          }
          std::vector<qvalue> gf;
          for (std::size_t i = 0; i < nx; ++i) gf.push_back(g[f[i]]);
          vrel lhs = compose(graph_rel(f, x, y, quantale_kind::ext_real), diag(gf, x, quantale_kind::ext_real));
          vrel rhs = compose(diag(g, y, quantale_kind::ext_real), graph_rel(f, x, y, quantale_kind::ext_real));
          if (!(lhs == rhs)) out.fail("diagonal/graph commutation");
        }
      }
    }
  }
  return out;
}

}  // namespace

int main() {
  struct criterion {
    const char* name;
    std::function<outcome()> run;
  };
  const criterion criteria[] = {
      {"1 axiom suites pass on every shipped engine pair", criterion_lax_axioms},
      {"2 negative control finds the absorption counterexample", criterion_negative_control},
      {"3 lax list engine matches textbook edit distances", criterion_edit_distance},
      {"4 greatest simulations match relation enumeration", criterion_simulations},
      {"5 modal refinement matches the two-clause definition", criterion_modal_refinement},
      {"6 stream optimum is label move plus relation value", criterion_stream_tensor},
      {"7 unbalanced transport matches the slack objective", criterion_unbalanced},
      {"8 tiered and product networks agree, arc counts scale", criterion_mlmc_networks},
      {"9 predicate-meet and coupling engines are dual", criterion_dualities},
      {"10 all seven liftings are well-behaved", criterion_well_behaved},
      {"11 fixpoint sanity and exhaustive relation laws", criterion_fixpoint_sanity},
  };

  bool all = true;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %-55s %s (%.2fs)%s%s\n", c.name, out.pass ? "PASS" : "FAIL", secs,
                out.detail.empty() ? "" : " -- ", out.detail.c_str());
    std::fflush(stdout);
    all = all && out.pass;
  }
  return all ? 0 : 1;
}
