#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "laxconf/lawcheck.hpp"
#include "laxconf/transport.hpp"
#include "support/oracles.hpp"

using namespace laxconf;

namespace {

qvalue ext(long long n) { return qvalue::ext_real(rational(n)); }
qvalue ext(const rational& r) { return qvalue::ext_real(r); }

std::vector<std::vector<std::optional<rational>>> cost_cells(const vrel& c) {
  std::vector<std::vector<std::optional<rational>>> out(c.rows());
  for (std::size_t i = 0; i < c.rows(); ++i) {
    for (std::size_t j = 0; j < c.cols(); ++j) {
      out[i].push_back(c.at(i, j).is_inf() ? std::nullopt : std::optional<rational>(c.at(i, j).finite()));
    }
  }
  return out;
}

vrel gen_cost(splitmix64& rng, const carrier& x, const carrier& y, bool allow_inf) {
  vrel c(x, y, quantale_kind::ext_real, qvalue::infinity());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      qvalue v = gen_value(rng, quantale_kind::ext_real);
      if (!allow_inf && v.is_inf()) v = ext(3);
      c.set(i, j, v);
    }
  }
  return c;
}

std::vector<rational> gen_masses(splitmix64& rng, std::size_t n, long long max_den) {
  std::vector<rational> out;
  for (std::size_t i = 0; i < n; ++i) {
    long long den = 1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(max_den)));
    out.push_back(rational(static_cast<long long>(rng.below(4)), den));
  }
  return out;
}

void check_conservation(const flow_network& net, const transport_result& res) {
  std::vector<rational> balance(net.nodes.size(), rational(0));
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    REQUIRE_FALSE(res.flow[i].is_negative());
    if (net.arcs[i].capacity) REQUIRE(res.flow[i] <= *net.arcs[i].capacity);
    balance[net.arcs[i].from] += res.flow[i];
    balance[net.arcs[i].to] -= res.flow[i];
  }
  if (!res.optimal_cost.is_inf()) {
    for (std::size_t i = 0; i < net.nodes.size(); ++i) REQUIRE(balance[i] == net.nodes[i].supply);
  }
}

}  // namespace

TEST_CASE("single arc network") {
  flow_network net;
  int s = net.add_node("s", rational(1));
  int t = net.add_node("t", rational(-1));
  net.add_arc(s, t, std::nullopt, ext(3));
  auto res = min_cost_flow(net);
  CHECK(res.optimal_cost == ext(3));
  CHECK(res.flow[0] == rational(1));
  check_conservation(net, res);
}

TEST_CASE("zero-cost networks route for free") {
  splitmix64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    flow_network net;
    std::size_t n = 2 + rng.below(3);
    rational total(0);
    std::vector<int> sources, sinks;
    for (std::size_t i = 0; i < n; ++i) {
      rational m(static_cast<long long>(1 + rng.below(3)));
      sources.push_back(net.add_node("s", m));
      total += m;
    }
    sinks.push_back(net.add_node("t", -total));
    for (int s : sources) net.add_arc(s, sinks[0], std::nullopt, ext(0));
    auto res = min_cost_flow(net);
    CHECK(res.optimal_cost == ext(0));
    check_conservation(net, res);
  }
}

TEST_CASE("unbalanced supplies are rejected") {
  flow_network net;
  net.add_node("s", rational(2));
  net.add_node("t", rational(-1));
  CHECK_THROWS_AS(min_cost_flow(net), validation_error);
}

TEST_CASE("unroutable supply reports an infinite optimum") {
  flow_network net;
  int s = net.add_node("s", rational(1));
  int t = net.add_node("t", rational(-1));
  net.add_arc(s, t, std::nullopt, qvalue::infinity());  // omitted arc
  auto res = min_cost_flow(net);
  CHECK(res.optimal_cost.is_inf());
  CHECK(res.stats.finite_arc_count == 0);
}

TEST_CASE("random transportation instances match the exhaustive plan oracle") {
  splitmix64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    carrier x = gen_carrier(rng, "x", 4);
    carrier y = gen_carrier(rng, "y", 4);
    vrel cost = gen_cost(rng, x, y, true);
    std::vector<rational> mu(x.size(), rational(0)), nu(y.size(), rational(0));
    // integral masses with equal totals
    long long total = 0;
    for (auto& m : mu) {
      long long v = static_cast<long long>(rng.below(3));
      m = rational(v);
      total += v;
    }
    long long left = total;
    for (std::size_t j = 0; j + 1 < nu.size(); ++j) {
      long long v = static_cast<long long>(rng.below(static_cast<std::uint64_t>(left + 1)));
      nu[j] = rational(v);
      left -= v;
    }
    nu.back() = rational(left);
    qvalue got = balanced_ot(cost, mu, nu);
    auto expect = oracle::min_cost_plan(cost_cells(cost), mu, nu);
    if (expect) {
      CHECK(got == ext(*expect));
    } else {
      CHECK(got.is_inf());
    }
  }
}

TEST_CASE("balanced transport on simple instances") {
  carrier x("x", {"x1", "x2"});
  carrier y("y", {"y1", "y2"});
  SUBCASE("point masses pay the diagonal cost") {
    vrel cost(x, x, quantale_kind::ext_real, ext(7));
    for (std::size_t i = 0; i < 2; ++i) cost.set(i, i, ext(0));
    CHECK(balanced_ot(cost, {rational(1), rational(0)}, {rational(1), rational(0)}) == ext(0));
  }
  SUBCASE("half-half masses with symmetric cost ride the identity coupling") {
    vrel cost(x, y, quantale_kind::ext_real, ext(1));
    cost.set(0, 0, ext(0));
    cost.set(1, 1, ext(0));
    CHECK(balanced_ot(cost, {rational(1, 2), rational(1, 2)}, {rational(1, 2), rational(1, 2)}) == ext(0));
  }
  SUBCASE("mass mismatch is a caller error") {
    vrel cost(x, y, quantale_kind::ext_real, ext(1));
    CHECK_THROWS_AS(balanced_ot(cost, {rational(1), rational(0)}, {rational(2), rational(0)}), validation_error);
  }
  SUBCASE("rational random instances match the oracle") {
    splitmix64 rng(9);
    for (int trial = 0; trial < 40; ++trial) {
      carrier a = gen_carrier(rng, "a", 3);
      carrier b = gen_carrier(rng, "b", 3);
      vrel cost = gen_cost(rng, a, b, true);
      auto mu = gen_masses(rng, a.size(), 4);
      rational total(0);
      for (const auto& m : mu) total += m;
      std::vector<rational> nu(b.size(), rational(0));
      nu[0] = total;  // equal total mass, concentrated then spread
      if (b.size() > 1 && !total.is_zero()) {
        nu[0] = total / rational(2);
        nu[1] = total - nu[0];
      }
      qvalue got = balanced_ot(cost, mu, nu);
      auto expect = oracle::min_cost_plan(cost_cells(cost), mu, nu);
      if (expect) {
        CHECK(got == ext(*expect));
      } else {
        CHECK(got.is_inf());
      }
    }
  }
}

namespace {

// definitional slack objective, solved by the independent simplex
rational unbalanced_oracle(const vrel& cost, const std::vector<rational>& mu, const std::vector<rational>& nu) {
  const std::size_t m = mu.size(), n = nu.size();
  auto cells = cost_cells(cost);
  // variables: rho_ij (usable cells), a_i, b_j
  std::vector<std::pair<std::size_t, std::size_t>> usable;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (cells[i][j]) usable.emplace_back(i, j);
    }
  }
  const std::size_t nv = usable.size() + m + n;
  oracle::lp prob;
  prob.c.assign(nv, rational(0));
  for (std::size_t k = 0; k < usable.size(); ++k) prob.c[k] = *cells[usable[k].first][usable[k].second];
  for (std::size_t i = 0; i < m + n; ++i) prob.c[usable.size() + i] = rational(1);
  // row(rho)_i - a_i <= mu_i
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<rational> row(nv, rational(0));
    for (std::size_t k = 0; k < usable.size(); ++k) {
      if (usable[k].first == i) row[k] = rational(1);
    }
    row[usable.size() + i] = rational(-1);
    prob.a.push_back(std::move(row));
    prob.b.push_back(mu[i]);
    prob.rels.push_back(oracle::lp::rel::le);
  }
  // col(rho)_j + b_j >= nu_j
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<rational> row(nv, rational(0));
    for (std::size_t k = 0; k < usable.size(); ++k) {
      if (usable[k].second == j) row[k] = rational(1);
    }
    row[usable.size() + m + j] = rational(1);
    prob.a.push_back(std::move(row));
    prob.b.push_back(nu[j]);
    prob.rels.push_back(oracle::lp::rel::ge);
  }
  auto got = oracle::solve_lp(prob);
  REQUIRE(got.has_value());
  return *got;
}

}  // namespace

TEST_CASE("lax transport between unequal masses") {
  carrier x("x", {"x"});
  carrier y("y", {"y"});
  SUBCASE("dropping mass is free") {
    vrel cost(x, y, quantale_kind::ext_real, ext(5));
    CHECK(unbalanced_ot(cost, {rational(1)}, {rational(0)}) == ext(0));
  }
  SUBCASE("uncovered target mass is created at unit price") {
    vrel cost(x, y, quantale_kind::ext_real, ext(5));
    CHECK(unbalanced_ot(cost, {rational(0)}, {rational(1)}) == ext(1));
    // expensive transport loses against dropping + creating
    CHECK(unbalanced_ot(cost, {rational(1)}, {rational(1)}) == ext(1));
  }
  SUBCASE("cheap transport wins against creation") {
    vrel c2(x, y, quantale_kind::ext_real, ext(rational(1, 2)));
    CHECK(unbalanced_ot(c2, {rational(1)}, {rational(1)}) == ext(rational(1, 2)));
  }
  SUBCASE("random instances match the definitional slack objective") {
    splitmix64 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
      carrier a = gen_carrier(rng, "a", 4);
      carrier b = gen_carrier(rng, "b", 4);
      vrel cost = gen_cost(rng, a, b, true);
      auto mu = gen_masses(rng, a.size(), 4);
      auto nu = gen_masses(rng, b.size(), 4);
      CHECK(unbalanced_ot(cost, mu, nu) == ext(unbalanced_oracle(cost, mu, nu)));
    }
  }
  SUBCASE("equal-mass instances where transport dominates match the balanced optimum") {
    splitmix64 rng(27);
    for (int trial = 0; trial < 40; ++trial) {
      carrier a = gen_carrier(rng, "a", 3);
      carrier b = gen_carrier(rng, "b", 3);
      // cheap everywhere: transporting a unit never costs more than creating it
      vrel cost(a, b, quantale_kind::ext_real, ext(0));
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
          cost.set(i, j, ext(rational(static_cast<long long>(rng.below(2)), 2)));
        }
      }
      auto mu = gen_masses(rng, a.size(), 2);
      rational total(0);
      for (const auto& v : mu) total += v;
      std::vector<rational> nu(b.size(), rational(0));
      nu[0] = total;
      CHECK(unbalanced_ot(cost, mu, nu) == balanced_ot(cost, mu, nu));
    }
  }
}

TEST_CASE("label-state transport: the four-layer network matches the product graph") {
  splitmix64 rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    carrier labels = gen_carrier(rng, "a", 3);
    carrier x = gen_carrier(rng, "x", 3);
    carrier y = gen_carrier(rng, "y", 3);
    vcat da = gen_cat(rng, labels, quantale_kind::ext_real);
    vrel r = gen_cost(rng, x, y, true);
    functor_instance inst = functor_instance::mlmc(labels, da);
    auto d1 = gen_element(rng, inst, x);
    auto d2 = gen_element(rng, inst, y);
    auto mu = dense_dist(std::get<labeled_dist>(d1), labels.size(), x.size());
    auto nu = dense_dist(std::get<labeled_dist>(d2), labels.size(), y.size());
    auto bip = mlmc_bipartite(r, da, mu, nu);
    auto tier = mlmc_tiered(r, da, mu, nu);
    REQUIRE(bip.optimal_cost == tier.optimal_cost);
  }
}

TEST_CASE("label-state transport on point distributions") {
  carrier labels("a", {"a0", "a1"});
  carrier x("x", {"x"});
  carrier y("y", {"y"});
  vrel dar(labels, labels, quantale_kind::ext_real, ext(0));
  dar.set(0, 1, ext(2));
  dar.set(1, 0, ext(2));
  vcat da = vcat::checked(dar);
  vrel r(x, y, quantale_kind::ext_real, ext(3));
  rational_matrix mu{{rational(1)}, {rational(0)}};
  rational_matrix nu{{rational(0)}, {rational(1)}};
  auto bip = mlmc_bipartite(r, da, mu, nu);
  CHECK(bip.optimal_cost == ext(5));  // label move 2 + state move 3
  CHECK(mlmc_tiered(r, da, mu, nu).optimal_cost == ext(5));
}

TEST_CASE("discrete labels with diagonal-only state costs reduce to state transport") {
  carrier labels("a", {"a0", "a1"});
  carrier x("x", {"x1", "x2"});
  vcat da = vcat::discrete(labels, quantale_kind::ext_real);
  vrel r(x, x, quantale_kind::ext_real, qvalue::infinity());
  r.set(0, 0, ext(0));
  r.set(1, 1, ext(0));
  rational_matrix mu{{rational(1, 2), rational(1, 2)}, {rational(0), rational(0)}};
  rational_matrix nu{{rational(1, 2), rational(1, 2)}, {rational(0), rational(0)}};
  CHECK(mlmc_bipartite(r, da, mu, nu).optimal_cost == ext(0));
}

TEST_CASE("finite arc counts for the two network shapes") {
  for (std::size_t n = 2; n <= 4; ++n) {
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
    CHECK(bip.stats.finite_arc_count == n * n * n * n);
    CHECK(tier.stats.finite_arc_count == 3 * n * n * n);
  }
}

TEST_CASE("greedy slot decomposition") {
  using vr = std::vector<rational>;
  CHECK(greedy_decompose(vr{rational(1), rational(2)}, rational(3)) == vr{rational(1), rational(2)});
  CHECK(greedy_decompose(vr{rational(1), rational(2)}, rational(5)) == vr{rational(3), rational(2)});
  CHECK(greedy_decompose(vr{rational(2), rational(2)}, rational(1)) == vr{rational(1), rational(0)});
  CHECK_THROWS_AS(greedy_decompose(vr{}, rational(1)), validation_error);

  splitmix64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng.below(4);
    vr a;
    rational sum(0);
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(rational(static_cast<long long>(rng.below(5)), 1 + rng.below(2)));
      sum += a.back();
    }
    rational b(static_cast<long long>(rng.below(8)), 2);
    vr parts = greedy_decompose(a, b);
    rational total(0);
    rational dm_sum(0);
    for (std::size_t i = 0; i < n; ++i) {
      total += parts[i];
      if (sum <= b) REQUIRE(a[i] <= parts[i]);
      if (sum >= b) REQUIRE((sum <= b || a[i] >= parts[i]));
      dm_sum += max(rational(0), parts[i] - a[i]);
    }
    REQUIRE(total == b);
    // per-slot gaps add up to the total gap
    REQUIRE(dm_sum == max(rational(0), b - sum));
  }
}

TEST_CASE("network dump is textual and complete") {
  flow_network net;
  int s = net.add_node("s", rational(1));
  int t = net.add_node("t", rational(-1));
  net.add_arc(s, t, rational(1), ext(rational(1, 2)));
  std::string dump = dump_network(net);
  CHECK(dump.find("p min 2 1") != std::string::npos);
  CHECK(dump.find("1/2") != std::string::npos);
}

TEST_CASE("lax transport inherits hemimetric laws from its cost") {
  splitmix64 rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    carrier x = gen_carrier(rng, "x", 3);
    vcat d = gen_cat(rng, x, quantale_kind::ext_real);
    auto masses = [&]() {
      std::vector<rational> m;
      for (std::size_t i = 0; i < x.size(); ++i) {
        m.push_back(rational(static_cast<long long>(rng.below(4)), 1 + rng.below(2)));
      }
      return m;
    };
    auto mu = masses(), nu = masses(), sigma = masses();
    // identical weights sit at distance zero
    REQUIRE(unbalanced_ot(d.rel(), mu, mu) == ext(0));
    // triangle through the middle weights
    qvalue ab = unbalanced_ot(d.rel(), mu, nu);
    qvalue bc = unbalanced_ot(d.rel(), nu, sigma);
    qvalue ac = unbalanced_ot(d.rel(), mu, sigma);
    REQUIRE(leq(tensor(ab, bc), ac));
    // pseudometric costs: symmetrize the induced distance, not the cost
    vrel sym(x, x, quantale_kind::ext_real, ext(0));
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = i + 1; j < x.size(); ++j) {
        sym.set(i, j, d.rel().at(i, j));
        sym.set(j, i, d.rel().at(i, j));
      }
    }
    for (std::size_t round = 0; round <= x.size(); ++round) {
      vrel sq = compose(sym, sym);
      vrel next(x, x, quantale_kind::ext_real, ext(0));
      bool changed = false;
      for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) {
          next.set(i, j, join(sym.at(i, j), sq.at(i, j)));
          changed = changed || next.at(i, j) != sym.at(i, j);
        }
      }
      sym = std::move(next);
      if (!changed) break;
    }
    auto symmetrized = [&](const std::vector<rational>& a, const std::vector<rational>& b) {
      return meet(unbalanced_ot(sym, a, b), unbalanced_ot(sym, b, a));
    };
    qvalue sab = symmetrized(mu, nu), sbc = symmetrized(nu, sigma), sac = symmetrized(mu, sigma);
    REQUIRE(leq(tensor(sab, sbc), sac));
  }
}

TEST_CASE("both flow algorithms find the same optimum") {
  splitmix64 rng(61);
  for (int trial = 0; trial < 120; ++trial) {
    // random supply/demand networks with mixed capacities and omitted arcs
    std::size_t n = 2 + rng.below(5);
    flow_network net;
    rational total(0);
    for (std::size_t v = 0; v < n; ++v) {
      rational s(static_cast<long long>(rng.below(4)), 1 + rng.below(2));
      net.add_node("n" + std::to_string(v), s);
      total += s;
    }
    // spread the matching demand over the last two nodes
    rational d1 = total / rational(2);
    net.nodes[n - 1].supply -= d1;
    net.nodes[n - 2].supply -= total - d1;
    std::size_t arcs = n + rng.below(2 * n);
    for (std::size_t k = 0; k < arcs; ++k) {
      int from = static_cast<int>(rng.below(n));
      int to = static_cast<int>(rng.below(n));
      if (from == to) continue;
      std::optional<rational> cap;
      if (rng.chance(1, 2)) cap = rational(static_cast<long long>(rng.below(5)), 1 + rng.below(2));
      net.add_arc(from, to, cap, gen_value(rng, quantale_kind::ext_real));
    }
    auto ssp = min_cost_flow(net, flow_algorithm::successive_shortest_paths);
    auto simplex = min_cost_flow(net, flow_algorithm::network_simplex);
    REQUIRE(ssp.optimal_cost == simplex.optimal_cost);
    if (!simplex.optimal_cost.is_inf()) check_conservation(net, simplex);
  }
}
