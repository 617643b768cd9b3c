// Times the serial reference step kernel against the OpenMP one on the
// distance fixpoint, for a boolean system and for a metric-labelled chain.

#include <chrono>
#include <cstdio>
#include <map>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "laxconf/lawcheck.hpp"

using namespace laxconf;

namespace {

double run_once(const coalgebra& a, const coalgebra& b, const extension& ext, bool parallel,
                long long max_iterations) {
  fixpoint_config cfg;
  cfg.parallel = parallel;
  cfg.max_iterations = max_iterations;
  auto start = std::chrono::steady_clock::now();
  distance_report rep = behavioural_distance(a, b, ext, cfg);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  (void)rep;
  return secs;
}

coalgebra random_lts(splitmix64& rng, std::size_t states, std::size_t labels, std::size_t out_degree) {
  std::vector<std::string> sk, lk;
  for (std::size_t i = 0; i < states; ++i) sk.push_back("s" + std::to_string(i));
  for (std::size_t i = 0; i < labels; ++i) lk.push_back("a" + std::to_string(i));
  coalgebra c;
  c.states = carrier("s", sk);
  c.instance = functor_instance::lts(carrier("a", lk), lts_order::sub);
  for (std::size_t x = 0; x < states; ++x) {
    std::vector<std::pair<int, int>> succ;
    for (std::size_t d = 0; d < out_degree; ++d) {
      succ.emplace_back(static_cast<int>(rng.below(labels)), static_cast<int>(rng.below(states)));
    }
    c.structure.push_back(label_set(std::move(succ)));
  }
  return c;
}

coalgebra random_chain(splitmix64& rng, std::size_t states, std::size_t labels) {
  std::vector<std::string> sk, lk;
  for (std::size_t i = 0; i < states; ++i) sk.push_back("s" + std::to_string(i));
  for (std::size_t i = 0; i < labels; ++i) lk.push_back("a" + std::to_string(i));
  carrier lc("a", lk);
  vrel d(lc, lc, quantale_kind::ext_real, qvalue::ext_real(rational(1)));
  for (std::size_t i = 0; i < labels; ++i) d.set(i, i, qvalue::ext_real(rational(0)));
  coalgebra c;
  c.states = carrier("s", sk);
  c.instance = functor_instance::mlmc(lc, vcat::trusted(d));
  for (std::size_t x = 0; x < states; ++x) {
    std::vector<std::pair<std::pair<int, int>, rational>> entries;
    int k = 4;
    for (int i = 0; i < k; ++i) {
      entries.push_back({{static_cast<int>(rng.below(labels)),
                          static_cast<int>(rng.below(states))},
                         rational(1, k)});
    }
    // merge duplicates
    std::map<std::pair<int, int>, rational> acc;
    for (auto& [pt, m] : entries) acc[pt] += m;
    c.structure.push_back(
        labeled_dist(std::vector<std::pair<std::pair<int, int>, rational>>(acc.begin(), acc.end())));
  }
  return c;
}

void bench(const char* name, const coalgebra& a, const coalgebra& b, const extension& ext,
           long long iterations) {
  double serial = run_once(a, b, ext, false, iterations);
  double parallel = run_once(a, b, ext, true, iterations);
  std::printf("%-28s states %3zu x %-3zu  serial %8.3fs  parallel %8.3fs  speedup %.2fx\n", name,
              a.states.size(), b.states.size(), serial, parallel, parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

void bench_solvers(splitmix64& rng, std::size_t n) {
  // one large label-state transport instance, solved by both algorithms
  std::vector<std::string> ks;
  for (std::size_t i = 0; i < n; ++i) ks.push_back("k" + std::to_string(i));
  carrier labels("a", ks), x("x", ks), y("y", ks);
  vrel dar(labels, labels, quantale_kind::ext_real, qvalue::ext_real(rational(1)));
  for (std::size_t i = 0; i < n; ++i) dar.set(i, i, qvalue::ext_real(rational(0)));
  vcat da = vcat::checked(dar);
  vrel r(x, y, quantale_kind::ext_real, qvalue::ext_real(rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      r.set(i, j, qvalue::ext_real(rational(static_cast<long long>(rng.below(4)), 1 + rng.below(2))));
    }
  }
  // dense marginals so the solvers have real work to do
  rational_matrix mu(n, std::vector<rational>(n, rational(1, static_cast<long long>(n * n))));
  rational_matrix nu(n, std::vector<rational>(n, rational(1, static_cast<long long>(n * n))));

  flow_network net;
  std::vector<std::vector<int>> left(n, std::vector<int>(n)), right(n, std::vector<int>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t i = 0; i < n; ++i) left[a][i] = net.add_node("l", mu[a][i]);
  }
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t j = 0; j < n; ++j) right[b][j] = net.add_node("r", -nu[b][j]);
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t j = 0; j < n; ++j) {
          net.add_arc(left[a][i], right[b][j], std::nullopt, tensor(dar.at(a, b), r.at(i, j)));
        }
      }
    }
  }
  auto time_alg = [&](flow_algorithm alg) {
    auto start = std::chrono::steady_clock::now();
    auto res = min_cost_flow(net, alg);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return std::make_pair(secs, res);
  };
  auto [t_ssp, r_ssp] = time_alg(flow_algorithm::successive_shortest_paths);
  auto [t_nsx, r_nsx] = time_alg(flow_algorithm::network_simplex);
  std::printf("transport solve (%zu^4 arcs)  augmenting %7.3fs (%lld steps)  simplex %7.3fs (%lld pivots)%s\n",
              n, t_ssp, r_ssp.stats.iterations, t_nsx, r_nsx.stats.iterations,
              r_ssp.optimal_cost == r_nsx.optimal_cost ? "" : "  COST MISMATCH");
}

int main(int argc, char** argv) {
  std::size_t lts_states = argc > 1 ? std::stoul(argv[1]) : 48;
  std::size_t chain_states = argc > 2 ? std::stoul(argv[2]) : 20;
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp not built in; both kernels run serially\n");
#endif
  splitmix64 rng(2024);
  coalgebra a1 = random_lts(rng, lts_states, 2, 3);
  coalgebra b1 = random_lts(rng, lts_states, 2, 3);
  bench("lts similarity", a1, b1, extension::wasserstein_lax(a1.instance), 10000);
  bench("lts similarity (closed)", a1, b1, extension::closed_form_for(a1.instance), 10000);

  coalgebra a2 = random_chain(rng, chain_states, 3);
  coalgebra b2 = random_chain(rng, chain_states, 3);
  bench("chain distance", a2, b2, extension::wasserstein_lax(a2.instance), 12);
  bench("chain distance (tiered)", a2, b2, extension::closed_form_for(a2.instance), 12);

  bench_solvers(rng, 8);
  return 0;
}
