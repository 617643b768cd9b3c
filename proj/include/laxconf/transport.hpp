#pragma once

#include <optional>
#include <string>
#include <vector>

#include "laxconf/vrel.hpp"

namespace laxconf {

struct flow_node {
  std::string id;
  rational supply;  // positive = supply, negative = demand
};

struct flow_arc {
  int from = 0;
  int to = 0;
  std::optional<rational> capacity;  // nullopt = unbounded
  qvalue unit_cost;                  // ext_real; infinite-cost arcs are never used
};

struct flow_network {
  std::vector<flow_node> nodes;
  std::vector<flow_arc> arcs;

  int add_node(std::string id, rational supply);
  void add_arc(int from, int to, std::optional<rational> capacity, qvalue unit_cost);
};

struct transport_stats {
  std::size_t node_count = 0;
  std::size_t finite_arc_count = 0;  // arcs that entered the solver
  long long iterations = 0;          // shortest-path augmentations
};

struct transport_result {
  qvalue optimal_cost;          // ext_real; infinity when supply cannot be routed
  std::vector<rational> flow;   // per input arc (zero on omitted infinite-cost arcs)
  transport_stats stats;
};

enum class flow_algorithm {
  successive_shortest_paths,  // default: exact primal-dual augmentation
  network_simplex             // two-phase tree pivots, same exact optimum
};

// Exact minimum-cost flow. Requires costs >= 0 and total supply zero;
// infinite-cost arcs are omitted rather than big-M'ed, and a network that
// cannot route all supply over the remaining arcs yields optimal_cost =
// infinity together with the flow found. Both algorithms return the same
// optimal cost; stats.iterations counts augmentations or pivots.
transport_result min_cost_flow(const flow_network& net,
                               flow_algorithm alg = flow_algorithm::successive_shortest_paths);

// Couplings of two equal-mass weight vectors, minimizing expected cost.
qvalue balanced_ot(const vrel& cost, const std::vector<rational>& mu, const std::vector<rational>& nu);

// Lax-coupling transport between weight vectors of arbitrary mass: mass may
// be dropped from mu for free and mass missing on the nu side is created at
// unit cost, matching the asymmetry of truncated subtraction.
qvalue unbalanced_ot(const vrel& cost, const std::vector<rational>& mu, const std::vector<rational>& nu);

// Probability-weight matrix indexed [label][state].
using rational_matrix = std::vector<std::vector<rational>>;

// Transport between distributions on labels x states with ground cost
// d_a(a,b) + r(x,y), realized directly on the bipartite product graph.
transport_result mlmc_bipartite(const vrel& r, const vcat& d_a, const rational_matrix& mu,
                                const rational_matrix& nu);

// Same optimum through a four-layer network whose layers carry the label
// move on the left, the state move in the middle, and the label move on the
// right; the finite-arc count drops from Theta(n^4) to O(n^3).
transport_result mlmc_tiered(const vrel& r, const vcat& d_a, const rational_matrix& mu,
                             const rational_matrix& nu);

// Splits b into one part per input slot such that parts sum to b and each
// part dominates (sum(a) <= b) or is dominated by (sum(a) >= b) its slot,
// filling slots in input order.
std::vector<rational> greedy_decompose(const std::vector<rational>& a, const rational& b);

std::string dump_network(const flow_network& net);

}  // namespace laxconf
