// Two-phase network simplex over exact rationals. Phase one minimizes the
// mass on artificial root arcs; phase two pivots on the real costs with the
// artificials pinned at zero. No big-M values enter the arithmetic.

#include <algorithm>

#include "laxconf/transport.hpp"

namespace laxconf {

namespace {

struct simplex_arc {
  int from;
  int to;
  rational cap;
  rational cost;     // phase-dependent
  rational real_cost;
  rational flow;
  bool artificial;
  int orig;          // index into net.arcs, -1 for artificials
};

struct simplex_state {
  std::size_t n = 0;  // nodes incl. root
  std::vector<simplex_arc> arcs;
  std::vector<int> parent;      // node -> node
  std::vector<int> parent_arc;  // node -> arc index into `arcs`
  std::vector<rational> potential;
  std::vector<char> in_tree;    // per arc

  void rebuild_tree_fields(int root) {
    // adjacency over tree arcs, then BFS for parents and potentials
    std::vector<std::vector<int>> adj(n);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      if (!in_tree[i]) continue;
      adj[arcs[i].from].push_back(static_cast<int>(i));
      adj[arcs[i].to].push_back(static_cast<int>(i));
    }
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    potential[root] = rational(0);
    std::vector<int> stack{root};
    std::vector<char> seen(n, 0);
    seen[root] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int ai : adj[u]) {
        const simplex_arc& a = arcs[ai];
        int v = a.from == u ? a.to : a.from;
        if (seen[v]) continue;
        seen[v] = 1;
        parent[v] = u;
        parent_arc[v] = ai;
        // reduced cost of tree arcs is zero: cost + pi[from] - pi[to] = 0
        potential[v] = a.from == u ? potential[u] + a.cost : potential[u] - a.cost;
        stack.push_back(v);
      }
    }
  }

  rational reduced(const simplex_arc& a) const { return a.cost + potential[a.from] - potential[a.to]; }

  // one Bland pivot; returns false at optimality
  bool pivot(long long& pivots) {
    int enter = -1;
    bool increase = true;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      if (in_tree[i]) continue;
      if (arcs[i].cap.is_zero()) continue;  // pinned: both bounds coincide
      rational rc = reduced(arcs[i]);
      if (arcs[i].flow.is_zero() && rc < rational(0)) {
        enter = static_cast<int>(i);
        increase = true;
        break;
      }
      if (arcs[i].flow == arcs[i].cap && rc > rational(0)) {
        enter = static_cast<int>(i);
        increase = false;
        break;
      }
    }
    if (enter < 0) return false;
    ++pivots;

    // the unique tree cycle through the entering arc, oriented along the
    // direction of the flow change
    const simplex_arc& e = arcs[enter];
    int tail = increase ? e.from : e.to;
    int head = increase ? e.to : e.from;

    auto path_to_root = [&](int v) {
      std::vector<int> nodes;
      while (v >= 0) {
        nodes.push_back(v);
        v = parent[v];
      }
      return nodes;
    };
    std::vector<int> up_tail = path_to_root(tail);
    std::vector<int> up_head = path_to_root(head);
    // strip the common suffix to find the meeting point
    std::size_t it = up_tail.size(), ih = up_head.size();
    while (it > 1 && ih > 1 && up_tail[it - 2] == up_head[ih - 2]) {
      --it;
      --ih;
    }
    up_tail.resize(it);
    up_head.resize(ih);

    struct cycle_arc {
      int idx;
      bool forward;  // true if the change direction pushes along the arc
    };
    std::vector<cycle_arc> cycle;
    cycle.push_back({enter, increase});
    // from head up to the apex, cycle direction continues head -> apex
    for (std::size_t k = 0; k + 1 < up_head.size(); ++k) {
      int node = up_head[k];
      int ai = parent_arc[node];
      cycle.push_back({ai, arcs[ai].to == node ? false : true});
    }
    // from the apex down to tail, direction apex -> tail
    for (std::size_t k = up_tail.size() - 1; k-- > 0;) {
      int node = up_tail[k];
      int ai = parent_arc[node];
      cycle.push_back({ai, arcs[ai].to == node});
    }

    // blocking step length
    std::optional<rational> delta;
    int leave = enter;
    bool leave_forward = increase;
    for (const cycle_arc& c : cycle) {
      const simplex_arc& a = arcs[c.idx];
      rational room = c.forward ? a.cap - a.flow : a.flow;
      if (!delta || room < *delta || (room == *delta && c.idx < leave)) {
        delta = room;
        leave = c.idx;
        leave_forward = c.forward;
      }
    }
    for (const cycle_arc& c : cycle) {
      if (c.forward) {
        arcs[c.idx].flow += *delta;
      } else {
        arcs[c.idx].flow -= *delta;
      }
    }
    (void)leave_forward;
    if (leave != enter) {
      in_tree[enter] = 1;
      in_tree[leave] = 0;
      rebuild_tree_fields(static_cast<int>(n) - 1);
    }
    return true;
  }
};

}  // namespace

transport_result min_cost_flow_simplex(const flow_network& net) {
  const std::size_t n = net.nodes.size();
  rational supply_sum(0), total_supply(0);
  for (const auto& nd : net.nodes) {
    supply_sum += nd.supply;
    if (nd.supply > rational(0)) total_supply += nd.supply;
  }
  if (!supply_sum.is_zero()) throw validation_error("min_cost_flow: total supply must equal total demand");

  transport_result result;
  result.flow.assign(net.arcs.size(), rational(0));
  result.stats.node_count = n;

  simplex_state st;
  st.n = n + 1;  // plus the root
  const int root = static_cast<int>(n);
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    const flow_arc& a = net.arcs[i];
    if (a.from < 0 || a.to < 0 || static_cast<std::size_t>(a.from) >= n || static_cast<std::size_t>(a.to) >= n) {
      throw validation_error("min_cost_flow: arc endpoint out of range");
    }
    if (a.unit_cost.kind() != quantale_kind::ext_real) {
      throw validation_error("min_cost_flow: arc cost must be ext_real");
    }
    if (a.unit_cost.is_inf()) continue;
    rational cost = a.unit_cost.finite();
    if (cost.is_negative()) throw validation_error("min_cost_flow: negative arc cost");
    if (a.capacity && a.capacity->is_negative()) throw validation_error("min_cost_flow: negative capacity");
    rational cap = a.capacity ? *a.capacity : total_supply;
    st.arcs.push_back({a.from, a.to, cap, rational(0), cost, rational(0), false, static_cast<int>(i)});
    ++result.stats.finite_arc_count;
  }
  // artificial arcs carry the initial imbalance to the root
  for (std::size_t v = 0; v < n; ++v) {
    const rational& s = net.nodes[v].supply;
    if (s >= rational(0)) {
      st.arcs.push_back({static_cast<int>(v), root, total_supply, rational(1), rational(0), s, true, -1});
    } else {
      st.arcs.push_back({root, static_cast<int>(v), total_supply, rational(1), rational(0), -s, true, -1});
    }
  }
  st.parent.assign(st.n, -1);
  st.parent_arc.assign(st.n, -1);
  st.potential.assign(st.n, rational(0));
  st.in_tree.assign(st.arcs.size(), 0);
  for (std::size_t i = 0; i < st.arcs.size(); ++i) st.in_tree[i] = st.arcs[i].artificial ? 1 : 0;
  st.rebuild_tree_fields(root);

  const long long pivot_cap = 20000 + 200 * static_cast<long long>(st.arcs.size());
  long long pivots = 0;
  // phase one: drive the artificial mass to zero
  while (st.pivot(pivots)) {
    if (pivots > pivot_cap) throw cap_error("network simplex pivot budget exhausted");
  }
  rational artificial_mass(0);
  for (const auto& a : st.arcs) {
    if (a.artificial) artificial_mass += a.flow;
  }
  bool feasible = artificial_mass.is_zero();

  if (feasible) {
    // phase two: real costs, artificials pinned at zero
    for (auto& a : st.arcs) {
      a.cost = a.artificial ? rational(0) : a.real_cost;
      if (a.artificial) a.cap = rational(0);
    }
    st.rebuild_tree_fields(root);
    while (st.pivot(pivots)) {
      if (pivots > pivot_cap) throw cap_error("network simplex pivot budget exhausted");
    }
  }
  result.stats.iterations = pivots;

  rational total_cost(0);
  for (const auto& a : st.arcs) {
    if (a.orig >= 0) {
      result.flow[a.orig] = a.flow;
      total_cost += a.flow * a.real_cost;
    }
  }
  result.optimal_cost = feasible ? qvalue::ext_real(total_cost) : qvalue::infinity();
  return result;
}

}  // namespace laxconf
