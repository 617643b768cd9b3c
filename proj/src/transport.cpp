#include "laxconf/transport.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace laxconf {

int flow_network::add_node(std::string id, rational supply) {
  nodes.push_back({std::move(id), supply});
  return static_cast<int>(nodes.size()) - 1;
}

void flow_network::add_arc(int from, int to, std::optional<rational> capacity, qvalue unit_cost) {
  arcs.push_back({from, to, std::move(capacity), std::move(unit_cost)});
}

namespace {

struct residual_arc {
  int to;
  rational cap;        // remaining capacity
  rational cost;       // finite, >= 0 on forward arcs
  int partner;         // index of reverse arc in adjacency storage
  int orig;            // original arc index, -1 for reverse/auxiliary arcs
  bool unbounded;      // capacity tracks a surrogate bound
};

}  // namespace

transport_result min_cost_flow_simplex(const flow_network& net);

namespace {

transport_result min_cost_flow_ssp(const flow_network& net);

}  // namespace

transport_result min_cost_flow(const flow_network& net, flow_algorithm alg) {
  return alg == flow_algorithm::network_simplex ? min_cost_flow_simplex(net) : min_cost_flow_ssp(net);
}

namespace {

transport_result min_cost_flow_ssp(const flow_network& net) {
  const std::size_t n = net.nodes.size();
  rational total_supply(0);
  rational supply_sum(0);
  for (const auto& nd : net.nodes) {
    supply_sum += nd.supply;
    if (nd.supply > rational(0)) total_supply += nd.supply;
  }
  if (!supply_sum.is_zero()) throw validation_error("min_cost_flow: total supply must equal total demand");

  transport_result result;
  result.flow.assign(net.arcs.size(), rational(0));
  result.stats.node_count = n;

  // Residual graph over finite-cost arcs plus a super source/sink.
  const int S = static_cast<int>(n);
  const int T = static_cast<int>(n) + 1;
  std::vector<std::vector<int>> adj(n + 2);
  std::vector<residual_arc> arcs;
  auto add_edge = [&](int u, int v, rational cap, rational cost, int orig, bool unbounded) {
    adj[u].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({v, cap, cost, static_cast<int>(arcs.size()) + 1, orig, unbounded});
    adj[v].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({u, rational(0), -cost, static_cast<int>(arcs.size()) - 1, -1, false});
  };

  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    const flow_arc& a = net.arcs[i];
    if (a.from < 0 || a.to < 0 || static_cast<std::size_t>(a.from) >= n || static_cast<std::size_t>(a.to) >= n) {
      throw validation_error("min_cost_flow: arc endpoint out of range");
    }
    if (a.unit_cost.kind() != quantale_kind::ext_real) {
      throw validation_error("min_cost_flow: arc cost must be ext_real");
    }
    if (a.unit_cost.is_inf()) continue;  // omitted, never big-M'ed
    rational cost = a.unit_cost.finite();
    if (cost.is_negative()) throw validation_error("min_cost_flow: negative arc cost");
    if (a.capacity && a.capacity->is_negative()) throw validation_error("min_cost_flow: negative capacity");
    bool unbounded = !a.capacity.has_value();
    rational cap = unbounded ? total_supply : *a.capacity;
    add_edge(a.from, a.to, cap, cost, static_cast<int>(i), unbounded);
    ++result.stats.finite_arc_count;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (net.nodes[i].supply > rational(0)) add_edge(S, static_cast<int>(i), net.nodes[i].supply, rational(0), -1, false);
    if (net.nodes[i].supply < rational(0)) add_edge(static_cast<int>(i), T, -net.nodes[i].supply, rational(0), -1, false);
  }

  std::vector<rational> potential(n + 2, rational(0));
  rational routed(0);
  rational total_cost(0);

  while (routed < total_supply) {
    // Dense Dijkstra over reduced costs (all reduced costs stay >= 0).
    const std::size_t m = n + 2;
    std::vector<std::optional<rational>> dist(m);
    std::vector<int> via(m, -1);
    std::vector<bool> done(m, false);
    dist[S] = rational(0);
    while (true) {
      int u = -1;
      for (std::size_t v = 0; v < m; ++v) {
        if (!done[v] && dist[v] && (u < 0 || *dist[v] < *dist[u])) u = static_cast<int>(v);
      }
      if (u < 0) break;
      done[u] = true;
      for (int ei : adj[u]) {
        const residual_arc& e = arcs[ei];
        if (e.cap.is_zero() || done[e.to]) continue;
        rational nd = *dist[u] + e.cost + potential[u] - potential[e.to];
        if (!dist[e.to] || nd < *dist[e.to]) {
          dist[e.to] = nd;
          via[e.to] = ei;
        }
      }
    }
    if (!dist[T]) break;  // remaining supply cannot be routed at finite cost
    for (std::size_t v = 0; v < m; ++v) {
      if (dist[v]) potential[v] += *dist[v];
    }
    // Bottleneck along the shortest path.
    rational push = total_supply - routed;
    for (int v = T; v != S;) {
      const residual_arc& e = arcs[via[v]];
      push = min(push, e.cap);
      v = arcs[e.partner].to;
    }
    for (int v = T; v != S;) {
      residual_arc& e = arcs[via[v]];
      e.cap -= push;
      arcs[e.partner].cap += push;
      if (e.orig >= 0) {
        result.flow[e.orig] += push;
        total_cost += push * e.cost;
      } else if (arcs[e.partner].orig >= 0) {
        // traversing a reverse arc cancels flow on the original
        result.flow[arcs[e.partner].orig] -= push;
        total_cost -= push * arcs[e.partner].cost;
      }
      v = arcs[e.partner].to;
    }
    routed += push;
    ++result.stats.iterations;
  }

  result.optimal_cost = (routed == total_supply) ? qvalue::ext_real(total_cost) : qvalue::infinity();
  return result;
}

}  // namespace

qvalue balanced_ot(const vrel& cost, const std::vector<rational>& mu, const std::vector<rational>& nu) {
  if (cost.kind() != quantale_kind::ext_real) throw validation_error("balanced_ot: cost must be ext_real");
  if (mu.size() != cost.rows() || nu.size() != cost.cols()) {
    throw validation_error("balanced_ot: weight vector sizes must match cost carriers");
  }
  rational mass_mu = std::accumulate(mu.begin(), mu.end(), rational(0));
  rational mass_nu = std::accumulate(nu.begin(), nu.end(), rational(0));
  if (mass_mu != mass_nu) throw validation_error("balanced_ot: mass mismatch (use unbalanced_ot)");

  flow_network net;
  std::vector<int> xs(mu.size()), ys(nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i].is_negative()) throw validation_error("balanced_ot: negative weight");
    xs[i] = net.add_node("x" + std::to_string(i), mu[i]);
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    if (nu[j].is_negative()) throw validation_error("balanced_ot: negative weight");
    ys[j] = net.add_node("y" + std::to_string(j), -nu[j]);
  }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      net.add_arc(xs[i], ys[j], std::nullopt, cost.at(i, j));
    }
  }
  return min_cost_flow(net).optimal_cost;
}

qvalue unbalanced_ot(const vrel& cost, const std::vector<rational>& mu, const std::vector<rational>& nu) {
  if (cost.kind() != quantale_kind::ext_real) throw validation_error("unbalanced_ot: cost must be ext_real");
  if (mu.size() != cost.rows() || nu.size() != cost.cols()) {
    throw validation_error("unbalanced_ot: weight vector sizes must match cost carriers");
  }
  rational mass_nu = std::accumulate(nu.begin(), nu.end(), rational(0));

  // Every unit of nu is either transported out of mu or created at cost 1;
  // unused mu mass is dropped for free. This is the network form of
  // minimizing creation-before + expected cost + creation-after, where the
  // truncated-subtraction hemimetric makes destruction free on both sides.
  flow_network net;
  int s = net.add_node("s", mass_nu);
  int t = net.add_node("t", -mass_nu);
  std::vector<int> xs(mu.size()), ys(nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i].is_negative()) throw validation_error("unbalanced_ot: negative weight");
    xs[i] = net.add_node("x" + std::to_string(i), rational(0));
    net.add_arc(s, xs[i], mu[i], qvalue::ext_real(rational(0)));
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    if (nu[j].is_negative()) throw validation_error("unbalanced_ot: negative weight");
    ys[j] = net.add_node("y" + std::to_string(j), rational(0));
    net.add_arc(ys[j], t, nu[j], qvalue::ext_real(rational(0)));
  }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      net.add_arc(xs[i], ys[j], std::nullopt, cost.at(i, j));
    }
  }
  net.add_arc(s, t, std::nullopt, qvalue::ext_real(rational(1)));  // creation
  return min_cost_flow(net).optimal_cost;
}

namespace {

rational matrix_mass(const rational_matrix& m) {
  rational sum(0);
  for (const auto& row : m) {
    for (const auto& v : row) {
      if (v.is_negative()) throw validation_error("negative probability weight");
      sum += v;
    }
  }
  return sum;
}

void require_prob(const rational_matrix& mu, const rational_matrix& nu) {
  if (matrix_mass(mu) != rational(1) || matrix_mass(nu) != rational(1)) {
    throw validation_error("label-state weights must each sum to 1");
  }
}

}  // namespace

transport_result mlmc_bipartite(const vrel& r, const vcat& d_a, const rational_matrix& mu,
                                const rational_matrix& nu) {
  const std::size_t na = d_a.base().size();
  const std::size_t nx = r.rows(), ny = r.cols();
  if (mu.size() != na || nu.size() != na) throw validation_error("label dimension mismatch");
  for (const auto& row : mu) {
    if (row.size() != nx) throw validation_error("state dimension mismatch (left)");
  }
  for (const auto& row : nu) {
    if (row.size() != ny) throw validation_error("state dimension mismatch (right)");
  }
  require_prob(mu, nu);

  flow_network net;
  std::vector<std::vector<int>> left(na, std::vector<int>(nx)), right(na, std::vector<int>(ny));
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t x = 0; x < nx; ++x) left[a][x] = net.add_node("L" + std::to_string(a) + "_" + std::to_string(x), mu[a][x]);
  }
  for (std::size_t b = 0; b < na; ++b) {
    for (std::size_t y = 0; y < ny; ++y) right[b][y] = net.add_node("R" + std::to_string(b) + "_" + std::to_string(y), -nu[b][y]);
  }
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t b = 0; b < na; ++b) {
        for (std::size_t y = 0; y < ny; ++y) {
          qvalue c = tensor(d_a.rel().at(a, b), r.at(x, y));
          net.add_arc(left[a][x], right[b][y], std::nullopt, c);
        }
      }
    }
  }
  return min_cost_flow(net);
}

transport_result mlmc_tiered(const vrel& r, const vcat& d_a, const rational_matrix& mu,
                             const rational_matrix& nu) {
  const std::size_t na = d_a.base().size();
  const std::size_t nx = r.rows(), ny = r.cols();
  if (mu.size() != na || nu.size() != na) throw validation_error("label dimension mismatch");
  for (const auto& row : mu) {
    if (row.size() != nx) throw validation_error("state dimension mismatch (left)");
  }
  for (const auto& row : nu) {
    if (row.size() != ny) throw validation_error("state dimension mismatch (right)");
  }
  require_prob(mu, nu);

  flow_network net;
  auto layer = [&](const char* tag, std::size_t labels, std::size_t states, auto supply) {
    std::vector<std::vector<int>> ids(labels, std::vector<int>(states));
    for (std::size_t a = 0; a < labels; ++a) {
      for (std::size_t x = 0; x < states; ++x) {
        ids[a][x] = net.add_node(std::string(tag) + std::to_string(a) + "_" + std::to_string(x), supply(a, x));
      }
    }
    return ids;
  };
  auto l1 = layer("A", na, nx, [&](std::size_t a, std::size_t x) { return mu[a][x]; });
  auto l2 = layer("B", na, nx, [&](std::size_t, std::size_t) { return rational(0); });
  auto l3 = layer("C", na, ny, [&](std::size_t, std::size_t) { return rational(0); });
  auto l4 = layer("D", na, ny, [&](std::size_t b, std::size_t y) { return -nu[b][y]; });

  // label move on the left slice, state move in the middle, label move on the right
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 0; b < na; ++b) {
      for (std::size_t x = 0; x < nx; ++x) {
        net.add_arc(l1[a][x], l2[b][x], std::nullopt, d_a.rel().at(a, b));
      }
    }
  }
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        net.add_arc(l2[a][x], l3[a][y], std::nullopt, r.at(x, y));
      }
    }
  }
  for (std::size_t b = 0; b < na; ++b) {
    for (std::size_t c = 0; c < na; ++c) {
      for (std::size_t y = 0; y < ny; ++y) {
        net.add_arc(l3[b][y], l4[c][y], std::nullopt, d_a.rel().at(b, c));
      }
    }
  }
  return min_cost_flow(net);
}

std::vector<rational> greedy_decompose(const std::vector<rational>& a, const rational& b) {
  rational sum(0);
  for (const auto& v : a) {
    if (v.is_negative()) throw validation_error("greedy_decompose: negative slot value");
    sum += v;
  }
  if (b.is_negative()) throw validation_error("greedy_decompose: negative target");
  std::vector<rational> out(a.begin(), a.end());
  if (sum <= b) {
    if (a.empty()) {
      if (!b.is_zero()) throw validation_error("greedy_decompose: cannot split positive target into zero slots");
      return out;
    }
    out[0] += b - sum;  // surplus goes to the first slot
    return out;
  }
  rational remaining = b;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = min(out[i], remaining);
    remaining -= out[i];
  }
  return out;
}

std::string dump_network(const flow_network& net) {
  std::ostringstream os;
  os << "c laxconf flow network\n";
  os << "p min " << net.nodes.size() << " " << net.arcs.size() << "\n";
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    if (!net.nodes[i].supply.is_zero()) {
      os << "n " << i << " " << net.nodes[i].supply.str() << " " << net.nodes[i].id << "\n";
    }
  }
  for (const auto& a : net.arcs) {
    os << "a " << a.from << " " << a.to << " " << (a.capacity ? a.capacity->str() : std::string("free")) << " "
       << a.unit_cost.str() << "\n";
  }
  return os.str();
}

}  // namespace laxconf
