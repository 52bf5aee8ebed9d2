#include "dynq/optflow.hpp"

#include <algorithm>
#include <limits>

namespace dynq::optflow {

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

struct Arc {
  int to;
  long long cap;
  long long cost;
  int edge;  // original edge index for forward arcs, -1 for reverse
};

struct McfGraph {
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> adj;

  explicit McfGraph(const netcore::Network& net) : adj(net.vertices.size()) {
    for (int i = 0; i < (int)net.edges.size(); ++i) {
      const auto& e = net.edges[i];
      adj[e.tail].push_back((int)arcs.size());
      arcs.push_back({e.head, e.capacity, e.transit, i});
      adj[e.head].push_back((int)arcs.size());
      arcs.push_back({e.tail, 0, -e.transit, -1});
    }
  }
};

}  // namespace

StaticFlow min_cost_flow(const netcore::Network& net, long long value) {
  netcore::require_valid(net);
  if (value < 0) fail(Errc::bad_argument, "flow value must be >= 0");
  auto cut = netcore::min_cut(net);
  if (value > cut.capacity)
    fail(Errc::infeasible_demand, "demand " + std::to_string(value) +
                                      " exceeds network capacity " + std::to_string(cut.capacity));

  McfGraph g(net);
  int n = (int)net.vertices.size();
  std::vector<long long> potential(n, 0);  // costs are non-negative, so start at 0
  long long remaining = value;

  while (remaining > 0) {
    // Dijkstra on reduced costs; deterministic by (distance, vertex index)
    // with arcs scanned in insertion order, which follows declared edge order.
    std::vector<long long> dist(n, kInf);
    std::vector<int> parent_arc(n, -1);
    std::vector<bool> done(n, false);
    dist[net.source] = 0;
    while (true) {
      int u = -1;
      for (int v = 0; v < n; ++v)
        if (!done[v] && dist[v] < kInf && (u < 0 || dist[v] < dist[u])) u = v;
      if (u < 0) break;
      done[u] = true;
      for (int a : g.adj[u]) {
        const Arc& arc = g.arcs[a];
        if (arc.cap <= 0) continue;
        long long nd = dist[u] + arc.cost + potential[u] - potential[arc.to];
        if (nd < dist[arc.to]) {
          dist[arc.to] = nd;
          parent_arc[arc.to] = a;
        }
      }
    }
    if (dist[net.destination] >= kInf)
      fail(Errc::infeasible_demand, "residual network disconnected (internal)");
    for (int v = 0; v < n; ++v)
      if (dist[v] < kInf) potential[v] += dist[v];

    long long push = remaining;
    for (int v = net.destination; v != net.source;) {
      const Arc& arc = g.arcs[parent_arc[v]];
      push = std::min(push, arc.cap);
      v = g.arcs[parent_arc[v] ^ 1].to;
    }
    for (int v = net.destination; v != net.source;) {
      int a = parent_arc[v];
      g.arcs[a].cap -= push;
      g.arcs[a ^ 1].cap += push;
      v = g.arcs[a ^ 1].to;
    }
    remaining -= push;
  }

  StaticFlow flow;
  flow.value = value;
  std::map<int, long long> residual_flow;
  for (int a = 0; a < (int)g.arcs.size(); a += 2) {
    long long f = g.arcs[a ^ 1].cap;  // reverse capacity = pushed flow
    if (f > 0) residual_flow[g.arcs[a].edge] = f;
  }

  // Decompose into simple routes, cheapest-first with edge-order ties; any
  // leftover circulation is cost-free and dropped.
  auto out_of = net.out_edges();
  std::map<int, long long> remaining_flow = residual_flow;
  long long to_route = value;
  while (to_route > 0) {
    // shortest path by transit within the flow support
    std::vector<long long> dist(n, kInf);
    std::vector<int> parent(n, -1);
    std::vector<bool> done(n, false);
    dist[net.source] = 0;
    while (true) {
      int u = -1;
      for (int v = 0; v < n; ++v)
        if (!done[v] && dist[v] < kInf && (u < 0 || dist[v] < dist[u])) u = v;
      if (u < 0) break;
      done[u] = true;
      for (int e : out_of[u]) {
        auto it = remaining_flow.find(e);
        if (it == remaining_flow.end() || it->second <= 0) continue;
        long long nd = dist[u] + net.edges[e].transit;
        if (nd < dist[net.edges[e].head]) {
          dist[net.edges[e].head] = nd;
          parent[net.edges[e].head] = e;
        }
      }
    }
    if (dist[net.destination] >= kInf)
      fail(Errc::infeasible_demand, "flow decomposition failed (internal)");
    netcore::Route route;
    long long amount = to_route;
    for (int v = net.destination; v != net.source;) {
      int e = parent[v];
      route.edges.push_back(e);
      amount = std::min(amount, remaining_flow[e]);
      v = net.edges[e].tail;
    }
    std::reverse(route.edges.begin(), route.edges.end());
    for (int e : route.edges) remaining_flow[e] -= amount;
    flow.route_flow.emplace_back(std::move(route), amount);
    to_route -= amount;
  }

  // Rebuild edge flows from the decomposition so both views agree even when a
  // zero-cost circulation was dropped.
  for (const auto& [route, amount] : flow.route_flow) {
    for (int e : route.edges) flow.edge_flow[e] += amount;
    flow.cost = checked_add(flow.cost, checked_mul(netcore::route_transit(net, route), amount));
  }
  return flow;
}

Rat opt_value(const netcore::Network& net, long long value) {
  return Rat(min_cost_flow(net, value).cost);
}

dynsim::StrategyProfile opt_strategy(const netcore::Network& net, long long value, Stage horizon) {
  if (horizon < 1) fail(Errc::bad_argument, "horizon must be >= 1");
  StaticFlow flow = min_cost_flow(net, value);
  std::vector<netcore::Route> deal;
  for (const auto& [route, amount] : flow.route_flow)
    for (long long k = 0; k < amount; ++k) deal.push_back(route);

  dynsim::StrategyProfile profile;
  profile.horizon = horizon;
  profile.routes.assign((size_t)horizon, deal);
  return profile;
}

RateAudit rate_audit(const dynsim::Trajectory& traj, const netcore::Network& net,
                     const netcore::CutResult& cut) {
  RateAudit audit;
  Stage window = std::min(traj.horizon, traj.last_stage);  // the inflow window
  if (window < 1) return audit;
  for (int e : cut.cut_edges) {
    long long entries = 0, exits = 0;
    for (Stage t = 1; t <= window; ++t) {
      entries += traj.entries[(size_t)(t - 1)][(size_t)e];
      exits += traj.exits[(size_t)(t - 1)][(size_t)e];
    }
    // sustained = the later half of the window still averages above capacity
    Stage half = window / 2 + 1;
    long long tail_entries = 0;
    for (Stage t = half; t <= window; ++t) tail_entries += traj.entries[(size_t)(t - 1)][(size_t)e];
    bool over = Rat(tail_entries, window - half + 1) > Rat(net.edges[e].capacity);
    audit.cut_edges.push_back(
        {e, Rat(entries, window), Rat(exits, window), net.edges[e].capacity, over});
    if (over) audit.any_flag = true;
  }
  return audit;
}

}  // namespace dynq::optflow
