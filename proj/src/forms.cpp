#include "dynq/forms.hpp"

#include <algorithm>
#include <numeric>

namespace dynq::forms {

namespace {

std::vector<int> cost_order(const netcore::Network& net) {
  std::vector<int> order(net.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return net.edges[(size_t)a].transit < net.edges[(size_t)b].transit;
  });
  return order;
}

void require_parallel(const netcore::Network& net) {
  netcore::require_valid(net);
  for (const auto& e : net.edges)
    if (e.tail != net.source || e.head != net.destination)
      fail(Errc::not_parallel, "network '" + net.name + "' is not parallel");
}

}  // namespace

ParallelProfile parallel_profile(const netcore::Network& net, long long delta) {
  require_parallel(net);
  if (delta < 1) fail(Errc::bad_argument, "inflow must be >= 1");
  ParallelProfile pp;
  pp.order = cost_order(net);
  pp.delta = delta;
  long long before = 0;
  for (size_t i = 0; i < pp.order.size(); ++i) {
    long long cap = net.edges[(size_t)pp.order[i]].capacity;
    if (delta <= before + cap) {
      pp.boundary_pos = i;
      pp.residual = delta - before;
      return pp;
    }
    before += cap;
  }
  fail(Errc::infeasible_demand,
       "inflow " + std::to_string(delta) + " exceeds parallel capacity " + std::to_string(before));
}

Rat parallel_opt(const netcore::Network& net, long long delta) {
  ParallelProfile pp = parallel_profile(net, delta);
  long long total = 0;
  for (size_t i = 0; i < pp.boundary_pos; ++i) {
    const auto& e = net.edges[(size_t)pp.order[i]];
    total = checked_add(total, checked_mul(e.capacity, e.transit));
  }
  total = checked_add(total,
                      checked_mul(pp.residual, net.edges[(size_t)pp.boundary_edge()].transit));
  return Rat(total);
}

Rat parallel_weq(const netcore::Network& net, long long delta) {
  ParallelProfile pp = parallel_profile(net, delta);
  return Rat(checked_mul(delta, net.edges[(size_t)pp.boundary_edge()].transit));
}

TransientSchedule transient_schedule(const netcore::Network& net, long long delta) {
  require_parallel(net);
  if (net.edges.size() < 2) fail(Errc::bad_argument, "need at least two parallel edges");
  long long total_cap = 0;
  for (const auto& e : net.edges) total_cap += e.capacity;
  if (delta != total_cap)
    fail(Errc::not_at_capacity, "schedule defined only at full capacity (inflow " +
                                    std::to_string(delta) + ", capacity " +
                                    std::to_string(total_cap) + ")");

  auto order = cost_order(net);
  size_t n = order.size();
  auto tau = [&](size_t j) { return net.edges[(size_t)order[j]].transit; };   // 0-based
  auto gamma = [&](size_t j) { return net.edges[(size_t)order[j]].capacity; };

  TransientSchedule ts;
  Rat running{0};
  long long prefix_cap = 0;
  for (size_t k = 0; k + 1 < n; ++k) {
    prefix_cap += gamma(k);
    running += Rat(prefix_cap, delta - prefix_cap) * Rat(tau(k + 1) - tau(k));
    ts.thresholds.push_back(running);
  }
  for (const auto& t : ts.thresholds)
    ts.floors.push_back(t.numerator() >= 0 ? t.numerator() / t.denominator() : 0);

  // alpha_1 starts the recursion; later offsets subtract the joint queue
  // carried over from the previous threshold.
  prefix_cap = gamma(0);
  Rat prev_T{0};
  Rat prev_alpha{0};
  for (size_t j = 0; j + 1 < n; ++j) {
    if (j > 0) prefix_cap += gamma(j);
    Rat T = ts.thresholds[j];
    Rat floorT{ts.floors[j]};
    Rat alpha;
    if (j == 0) {
      alpha = Rat(delta - prefix_cap) * (T - floorT);
    } else {
      Rat prev_floor{ts.floors[j - 1]};
      Rat carried = Rat(delta - prefix_cap) - prev_alpha;
      if (carried < Rat(0)) carried = Rat(0);
      alpha = Rat(delta - prefix_cap) * (T - floorT + prev_floor + Rat(1) - prev_T) - carried;
    }
    ts.offsets.push_back(alpha);
    prev_T = T;
    prev_alpha = alpha;
  }
  return ts;
}

ChainDecomposition chain_decomposition(const netcore::Network& net) {
  auto topo = netcore::classify(net);
  ChainDecomposition cd;
  if (topo.kind == netcore::Topology::Parallel) {
    netcore::Network module = net;
    cd.modules.push_back(std::move(module));
  } else if (topo.kind == netcore::Topology::ChainOfParallel) {
    const auto& chain = *topo.chain;
    for (size_t h = 0; h + 1 < chain.cut_vertices.size(); ++h) {
      netcore::Network module;
      module.name = net.name + "_m" + std::to_string(h + 1);
      int u = chain.cut_vertices[h];
      int w = chain.cut_vertices[h + 1];
      module.source = module.add_vertex(net.vertices[(size_t)u]);
      module.destination = module.add_vertex(net.vertices[(size_t)w]);
      for (int e : chain.modules[h]) {
        const auto& edge = net.edges[(size_t)e];
        module.add_edge(edge.id, net.vertices[(size_t)edge.tail], net.vertices[(size_t)edge.head],
                        edge.transit, edge.capacity);
      }
      cd.modules.push_back(std::move(module));
    }
  } else {
    fail(Errc::not_chain_of_parallel, "network '" + net.name + "' is not a chain of parallels");
  }

  for (int h = 0; h < (int)cd.modules.size(); ++h) {
    long long cap = 0;
    for (const auto& e : cd.modules[(size_t)h].edges) cap += e.capacity;
    if (cd.bottleneck < 0 || cap < cd.bottleneck_capacity) {
      cd.bottleneck = h;
      cd.bottleneck_capacity = cap;
    }
  }
  return cd;
}

Rat chain_opt(const netcore::Network& net) {
  auto cd = chain_decomposition(net);
  Rat total{0};
  for (const auto& module : cd.modules) total += parallel_opt(module, cd.bottleneck_capacity);
  return total;
}

Rat chain_weq(const netcore::Network& net) {
  auto cd = chain_decomposition(net);
  Rat total{0};
  for (const auto& module : cd.modules) total += parallel_weq(module, cd.bottleneck_capacity);
  return total;
}

}  // namespace dynq::forms
