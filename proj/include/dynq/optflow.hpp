#pragma once

#include <map>
#include <vector>

#include "dynq/dynsim.hpp"
#include "dynq/netcore.hpp"
#include "dynq/types.hpp"

namespace dynq::optflow {

struct StaticFlow {
  std::map<int, long long> edge_flow;                       // edge index -> flow
  std::vector<std::pair<netcore::Route, long long>> route_flow;  // decomposition
  long long value = 0;
  long long cost = 0;
};

// Minimum-transit-cost integral flow of the given value. Deterministic:
// successive shortest paths, ties broken by declared edge order.
// InfeasibleDemand when value exceeds the min-cut capacity.
StaticFlow min_cost_flow(const netcore::Network& net, long long value);

// Per-stage optimal total latency (the static min-cost value).
Rat opt_value(const netcore::Network& net, long long value);

// Repeats the min-cost route assignment every stage: route r carries
// F*_r players, dealt to players in priority order.
dynsim::StrategyProfile opt_strategy(const netcore::Network& net, long long value, Stage horizon);

struct RateAudit {
  struct EdgeRate {
    int edge;
    Rat entry_avg;   // running average of entries over the window
    Rat exit_avg;
    long long capacity;
    bool over_capacity;  // sustained entry rate above capacity
  };
  std::vector<EdgeRate> cut_edges;
  bool any_flag = false;
};

// Running entry/exit averages for the cut edges of a finished trajectory;
// flags sustained over-capacity inflow (the divergence regime).
RateAudit rate_audit(const dynsim::Trajectory& traj, const netcore::Network& net,
                     const netcore::CutResult& cut);

}  // namespace dynq::optflow
