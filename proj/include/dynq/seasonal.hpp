#pragma once

#include <vector>

#include "dynq/dynsim.hpp"
#include "dynq/equilib.hpp"
#include "dynq/netcore.hpp"
#include "dynq/types.hpp"

namespace dynq::seasonal {

// Rate implied by a periodic inflow; CapacityMismatch when the total is not a
// multiple of the period.
long long implied_rate(const dynsim::InflowProfile& inflow);

// One elementary operation per over-rate slot: move one departure to the next
// slot (cyclically).
std::vector<std::vector<long long>> elementary_successors(const std::vector<long long>& values,
                                                          long long gamma);

struct DistanceLimits {
  long long max_states = 1'000'000;
};
// Fewest elementary operations from `values` to the uniform vector;
// breadth-first search over inflow vectors.
long long distance_to_uniform(const std::vector<long long>& values, long long gamma,
                              const DistanceLimits& limits = {});
// Convenience: also returns one shortest operation sequence (list of vectors
// from the start to uniform).
std::pair<long long, std::vector<std::vector<long long>>> distance_with_path(
    const std::vector<long long>& values, long long gamma, const DistanceLimits& limits = {});

// Per-period totals for parallel networks under periodic inflow at capacity.
Rat seasonal_parallel_opt(const netcore::Network& net, const dynsim::InflowProfile& inflow);
Rat seasonal_parallel_weq(const netcore::Network& net, const dynsim::InflowProfile& inflow);

// Planner schedule achieving the seasonal optimum on parallel networks:
// players are dealt round-robin into virtual capacity slots, cheapest edges
// first, postponing exactly the over-capacity tail of each burst.
dynsim::StrategyProfile planner_profile(const netcore::Network& net,
                                        const dynsim::InflowProfile& inflow, Stage horizon);

// Experimental probe: simulated worst-equilibrium per-period cost against the
// K-scaled uniform worst equilibrium, reported next to the distance. No
// pass/fail semantics.
struct GapReport {
  Rat periodic_cost{0};  // simulated worst per-period total
  Rat uniform_cost{0};   // K * uniform worst per-stage total
  Rat gap{0};
  long long distance = -1;  // D, when defined for the instance
  std::string source;
};
GapReport seasonality_gap(const netcore::Network& net, const dynsim::InflowProfile& inflow,
                          const equilib::EqOptions& opts = {});

}  // namespace dynq::seasonal
