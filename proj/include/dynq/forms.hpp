#pragma once

#include <vector>

#include "dynq/netcore.hpp"
#include "dynq/types.hpp"

namespace dynq::forms {

// Edges of a parallel network in cost order (transit, declared position),
// with the boundary edge absorbing the residual inflow.
struct ParallelProfile {
  std::vector<int> order;      // edge indices, cheapest first
  size_t boundary_pos = 0;     // position of f_delta within `order`
  long long residual = 0;      // delta minus the capacity ahead of f_delta
  long long delta = 0;
  int boundary_edge() const { return order[boundary_pos]; }
};

ParallelProfile parallel_profile(const netcore::Network& net, long long delta);

// Closed forms for parallel networks under uniform inflow.
Rat parallel_opt(const netcore::Network& net, long long delta);
Rat parallel_weq(const netcore::Network& net, long long delta);

// Queue build-up schedule of the worst equilibrium at capacity: thresholds
// T_j where edge j+1 starts being used, their floors, and the within-stage
// offsets alpha_j.
struct TransientSchedule {
  std::vector<Rat> thresholds;    // T_1 .. T_{n-1}
  std::vector<long long> floors;  // floor(T_j)
  std::vector<Rat> offsets;       // alpha_1 .. alpha_{n-1}
};

TransientSchedule transient_schedule(const netcore::Network& net, long long delta);

struct ChainDecomposition {
  std::vector<netcore::Network> modules;  // each a parallel network
  int bottleneck = -1;                    // module index of the minimum cut
  long long bottleneck_capacity = 0;      // gamma of that module
};

// Accepts plain parallel networks as a single-module chain.
ChainDecomposition chain_decomposition(const netcore::Network& net);

// Module-wise sums at the bottleneck inflow.
Rat chain_opt(const netcore::Network& net);
Rat chain_weq(const netcore::Network& net);

}  // namespace dynq::forms
