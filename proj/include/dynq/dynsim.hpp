#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dynq/netcore.hpp"
#include "dynq/types.hpp"

namespace dynq::dynsim {

// Players are (generation, index), both 1-based. The pair ordering is the
// global priority: earlier generation first, then lower index.
struct PlayerId {
  Stage generation = 0;
  long long index = 0;
  friend bool operator<(const PlayerId& a, const PlayerId& b) {
    return a.generation != b.generation ? a.generation < b.generation : a.index < b.index;
  }
  friend bool operator==(const PlayerId& a, const PlayerId& b) {
    return a.generation == b.generation && a.index == b.index;
  }
};

std::string to_string(const PlayerId& p);  // "[2,5]"

class InflowProfile {
 public:
  static InflowProfile uniform(long long delta);
  static InflowProfile periodic(std::vector<long long> values);

  bool is_periodic() const { return periodic_; }
  long long period() const { return (long long)values_.size(); }
  long long at(Stage t) const { return values_[(size_t)((t - 1) % period())]; }
  const std::vector<long long>& values() const { return values_; }
  long long max_rate() const;
  // Average rate; integral only when the period divides the total.
  Rat average() const;

 private:
  std::vector<long long> values_;
  bool periodic_ = false;
};

struct StrategyProfile {
  Stage horizon = 0;
  // routes[t-1][i-1] = route of player [i,t].
  std::vector<std::vector<netcore::Route>> routes;

  const netcore::Route& route_of(const PlayerId& p) const;
  netcore::Route& route_of(const PlayerId& p);
};

// Checks coverage of every generation within the horizon and that routes are
// valid for the network. Throws validation_error.
void validate_profile(const netcore::Network& net, const InflowProfile& inflow,
                      const StrategyProfile& profile);

struct PlayerOutcome {
  long long transit = 0;
  long long waiting = 0;
  long long latency = 0;
  Stage arrival = -1;  // stage the player reached the destination; -1 if cut off
  std::vector<Stage> edge_exits;  // exit stage per route edge = arrival at each vertex
  bool done() const { return arrival >= 0; }
};

struct StageTotals {
  long long transit = 0;
  long long waiting = 0;
  long long latency = 0;
  bool complete = false;  // true when every player of the generation arrived
};

struct Trajectory {
  Stage horizon = 0;     // last generation injected
  Stage last_stage = 0;  // last stage simulated
  std::vector<std::vector<PlayerOutcome>> players;  // [t-1][i-1]
  std::vector<StageTotals> per_stage;               // [t-1], generations 1..horizon

  // Stage-major per-edge counters, rows 1..last_stage.
  std::vector<std::vector<long long>> entries;    // y: players entering edge e at stage t
  std::vector<std::vector<long long>> exits;      // x: players exiting edge e at stage t
  std::vector<std::vector<long long>> queue_len;  // waiting players carried past stage t

  std::map<Stage, std::map<std::string, long long>> route_counts;  // N^r_t by route id
  std::map<int, long long> final_queues;                           // edge -> length at last_stage

  const StageTotals& totals(Stage t) const { return per_stage[(size_t)(t - 1)]; }
  long long queue_after(Stage t, int edge) const {
    return queue_len[(size_t)(t - 1)][(size_t)edge];
  }
  // Serialized queue/transit state after stage t; equal keys mean identical
  // future dynamics for identical future inflows and choices.
  std::vector<long long> state_key(Stage t) const;

  std::vector<std::vector<std::vector<long long>>> transit_hist;  // [t-1][e] = remaining-stage counts

  // Queue visits per edge in insertion order (blockers first). Sorting by
  // (arrival, generation, index) yields the service order.
  struct QueueVisit {
    Stage arrival;
    Stage gen;  // 0 for blockers
    long long idx;
  };
  std::vector<std::vector<QueueVisit>> queue_visits;
};

struct SimOptions {
  std::optional<Stage> cutoff_slack;  // extra stages after the horizon; default derived
  bool record_transit_hist = true;
};

// Ground-truth dynamics for an arbitrary profile: per stage, due players join
// edge queues ordered by (arrival stage, priority); each edge releases at most
// its capacity per stage; a released player enters the next edge immediately
// and may clear further zero-transit edges in the same stage.
Trajectory simulate(const netcore::Network& net, const InflowProfile& inflow,
                    const StrategyProfile& profile, Stage horizon, const SimOptions& opts = {});

struct AverageLatency {
  Stage window_end = 0;
  Rat value{0};
};
// Exact mean of the per-stage totals over [first, last]; IncompleteWindow when
// a stage in the window has players that never arrived.
AverageLatency average_latency(const Trajectory& traj, Stage first, Stage last);

// Replaces every capacity-g edge (g > 1) by g parallel unit edges of equal
// transit. Returns the new network and old-edge -> new-edges mapping.
std::pair<netcore::Network, std::map<int, std::vector<int>>> split_capacities(
    const netcore::Network& net);

// Image of a profile on the split network: players are dealt to the parallel
// copies of each split edge round-robin in queue-service order (blockers
// first), which preserves every player's latency.
StrategyProfile map_profile_to_split(const netcore::Network& net, const InflowProfile& inflow,
                                     const StrategyProfile& profile, Stage horizon,
                                     const netcore::Network& split_net,
                                     const std::map<int, std::vector<int>>& edge_map);

// Profile text format: lines "assign <t> <i> <edge>[,<edge>...]".
StrategyProfile parse_profile(std::istream& in, const netcore::Network& net,
                              const std::string& filename = "<input>");
std::string emit_profile(const netcore::Network& net, const StrategyProfile& profile);

// CSV rows for complete stages: stage,c_t,w_t,l_t,avg_to_date
std::string trajectory_csv(const Trajectory& traj);

}  // namespace dynq::dynsim
