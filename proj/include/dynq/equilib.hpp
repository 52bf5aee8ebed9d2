#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dynq/dynsim.hpp"
#include "dynq/netcore.hpp"
#include "dynq/types.hpp"

namespace dynq::equilib {

struct TieBreakPolicy {
  enum Kind { BestCase, WorstCase, Explicit } kind = WorstCase;
  std::vector<netcore::Route> preference;  // Explicit: every route exactly once
  std::string name;

  static TieBreakPolicy best() { return {BestCase, {}, "best"}; }
  static TieBreakPolicy worst() { return {WorstCase, {}, "worst"}; }
  static TieBreakPolicy explicit_order(std::vector<netcore::Route> routes,
                                       std::string name = "explicit") {
    return {Explicit, std::move(routes), std::move(name)};
  }
};

// Fixed traffic of already-placed players, one event list per edge in queue
// order. Supports the query the greedy construction needs: the exit stage of
// a lowest-priority arrival. Soundness rests on placed players being
// uniformly-fastest:
// a new lowest-priority player then never arrives at any queue ahead of an
// existing event, so insertion is an append and perturbs nobody.
class TrafficState {
 public:
  explicit TrafficState(const netcore::Network& net);

  // Exit stage for a lowest-priority player whose queue arrival is `a`.
  Stage exit_for_arrival(int edge, Stage a) const;
  void append(int edge, Stage arrival, Stage exit);

  // Queue/transit occupancy after stage t, a sufficient state for all future
  // dynamics: per edge the waiting count plus in-transit arrivals per
  // remaining stage.
  std::vector<long long> snapshot(Stage t) const;
  long long max_waiting() const;  // max queue length ever seen (for diagnostics)

 private:
  const netcore::Network* net_;
  struct EdgeEvents {
    std::vector<Stage> arrival;  // non-decreasing
    std::vector<Stage> exit;     // non-decreasing (no overtaking)
  };
  std::vector<EdgeEvents> events_;
};

struct EarliestArrivalTable {
  // vertex -> earliest reachable stage plus the witness edge prefix
  std::map<int, std::pair<Stage, std::vector<int>>> entries;
};

struct GreedyResult {
  dynsim::StrategyProfile profile;
  std::vector<std::vector<dynsim::PlayerOutcome>> outcomes;  // [t-1][i-1]
  std::vector<long long> stage_latency;                      // total per generation
  std::vector<EarliestArrivalTable> tables;                  // optional, player order
};

struct GreedyOptions {
  bool record_tables = false;
};

// Places players one at a time in priority order, each on a route reaching
// every vertex of the route as early as the traffic allows; the policy picks
// among the eligible routes.
GreedyResult greedy_ufr(const netcore::Network& net, const dynsim::InflowProfile& inflow,
                        const TieBreakPolicy& policy, Stage horizon,
                        const GreedyOptions& opts = {});

struct NashVerdict {
  bool pass = true;
  dynsim::PlayerId player;
  netcore::Route better_route;
  long long gain = 0;
};

struct UfrVerdict {
  bool pass = true;
  bool nash_pass = true;
  dynsim::PlayerId player;
  int vertex = -1;
  Stage achievable = -1;
  Stage actual = -1;
  NashVerdict nash;
};

struct VerifyOptions {
  std::optional<Stage> check_window_end;  // default: horizon minus an auto margin
  netcore::RouteLimits route_limits;
};

NashVerdict verify_nash(const netcore::Network& net, const dynsim::InflowProfile& inflow,
                        const dynsim::StrategyProfile& profile, Stage horizon,
                        const VerifyOptions& opts = {});
UfrVerdict verify_ufr(const netcore::Network& net, const dynsim::InflowProfile& inflow,
                      const dynsim::StrategyProfile& profile, Stage horizon,
                      const VerifyOptions& opts = {});

struct SteadyState {
  Stage onset = 0;
  Stage period = 1;
  std::vector<long long> cycle_latencies;  // per stage over one period
  Rat cycle_average{0};
  Rat per_period_total() const { return cycle_average * Rat((long long)cycle_latencies.size()); }
};

// Runs the greedy incrementally and hashes (queue/transit state, inflow
// phase) at stage boundaries; the first repeat closes the cycle.
SteadyState detect_steady_state(const netcore::Network& net, const dynsim::InflowProfile& inflow,
                                const TieBreakPolicy& policy, Stage max_horizon);

// An explicit strategy profile entered into the equilibrium-value search; it
// only counts after passing the Nash and uniformly-fastest checks.
struct ProfileCandidate {
  std::string name;
  std::function<dynsim::StrategyProfile(Stage horizon)> make;
  Stage profile_period = 1;  // eventual period of the route assignment
  Stage min_onset = 1;       // stage from which it is periodic
  Stage eval_horizon = 60;
};

struct EqOptions {
  Stage max_horizon = 600;
  std::vector<TieBreakPolicy> policies;      // extra greedy policies to try
  std::vector<ProfileCandidate> candidates;  // explicit profiles to try
  bool verify_candidates = true;
  // When false the built-in WorstCase/BestCase greedy is skipped and only the
  // registered policies/candidates compete (used by pipelines that pin the
  // search to a fixed reference construction).
  bool include_default_policy = true;
};

struct EqValue {
  Rat value{0};
  std::string source;  // which policy/candidate achieved it
  SteadyState steady;
};

// Worst equilibrium value over the search set (WorstCase greedy plus any
// registered policies/candidates); a lower bound on the true supremum.
EqValue weq(const netcore::Network& net, const dynsim::InflowProfile& inflow,
            const EqOptions& opts = {});
// Best equilibrium value over the search set; an upper bound on the infimum.
EqValue beq(const netcore::Network& net, const dynsim::InflowProfile& inflow,
            const EqOptions& opts = {});

// Steady value of one explicit profile (verified when requested); used by the
// value search and by the paradox probes.
std::optional<EqValue> evaluate_candidate(const netcore::Network& net,
                                          const dynsim::InflowProfile& inflow,
                                          const ProfileCandidate& cand, bool verify);

}  // namespace dynq::equilib
