#include "dynq/equilib.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace dynq::equilib {

namespace {
constexpr Stage kInf = std::numeric_limits<Stage>::max() / 4;
}

TrafficState::TrafficState(const netcore::Network& net) : net_(&net), events_(net.edges.size()) {
  // Initial queues are anonymous blockers seeded at stage 0, ahead of every
  // real player; service begins at stage 1 and a released blocker vanishes.
  for (const auto& [e, len] : net.initial_queues) {
    for (long long j = 0; j < len; ++j) {
      Stage exit = 1 + j / net.edges[(size_t)e].capacity;
      append(e, 0, exit);
    }
  }
}

Stage TrafficState::exit_for_arrival(int edge, Stage a) const {
  const auto& ev = events_[(size_t)edge];
  long long cap = net_->edges[(size_t)edge].capacity;
  auto it = std::upper_bound(ev.arrival.begin(), ev.arrival.end(), a);
  long long ahead = it - ev.arrival.begin();
  if (ahead < cap) return a;
  // Exits never decrease along the queue, so the cap-th largest exit among
  // the ahead players sits at a fixed offset.
  Stage blocking = ev.exit[(size_t)(ahead - cap)];
  return std::max(a, blocking + 1);
}

void TrafficState::append(int edge, Stage arrival, Stage exit) {
  auto& ev = events_[(size_t)edge];
  if (!ev.arrival.empty() && (arrival < ev.arrival.back() || exit < ev.exit.back()))
    fail(Errc::validation_error, "traffic insertion would overtake (internal)");
  ev.arrival.push_back(arrival);
  ev.exit.push_back(exit);
}

std::vector<long long> TrafficState::snapshot(Stage t) const {
  std::vector<long long> key;
  for (size_t e = 0; e < events_.size(); ++e) {
    const auto& ev = events_[e];
    auto arr_it = std::upper_bound(ev.arrival.begin(), ev.arrival.end(), t);
    long long arrived = arr_it - ev.arrival.begin();
    auto exit_it = std::upper_bound(ev.exit.begin(), ev.exit.end(), t);
    long long exited = exit_it - ev.exit.begin();
    key.push_back(arrived - exited);  // waiting past stage t
    // in-transit players due at t+1 .. t+tau
    for (Stage k = 1; k <= net_->edges[e].transit; ++k) {
      auto lo = std::lower_bound(ev.arrival.begin(), ev.arrival.end(), t + k);
      auto hi = std::upper_bound(ev.arrival.begin(), ev.arrival.end(), t + k);
      key.push_back(hi - lo);
    }
  }
  return key;
}

long long TrafficState::max_waiting() const {
  long long best = 0;
  for (const auto& ev : events_)
    for (size_t i = 0; i < ev.arrival.size(); ++i)
      best = std::max(best, ev.exit[i] - ev.arrival[i]);
  return best;
}

namespace {

struct Labels {
  std::vector<Stage> dist;         // earliest arrival per vertex
  std::vector<int> parent_edge;    // witness tree
  std::vector<bool> viable;        // can reach d along tight edges
};

Labels earliest_arrival(const netcore::Network& net, const TrafficState& traffic, Stage depart) {
  int n = (int)net.vertices.size();
  Labels lb;
  lb.dist.assign((size_t)n, kInf);
  lb.parent_edge.assign((size_t)n, -1);
  lb.dist[(size_t)net.source] = depart;

  auto out_of = net.out_edges();
  std::vector<bool> done((size_t)n, false);
  while (true) {
    int u = -1;
    for (int v = 0; v < n; ++v)
      if (!done[(size_t)v] && lb.dist[(size_t)v] < kInf &&
          (u < 0 || lb.dist[(size_t)v] < lb.dist[(size_t)u]))
        u = v;
    if (u < 0) break;
    done[(size_t)u] = true;
    for (int e : out_of[(size_t)u]) {
      const auto& edge = net.edges[(size_t)e];
      Stage exit = traffic.exit_for_arrival(e, lb.dist[(size_t)u] + edge.transit);
      if (exit < lb.dist[(size_t)edge.head]) {
        lb.dist[(size_t)edge.head] = exit;
        lb.parent_edge[(size_t)edge.head] = e;
      }
    }
  }

  // tight-edge viability towards d
  lb.viable.assign((size_t)n, false);
  lb.viable[(size_t)net.destination] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int e = 0; e < (int)net.edges.size(); ++e) {
      const auto& edge = net.edges[(size_t)e];
      if (lb.dist[(size_t)edge.tail] >= kInf) continue;
      if (!lb.viable[(size_t)edge.head] || lb.viable[(size_t)edge.tail]) continue;
      Stage exit = traffic.exit_for_arrival(e, lb.dist[(size_t)edge.tail] + edge.transit);
      if (exit == lb.dist[(size_t)edge.head]) {
        lb.viable[(size_t)edge.tail] = true;
        changed = true;
      }
    }
  }
  return lb;
}

netcore::Route witness_route(const netcore::Network& net, const Labels& lb) {
  netcore::Route r;
  for (int v = net.destination; v != net.source;) {
    int e = lb.parent_edge[(size_t)v];
    if (e < 0) fail(Errc::validation_error, "destination unreachable (internal)");
    r.edges.push_back(e);
    v = net.edges[(size_t)e].tail;
  }
  std::reverse(r.edges.begin(), r.edges.end());
  return r;
}

bool route_is_tight(const netcore::Network& net, const TrafficState& traffic, const Labels& lb,
                    Stage depart, const netcore::Route& r) {
  Stage at = depart;
  int v = net.source;
  for (int e : r.edges) {
    const auto& edge = net.edges[(size_t)e];
    if (edge.tail != v) return false;
    Stage exit = traffic.exit_for_arrival(e, at + edge.transit);
    if (exit != lb.dist[(size_t)edge.head]) return false;
    at = exit;
    v = edge.head;
  }
  return v == net.destination;
}

netcore::Route choose_route(const netcore::Network& net, const TrafficState& traffic,
                            const TieBreakPolicy& policy, const Labels& lb, Stage depart) {
  if (policy.kind == TieBreakPolicy::Explicit) {
    for (const auto& r : policy.preference)
      if (route_is_tight(net, traffic, lb, depart, r)) return r;
    fail(Errc::validation_error, "explicit preference lists no eligible route");
  }

  auto out_of = net.out_edges();
  netcore::Route r;
  std::vector<bool> visited(net.vertices.size(), false);
  int u = net.source;
  visited[(size_t)u] = true;
  while (u != net.destination) {
    // Rank: queue preference per policy (a queued edge is one the player
    // would wait on), then the cost order (transit, declared position) so
    // parallel modules follow the canonical ordering. On parallel ties the
    // cheapest tied edge always carries the most waiting, so WorstCase
    // reduces there to cheapest-first.
    int pick = -1;
    auto rank = [&](int e, bool queued) {
      long long queue_key = policy.kind == TieBreakPolicy::WorstCase ? (queued ? 0 : 1)
                                                                     : (queued ? 1 : 0);
      return std::tuple(queue_key, net.edges[(size_t)e].transit, e);
    };
    std::tuple<long long, long long, int> pick_rank{};
    for (int e : out_of[(size_t)u]) {
      const auto& edge = net.edges[(size_t)e];
      if (visited[(size_t)edge.head] && edge.head != net.destination) continue;
      if (!lb.viable[(size_t)edge.head]) continue;
      Stage arrival = lb.dist[(size_t)u] + edge.transit;
      Stage exit = traffic.exit_for_arrival(e, arrival);
      if (exit != lb.dist[(size_t)edge.head]) continue;  // not tight
      auto key = rank(e, exit > arrival);
      if (pick < 0 || key < pick_rank) {
        pick = e;
        pick_rank = key;
      }
    }
    if (pick < 0) return witness_route(net, lb);  // degenerate tight cycle
    r.edges.push_back(pick);
    u = net.edges[(size_t)pick].head;
    visited[(size_t)u] = true;
  }
  return r;
}

void validate_policy(const netcore::Network& net, const TieBreakPolicy& policy) {
  if (policy.kind != TieBreakPolicy::Explicit) return;
  auto all = netcore::enumerate_routes(net);
  std::set<std::vector<int>> want;
  for (const auto& r : all) want.insert(r.edges);
  std::set<std::vector<int>> have;
  for (const auto& r : policy.preference) {
    if (!want.count(r.edges))
      fail(Errc::bad_argument, "explicit preference lists a non-route");
    if (!have.insert(r.edges).second)
      fail(Errc::bad_argument, "explicit preference repeats a route");
  }
  if (have.size() != want.size())
    fail(Errc::bad_argument, "explicit preference must list every route exactly once");
}

struct GreedyDriver {
  const netcore::Network& net;
  const dynsim::InflowProfile& inflow;
  const TieBreakPolicy& policy;
  TrafficState traffic;
  GreedyResult result;
  bool record_tables;

  GreedyDriver(const netcore::Network& n, const dynsim::InflowProfile& in,
               const TieBreakPolicy& p, bool tables)
      : net(n), inflow(in), policy(p), traffic(n), record_tables(tables) {
    netcore::require_valid(n);
    validate_policy(n, p);
  }

  // Places generation t; returns its total latency.
  long long place_generation(Stage t) {
    long long delta = inflow.at(t);
    result.profile.routes.emplace_back();
    result.outcomes.emplace_back();
    long long total = 0;
    for (long long i = 1; i <= delta; ++i) {
      Labels lb = earliest_arrival(net, traffic, t);
      if (lb.dist[(size_t)net.destination] >= kInf)
        fail(Errc::validation_error, "destination unreachable");
      netcore::Route route = choose_route(net, traffic, policy, lb, t);

      Stage at = t;
      for (int e : route.edges) {
        Stage a = at + net.edges[(size_t)e].transit;
        Stage x = traffic.exit_for_arrival(e, a);
        traffic.append(e, a, x);
        at = x;
      }
      dynsim::PlayerOutcome oc;
      oc.arrival = at;
      oc.latency = at - t;
      oc.transit = netcore::route_transit(net, route);
      oc.waiting = oc.latency - oc.transit;
      total += oc.latency;

      if (record_tables) {
        EarliestArrivalTable table;
        for (int v = 0; v < (int)net.vertices.size(); ++v) {
          if (lb.dist[(size_t)v] >= kInf) continue;
          std::vector<int> prefix;
          for (int w = v; w != net.source;) {
            int e = lb.parent_edge[(size_t)w];
            prefix.push_back(e);
            w = net.edges[(size_t)e].tail;
          }
          std::reverse(prefix.begin(), prefix.end());
          table.entries[v] = {lb.dist[(size_t)v], std::move(prefix)};
        }
        result.tables.push_back(std::move(table));
      }

      result.profile.routes.back().push_back(std::move(route));
      result.outcomes.back().push_back(std::move(oc));
    }
    result.stage_latency.push_back(total);
    result.profile.horizon = t;
    return total;
  }
};

}  // namespace

GreedyResult greedy_ufr(const netcore::Network& net, const dynsim::InflowProfile& inflow,
                        const TieBreakPolicy& policy, Stage horizon, const GreedyOptions& opts) {
  if (horizon < 1) fail(Errc::bad_argument, "horizon must be >= 1");
  if (inflow.is_periodic() && horizon < inflow.period())
    fail(Errc::horizon_too_small, "horizon shorter than the inflow period");
  GreedyDriver driver(net, inflow, policy, opts.record_tables);
  for (Stage t = 1; t <= horizon; ++t) driver.place_generation(t);
  return std::move(driver.result);
}

SteadyState detect_steady_state(const netcore::Network& net, const dynsim::InflowProfile& inflow,
                                const TieBreakPolicy& policy, Stage max_horizon) {
  GreedyDriver driver(net, inflow, policy, false);
  long long period = inflow.period();
  std::map<std::vector<long long>, Stage> seen;
  for (Stage t = 1; t <= max_horizon; ++t) {
    driver.place_generation(t);
    auto key = driver.traffic.snapshot(t);
    key.push_back(t % period);
    auto [it, inserted] = seen.emplace(std::move(key), t);
    if (!inserted) {
      SteadyState ss;
      ss.onset = it->second;
      ss.period = t - it->second;
      long long sum = 0;
      for (Stage s = it->second + 1; s <= t; ++s) {
        ss.cycle_latencies.push_back(driver.result.stage_latency[(size_t)(s - 1)]);
        sum += driver.result.stage_latency[(size_t)(s - 1)];
      }
      ss.cycle_average = Rat(sum, ss.period);
      return ss;
    }
  }
  fail(Errc::no_cycle_within_horizon,
       "no state repeat within " + std::to_string(max_horizon) +
           " stages (max waiting observed " + std::to_string(driver.traffic.max_waiting()) + ")");
}

namespace {

Stage auto_margin(const dynsim::Trajectory& traj, const dynsim::InflowProfile& inflow) {
  long long maxlat = 0;
  for (const auto& gen : traj.players)
    for (const auto& oc : gen)
      if (oc.done()) maxlat = std::max(maxlat, oc.latency);
  return 2 * maxlat + inflow.period() + 2;
}

struct DeviationScan {
  bool nash_pass = true;
  bool ufr_pass = true;
  NashVerdict nash;
  UfrVerdict ufr;
};

DeviationScan scan_deviations(const netcore::Network& net, const dynsim::InflowProfile& inflow,
                              const dynsim::StrategyProfile& profile, Stage horizon,
                              const VerifyOptions& opts, bool need_ufr) {
  dynsim::Trajectory base = dynsim::simulate(net, inflow, profile, horizon);
  Stage margin = auto_margin(base, inflow);
  Stage window_end = opts.check_window_end ? *opts.check_window_end : horizon - margin;
  if (window_end < 1)
    fail(Errc::incomplete_horizon, "horizon too short for the verification window");

  auto routes = netcore::enumerate_routes(net, opts.route_limits);
  DeviationScan out;

  for (Stage t = 1; t <= window_end && (out.nash_pass || out.ufr_pass); ++t) {
    long long delta = inflow.at(t);
    for (long long i = 1; i <= delta; ++i) {
      dynsim::PlayerId pid{t, i};
      const auto& base_oc = base.players[(size_t)(t - 1)][(size_t)(i - 1)];
      if (!base_oc.done()) fail(Errc::incomplete_horizon, "player cut off before arrival");
      const auto& current = profile.route_of(pid);
      auto base_vertices = netcore::route_vertices(net, current);

      for (const auto& alt : routes) {
        if (alt == current) continue;
        dynsim::StrategyProfile deviated = profile;
        deviated.route_of(pid) = alt;
        dynsim::Trajectory devtraj = dynsim::simulate(net, inflow, deviated, horizon);
        const auto& dev_oc = devtraj.players[(size_t)(t - 1)][(size_t)(i - 1)];
        if (!dev_oc.done()) continue;  // deviation never finishes inside the window

        if (out.nash_pass && dev_oc.latency < base_oc.latency) {
          out.nash_pass = false;
          out.nash.pass = false;
          out.nash.player = pid;
          out.nash.better_route = alt;
          out.nash.gain = base_oc.latency - dev_oc.latency;
        }
        if (need_ufr && out.ufr_pass) {
          // compare arrival stages at the vertices shared with her route
          auto alt_vertices = netcore::route_vertices(net, alt);
          for (size_t j = 1; j < alt_vertices.size(); ++j) {
            int v = alt_vertices[j];
            auto pos = std::find(base_vertices.begin(), base_vertices.end(), v);
            if (pos == base_vertices.end()) continue;
            size_t bj = (size_t)(pos - base_vertices.begin());
            if (bj == 0) continue;
            Stage base_arrival = base_oc.edge_exits[bj - 1];
            Stage alt_arrival = dev_oc.edge_exits[j - 1];
            if (alt_arrival < base_arrival) {
              out.ufr_pass = false;
              out.ufr.pass = false;
              out.ufr.player = pid;
              out.ufr.vertex = v;
              out.ufr.achievable = alt_arrival;
              out.ufr.actual = base_arrival;
              break;
            }
          }
        }
        if (!out.nash_pass && (!need_ufr || !out.ufr_pass)) break;
      }
      if (!out.nash_pass && (!need_ufr || !out.ufr_pass)) break;
    }
  }
  return out;
}

}  // namespace

NashVerdict verify_nash(const netcore::Network& net, const dynsim::InflowProfile& inflow,
                        const dynsim::StrategyProfile& profile, Stage horizon,
                        const VerifyOptions& opts) {
  auto scan = scan_deviations(net, inflow, profile, horizon, opts, false);
  return scan.nash;
}

UfrVerdict verify_ufr(const netcore::Network& net, const dynsim::InflowProfile& inflow,
                      const dynsim::StrategyProfile& profile, Stage horizon,
                      const VerifyOptions& opts) {
  auto scan = scan_deviations(net, inflow, profile, horizon, opts, true);
  UfrVerdict v = scan.ufr;
  v.nash_pass = scan.nash_pass;
  v.nash = scan.nash;
  if (!scan.nash_pass) v.pass = false;
  return v;
}

std::optional<EqValue> evaluate_candidate(const netcore::Network& net,
                                          const dynsim::InflowProfile& inflow,
                                          const ProfileCandidate& cand, bool verify) {
  Stage horizon = cand.eval_horizon;
  dynsim::StrategyProfile profile = cand.make(horizon);
  if (verify) {
    UfrVerdict v = verify_ufr(net, inflow, profile, horizon);
    if (!v.pass) return std::nullopt;
  }
  dynsim::Trajectory traj = dynsim::simulate(net, inflow, profile, horizon);

  Stage margin = auto_margin(traj, inflow);
  Stage safe_end = horizon - margin;
  Stage p = cand.profile_period;
  if (p % inflow.period() != 0) p *= inflow.period();
  Stage periods = (safe_end - cand.min_onset) / (2 * p);
  periods = std::min<Stage>(periods, 10);  // anchor the window late
  Stage width = periods * p;
  if (width <= 0)
    fail(Errc::incomplete_horizon, "candidate '" + cand.name + "': horizon too short");
  Stage a = safe_end - 2 * width;

  // the tail must repeat exactly, both in cost and in queue state
  for (Stage k = 0; k < width; ++k) {
    if (traj.totals(a + k + 1).latency != traj.totals(a + width + k + 1).latency)
      fail(Errc::no_cycle_within_horizon, "candidate '" + cand.name + "' not periodic");
  }
  if (traj.state_key(a) != traj.state_key(a + width))
    fail(Errc::no_cycle_within_horizon, "candidate '" + cand.name + "' state not periodic");

  // smallest state period within the confirmed window
  Stage period = width;
  for (Stage q = 1; q < width; ++q) {
    if (q % p != 0) continue;
    bool ok = traj.state_key(a) == traj.state_key(a + q);
    for (Stage k = 0; ok && k < q; ++k)
      ok = traj.totals(a + k + 1).latency == traj.totals(a + q + k + 1).latency;
    if (ok) {
      period = q;
      break;
    }
  }

  EqValue out;
  out.source = cand.name;
  out.steady.onset = a;
  out.steady.period = period;
  long long sum = 0;
  for (Stage k = 1; k <= period; ++k) {
    long long l = traj.totals(a + k).latency;
    out.steady.cycle_latencies.push_back(l);
    sum += l;
  }
  out.steady.cycle_average = Rat(sum, period);
  out.value = out.steady.cycle_average;
  return out;
}

namespace {

EqValue run_search(const netcore::Network& net, const dynsim::InflowProfile& inflow,
                   const EqOptions& opts, bool want_max) {
  std::vector<TieBreakPolicy> policies;
  if (opts.include_default_policy)
    policies.push_back(want_max ? TieBreakPolicy::worst() : TieBreakPolicy::best());
  for (const auto& p : opts.policies) policies.push_back(p);
  if (policies.empty() && opts.candidates.empty())
    fail(Errc::bad_argument, "equilibrium search needs at least one policy or candidate");

  std::optional<EqValue> best;
  auto consider = [&](EqValue v) {
    if (!best || (want_max ? v.value > best->value : v.value < best->value)) best = std::move(v);
  };

  for (const auto& policy : policies) {
    SteadyState ss = detect_steady_state(net, inflow, policy, opts.max_horizon);
    EqValue v;
    v.value = ss.cycle_average;
    v.source = policy.name;
    v.steady = std::move(ss);
    consider(std::move(v));
  }
  for (const auto& cand : opts.candidates) {
    auto v = evaluate_candidate(net, inflow, cand, opts.verify_candidates);
    if (v) consider(std::move(*v));
  }
  return *best;
}

}  // namespace

EqValue weq(const netcore::Network& net, const dynsim::InflowProfile& inflow,
            const EqOptions& opts) {
  return run_search(net, inflow, opts, true);
}

EqValue beq(const netcore::Network& net, const dynsim::InflowProfile& inflow,
            const EqOptions& opts) {
  return run_search(net, inflow, opts, false);
}

}  // namespace dynq::equilib
