#include "dynq/dynsim.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <sstream>

namespace dynq::dynsim {

std::string to_string(const PlayerId& p) {
  return "[" + std::to_string(p.index) + "," + std::to_string(p.generation) + "]";
}

InflowProfile InflowProfile::uniform(long long delta) {
  if (delta < 0) fail(Errc::bad_argument, "inflow rate must be >= 0");
  InflowProfile p;
  p.values_ = {delta};
  p.periodic_ = false;
  return p;
}

InflowProfile InflowProfile::periodic(std::vector<long long> values) {
  if (values.empty()) fail(Errc::bad_argument, "periodic inflow needs K >= 1");
  for (long long v : values)
    if (v < 0) fail(Errc::bad_argument, "inflow rates must be >= 0");
  InflowProfile p;
  p.values_ = std::move(values);
  p.periodic_ = true;
  return p;
}

long long InflowProfile::max_rate() const {
  return *std::max_element(values_.begin(), values_.end());
}

Rat InflowProfile::average() const {
  long long sum = 0;
  for (long long v : values_) sum = checked_add(sum, v);
  return Rat(sum, period());
}

const netcore::Route& StrategyProfile::route_of(const PlayerId& p) const {
  return routes.at((size_t)(p.generation - 1)).at((size_t)(p.index - 1));
}

netcore::Route& StrategyProfile::route_of(const PlayerId& p) {
  return routes.at((size_t)(p.generation - 1)).at((size_t)(p.index - 1));
}

void validate_profile(const netcore::Network& net, const InflowProfile& inflow,
                      const StrategyProfile& profile) {
  if ((Stage)profile.routes.size() < profile.horizon)
    fail(Errc::validation_error, "profile does not cover its horizon");
  for (Stage t = 1; t <= profile.horizon; ++t) {
    long long want = inflow.at(t);
    const auto& gen = profile.routes[(size_t)(t - 1)];
    if ((long long)gen.size() != want)
      fail(Errc::validation_error, "generation " + std::to_string(t) + " has " +
                                       std::to_string(gen.size()) + " routes, inflow is " +
                                       std::to_string(want));
    for (const auto& r : gen) {
      if (r.edges.empty()) fail(Errc::validation_error, "empty route in profile");
      const auto& first = net.edges.at((size_t)r.edges.front());
      if (first.tail != net.source) fail(Errc::validation_error, "route does not start at source");
      int at = first.tail;
      std::vector<bool> seen(net.vertices.size(), false);
      seen[at] = true;
      for (int e : r.edges) {
        if (e < 0 || e >= (int)net.edges.size())
          fail(Errc::validation_error, "route references missing edge");
        if (net.edges[e].tail != at) fail(Errc::validation_error, "route edges do not chain");
        at = net.edges[e].head;
        if (seen[at]) fail(Errc::validation_error, "route revisits a vertex");
        seen[at] = true;
      }
      if (at != net.destination) fail(Errc::validation_error, "route does not end at destination");
    }
  }
}

namespace {

struct QEntry {
  Stage arrival;   // stage the player reached this edge's queue
  Stage gen;       // 0 for blockers
  long long idx;   // seed order for blockers
  int player;      // slot into the player table, -1 for blockers
  friend bool operator<(const QEntry& a, const QEntry& b) {
    if (a.arrival != b.arrival) return a.arrival < b.arrival;
    if (a.gen != b.gen) return a.gen < b.gen;
    return a.idx < b.idx;
  }
};

struct EdgeQueue {
  std::vector<QEntry> entries;
  size_t head = 0;  // entries[0..head) already exited
  long long waiting() const { return (long long)(entries.size() - head); }
  void insert(const QEntry& q) {
    auto it = std::upper_bound(entries.begin() + (long)head, entries.end(), q);
    entries.insert(it, q);
  }
};

struct SimPlayer {
  PlayerId id;
  const netcore::Route* route;
  int pos = 0;  // next edge index within the route to exit
};

// Order for the per-stage relaxation: an edge must release players before any
// zero-transit successor edge does, so same-stage chains are seen by the
// successor's queue before it releases. Cycles of zero-transit edges (legal
// but degenerate) fall back to repeated sweeps.
std::vector<int> stage_processing_order(const netcore::Network& net) {
  int m = (int)net.edges.size();
  std::vector<std::vector<int>> succ(m);
  std::vector<int> indeg(m, 0);
  for (int e = 0; e < m; ++e)
    for (int f = 0; f < m; ++f)
      if (net.edges[f].transit == 0 && net.edges[e].head == net.edges[f].tail && e != f) {
        succ[e].push_back(f);
        ++indeg[f];
      }
  std::vector<int> order;
  std::deque<int> ready;
  for (int e = 0; e < m; ++e)
    if (indeg[e] == 0) ready.push_back(e);
  std::vector<bool> placed(m, false);
  while (!ready.empty()) {
    int e = ready.front();
    ready.pop_front();
    order.push_back(e);
    placed[e] = true;
    for (int f : succ[e])
      if (--indeg[f] == 0) ready.push_back(f);
  }
  for (int e = 0; e < m; ++e)
    if (!placed[e]) order.push_back(e);  // cyclic residue, declared order
  return order;
}

}  // namespace

Trajectory simulate(const netcore::Network& net, const InflowProfile& inflow,
                    const StrategyProfile& profile, Stage horizon, const SimOptions& opts) {
  netcore::require_valid(net);
  if (horizon < 1) fail(Errc::bad_argument, "horizon must be >= 1");
  if (profile.horizon < horizon) fail(Errc::validation_error, "profile shorter than horizon");
  validate_profile(net, inflow, profile);

  int m = (int)net.edges.size();
  const auto order = stage_processing_order(net);

  std::vector<SimPlayer> players;
  std::vector<EdgeQueue> queues(m);
  std::map<Stage, std::vector<std::pair<int, int>>> due;  // stage -> (player slot, edge)

  Trajectory traj;
  traj.horizon = horizon;
  traj.players.resize((size_t)horizon);
  traj.per_stage.resize((size_t)horizon);
  traj.queue_visits.resize((size_t)m);

  auto join_queue = [&](int e, QEntry q) {
    queues[e].insert(q);
    traj.queue_visits[(size_t)e].push_back({q.arrival, q.gen, q.idx});
  };
  for (const auto& [e, len] : net.initial_queues)
    for (long long j = 0; j < len; ++j) join_queue(e, {0, 0, j, -1});

  long long total_transit_all = 0;
  for (const auto& e : net.edges) total_transit_all = checked_add(total_transit_all, e.transit);
  long long total_players = 0;
  for (Stage t = 1; t <= horizon; ++t) total_players += inflow.at(t);
  for (const auto& [e, len] : net.initial_queues) total_players += len;
  Stage slack = opts.cutoff_slack ? *opts.cutoff_slack : total_transit_all + total_players + 8;
  Stage cutoff = horizon + slack;

  std::vector<long long> arrived_of_gen((size_t)horizon, 0);
  long long players_left = 0;
  for (Stage t = 1; t <= horizon; ++t) players_left += inflow.at(t);
  long long blockers_left = 0;
  for (const auto& [e, len] : net.initial_queues) blockers_left += len;

  auto grow_stage_rows = [&](Stage t) {
    while ((Stage)traj.entries.size() < t) {
      traj.entries.emplace_back(m, 0);
      traj.exits.emplace_back(m, 0);
      traj.queue_len.emplace_back(m, 0);
      traj.transit_hist.emplace_back();
    }
  };

  Stage t = 0;
  while ((players_left > 0 || blockers_left > 0) && t < cutoff) {
    ++t;
    grow_stage_rows(t);
    auto& entry_row = traj.entries[(size_t)(t - 1)];
    auto& exit_row = traj.exits[(size_t)(t - 1)];

    // inject the new generation
    if (t <= horizon) {
      long long delta = inflow.at(t);
      traj.players[(size_t)(t - 1)].resize((size_t)delta);
      for (long long i = 1; i <= delta; ++i) {
        int slot = (int)players.size();
        players.push_back({{t, i}, &profile.route_of({t, i}), 0});
        int e0 = players[slot].route->edges[0];
        ++entry_row[e0];
        if (net.edges[e0].transit == 0)
          join_queue(e0, {t, t, i, slot});
        else
          due[t + net.edges[e0].transit].emplace_back(slot, e0);
      }
    }

    // transit arrivals due this stage
    if (auto it = due.find(t); it != due.end()) {
      for (auto [slot, e] : it->second)
        join_queue(e, {t, players[slot].id.generation, players[slot].id.index, slot});
      due.erase(it);
    }

    // release sweep; repeats only when zero-transit cycles feed backwards
    std::vector<long long> released(m, 0);
    bool moved = true;
    while (moved) {
      moved = false;
      for (int e : order) {
        auto& q = queues[e];
        while (released[e] < net.edges[e].capacity && q.head < q.entries.size()) {
          QEntry ent = q.entries[q.head];
          ++q.head;
          ++released[e];
          ++exit_row[e];
          moved = true;
          if (ent.player < 0) {
            --blockers_left;  // blockers vanish on release
            continue;
          }
          SimPlayer& pl = players[ent.player];
          pl.pos++;
          {
            PlayerOutcome& oc =
                traj.players[(size_t)(pl.id.generation - 1)][(size_t)(pl.id.index - 1)];
            oc.edge_exits.push_back(t);
          }
          if (pl.pos == (int)pl.route->edges.size()) {
            PlayerOutcome& oc = traj.players[(size_t)(pl.id.generation - 1)][(size_t)(pl.id.index - 1)];
            oc.arrival = t;
            oc.latency = t - pl.id.generation;
            oc.transit = netcore::route_transit(net, *pl.route);
            oc.waiting = oc.latency - oc.transit;
            ++arrived_of_gen[(size_t)(pl.id.generation - 1)];
            --players_left;
          } else {
            int f = pl.route->edges[pl.pos];
            ++entry_row[f];
            if (net.edges[f].transit == 0)
              join_queue(f, {t, pl.id.generation, pl.id.index, ent.player});
            else
              due[t + net.edges[f].transit].emplace_back(ent.player, f);
          }
        }
      }
    }

    for (int e = 0; e < m; ++e) traj.queue_len[(size_t)(t - 1)][(size_t)e] = queues[e].waiting();
    if (opts.record_transit_hist) {
      auto& hist = traj.transit_hist[(size_t)(t - 1)];
      hist.assign((size_t)m, {});
      for (int e = 0; e < m; ++e) hist[(size_t)e].assign((size_t)net.edges[e].transit, 0);
      for (const auto& [stage, list] : due)
        for (auto [slot, e] : list) {
          (void)slot;
          hist[(size_t)e][(size_t)(stage - t - 1)] += 1;
        }
    }
  }
  traj.last_stage = t;

  // per-stage totals by departure generation
  for (Stage g = 1; g <= horizon; ++g) {
    auto& totals = traj.per_stage[(size_t)(g - 1)];
    const auto& gen = traj.players[(size_t)(g - 1)];
    totals.complete = arrived_of_gen[(size_t)(g - 1)] == (long long)gen.size();
    for (const auto& oc : gen) {
      if (!oc.done()) continue;
      totals.transit += oc.transit;
      totals.waiting += oc.waiting;
      totals.latency += oc.latency;
    }
  }

  // route usage counts come straight from the profile
  for (Stage g = 1; g <= horizon; ++g) {
    auto& row = traj.route_counts[g];
    for (const auto& r : profile.routes[(size_t)(g - 1)]) ++row[netcore::route_id(net, r)];
  }

  for (int e = 0; e < m; ++e) {
    long long len = queues[e].waiting();
    if (len > 0) traj.final_queues[e] = len;
  }
  return traj;
}

std::vector<long long> Trajectory::state_key(Stage t) const {
  std::vector<long long> key;
  const auto& qrow = queue_len.at((size_t)(t - 1));
  const auto& hrow = transit_hist.at((size_t)(t - 1));  // needs record_transit_hist
  for (size_t e = 0; e < qrow.size(); ++e) {
    key.push_back(qrow[e]);
    for (long long c : hrow.at(e)) key.push_back(c);
  }
  return key;
}

AverageLatency average_latency(const Trajectory& traj, Stage first, Stage last) {
  if (first < 1 || last > traj.horizon || first > last)
    fail(Errc::bad_argument, "bad averaging window");
  long long sum = 0;
  for (Stage t = first; t <= last; ++t) {
    const auto& row = traj.totals(t);
    if (!row.complete)
      fail(Errc::incomplete_window,
           "stage " + std::to_string(t) + " has players that never arrived");
    sum = checked_add(sum, row.latency);
  }
  return {last, Rat(sum, last - first + 1)};
}

std::pair<netcore::Network, std::map<int, std::vector<int>>> split_capacities(
    const netcore::Network& net) {
  netcore::Network out;
  out.name = net.name + "_split";
  out.vertices = net.vertices;
  out.source = net.source;
  out.destination = net.destination;
  std::map<int, std::vector<int>> edge_map;
  for (int e = 0; e < (int)net.edges.size(); ++e) {
    const auto& orig = net.edges[e];
    long long q0 = net.initial_queue(e);
    if (orig.capacity == 1) {
      out.edges.push_back(orig);
      if (q0 > 0) out.initial_queues[(int)out.edges.size() - 1] = q0;
      edge_map[e] = {(int)out.edges.size() - 1};
      continue;
    }
    std::vector<int> copies;
    for (long long c = 0; c < orig.capacity; ++c) {
      netcore::Edge copy = orig;
      copy.id = orig.id + "#" + std::to_string(c + 1);
      copy.capacity = 1;
      out.edges.push_back(copy);
      copies.push_back((int)out.edges.size() - 1);
    }
    // blockers are dealt round-robin across the copies, in seed order
    for (long long j = 0; j < q0; ++j) out.initial_queues[copies[(size_t)(j % orig.capacity)]]++;
    edge_map[e] = std::move(copies);
  }
  return {out, edge_map};
}

StrategyProfile map_profile_to_split(const netcore::Network& net, const InflowProfile& inflow,
                                     const StrategyProfile& profile, Stage horizon,
                                     const netcore::Network& split_net,
                                     const std::map<int, std::vector<int>>& edge_map) {
  // A player's copy on a split edge is her cumulative queue-service position
  // modulo the capacity, blockers counted first; service order equals queue
  // order, i.e. visits sorted by (arrival stage, priority).
  Trajectory traj = simulate(net, inflow, profile, horizon);

  std::vector<std::map<std::pair<Stage, long long>, long long>> service(net.edges.size());
  for (size_t e = 0; e < traj.queue_visits.size(); ++e) {
    auto vs = traj.queue_visits[e];
    std::sort(vs.begin(), vs.end(), [](const auto& a, const auto& b) {
      if (a.arrival != b.arrival) return a.arrival < b.arrival;
      if (a.gen != b.gen) return a.gen < b.gen;
      return a.idx < b.idx;
    });
    long long k = 0;
    for (const auto& v : vs) {
      if (v.gen > 0) service[e][{v.gen, v.idx}] = k;
      ++k;  // blockers advance the round-robin too
    }
  }

  StrategyProfile out;
  out.horizon = profile.horizon;
  out.routes.resize(profile.routes.size());
  for (Stage g = 1; g <= profile.horizon; ++g) {
    const auto& gen = profile.routes[(size_t)(g - 1)];
    for (long long i = 1; i <= (long long)gen.size(); ++i) {
      netcore::Route mapped;
      for (int e : gen[(size_t)(i - 1)].edges) {
        const auto& copies = edge_map.at(e);
        if (copies.size() == 1) {
          mapped.edges.push_back(copies[0]);
        } else {
          long long k = service[(size_t)e].at({g, i});
          mapped.edges.push_back(copies[(size_t)(k % (long long)copies.size())]);
        }
      }
      out.routes[(size_t)(g - 1)].push_back(std::move(mapped));
    }
  }
  (void)split_net;
  return out;
}

StrategyProfile parse_profile(std::istream& in, const netcore::Network& net,
                              const std::string& filename) {
  StrategyProfile profile;
  std::string line;
  int lineno = 0;
  auto fail_at = [&](const std::string& msg) {
    fail(Errc::parse_error, filename + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto tokens = netcore::tokenize_line(line);
    if (tokens.empty()) continue;
    if (tokens[0] != "assign" || tokens.size() != 4)
      fail_at("expected 'assign <t> <i> <edge>[,<edge>...]'");
    Stage t = 0;
    long long i = 0;
    try {
      t = std::stoll(tokens[1]);
      i = std::stoll(tokens[2]);
    } catch (...) {
      fail_at("bad player id");
    }
    if (t < 1 || i < 1) fail_at("player ids are 1-based");
    std::vector<std::string> ids;
    std::string cur;
    for (char c : tokens[3]) {
      if (c == ',') {
        ids.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    ids.push_back(cur);
    netcore::Route r;
    try {
      r = netcore::route_from_ids(net, ids);
    } catch (const Error& e) {
      fail_at(e.what());
    }
    if ((Stage)profile.routes.size() < t) profile.routes.resize((size_t)t);
    auto& gen = profile.routes[(size_t)(t - 1)];
    if ((long long)gen.size() < i) gen.resize((size_t)i);
    gen[(size_t)(i - 1)] = std::move(r);
    profile.horizon = std::max(profile.horizon, t);
  }
  return profile;
}

std::string emit_profile(const netcore::Network& net, const StrategyProfile& profile) {
  std::ostringstream out;
  for (Stage t = 1; t <= profile.horizon; ++t) {
    const auto& gen = profile.routes[(size_t)(t - 1)];
    for (long long i = 1; i <= (long long)gen.size(); ++i)
      out << "assign " << t << " " << i << " " << netcore::route_id(net, gen[(size_t)(i - 1)])
          << "\n";
  }
  return out.str();
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "stage,c_t,w_t,l_t,avg_to_date\n";
  long long running = 0;
  for (Stage t = 1; t <= traj.horizon; ++t) {
    const auto& row = traj.totals(t);
    if (!row.complete) break;
    running += row.latency;
    out << t << "," << row.transit << "," << row.waiting << "," << row.latency << ","
        << to_decimal(Rat(running, t)) << "\n";
  }
  return out.str();
}

}  // namespace dynq::dynsim
