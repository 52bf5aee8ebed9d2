#include "dynq/seasonal.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "dynq/forms.hpp"

namespace dynq::seasonal {

long long implied_rate(const dynsim::InflowProfile& inflow) {
  long long total = 0;
  for (long long v : inflow.values()) total = checked_add(total, v);
  long long k = inflow.period();
  if (total % k != 0)
    fail(Errc::capacity_mismatch,
         "periodic inflow total " + std::to_string(total) + " is not a multiple of K=" +
             std::to_string(k));
  return total / k;
}

std::vector<std::vector<long long>> elementary_successors(const std::vector<long long>& values,
                                                          long long gamma) {
  std::vector<std::vector<long long>> out;
  size_t k = values.size();
  for (size_t t = 0; t < k; ++t) {
    if (values[t] <= gamma) continue;
    auto next = values;
    next[t] -= 1;
    next[(t + 1) % k] += 1;
    out.push_back(std::move(next));
  }
  return out;
}

std::pair<long long, std::vector<std::vector<long long>>> distance_with_path(
    const std::vector<long long>& values, long long gamma, const DistanceLimits& limits) {
  std::vector<long long> uniform(values.size(), gamma);
  long long total = std::accumulate(values.begin(), values.end(), 0LL);
  if (total != gamma * (long long)values.size())
    fail(Errc::capacity_mismatch, "inflow total must equal gamma * K");

  std::map<std::vector<long long>, std::vector<long long>> parent;  // state -> predecessor
  std::deque<std::vector<long long>> frontier{values};
  std::map<std::vector<long long>, long long> dist{{values, 0}};
  while (!frontier.empty()) {
    auto cur = frontier.front();
    frontier.pop_front();
    if (cur == uniform) {
      std::vector<std::vector<long long>> path{cur};
      while (path.back() != values) path.push_back(parent.at(path.back()));
      std::reverse(path.begin(), path.end());
      return {dist[cur], std::move(path)};
    }
    for (auto& next : elementary_successors(cur, gamma)) {
      if (dist.count(next)) continue;
      dist[next] = dist[cur] + 1;
      parent[next] = cur;
      if ((long long)dist.size() > limits.max_states)
        fail(Errc::state_explosion,
             "more than " + std::to_string(limits.max_states) + " inflow states visited");
      frontier.push_back(std::move(next));
    }
  }
  // Unreachable: every non-uniform vector has a successor and the operation
  // count to uniform is finite.
  fail(Errc::state_explosion, "uniform vector unreachable (internal)");
}

long long distance_to_uniform(const std::vector<long long>& values, long long gamma,
                              const DistanceLimits& limits) {
  return distance_with_path(values, gamma, limits).first;
}

namespace {

long long parallel_capacity(const netcore::Network& net) {
  long long cap = 0;
  for (const auto& e : net.edges) cap = checked_add(cap, e.capacity);
  return cap;
}

void require_at_capacity(const netcore::Network& net, const dynsim::InflowProfile& inflow,
                         long long* gamma_out, long long* dist_out) {
  if (!inflow.is_periodic()) fail(Errc::bad_argument, "seasonal analysis needs a periodic inflow");
  netcore::require_valid(net);
  for (const auto& e : net.edges)
    if (e.tail != net.source || e.head != net.destination)
      fail(Errc::not_parallel, "network '" + net.name + "' is not parallel");
  long long gamma = implied_rate(inflow);
  if (gamma != parallel_capacity(net))
    fail(Errc::capacity_mismatch, "implied rate " + std::to_string(gamma) +
                                      " differs from network capacity " +
                                      std::to_string(parallel_capacity(net)));
  *gamma_out = gamma;
  *dist_out = distance_to_uniform(inflow.values(), gamma);
}

}  // namespace

Rat seasonal_parallel_opt(const netcore::Network& net, const dynsim::InflowProfile& inflow) {
  long long gamma = 0, d = 0;
  require_at_capacity(net, inflow, &gamma, &d);
  long long per_stage = 0;
  for (const auto& e : net.edges)
    per_stage = checked_add(per_stage, checked_mul(e.capacity, e.transit));
  return Rat(checked_add(checked_mul(inflow.period(), per_stage), d));
}

Rat seasonal_parallel_weq(const netcore::Network& net, const dynsim::InflowProfile& inflow) {
  long long gamma = 0, d = 0;
  require_at_capacity(net, inflow, &gamma, &d);
  long long tau_max = 0;
  for (const auto& e : net.edges) tau_max = std::max(tau_max, e.transit);
  return Rat(checked_add(checked_mul(inflow.period(), checked_mul(gamma, tau_max)), d));
}

dynsim::StrategyProfile planner_profile(const netcore::Network& net,
                                        const dynsim::InflowProfile& inflow, Stage horizon) {
  forms::parallel_profile(net, 1);  // parallel + valid
  auto order = [&] {
    std::vector<int> o(net.edges.size());
    std::iota(o.begin(), o.end(), 0);
    std::stable_sort(o.begin(), o.end(), [&](int a, int b) {
      return net.edges[(size_t)a].transit < net.edges[(size_t)b].transit;
    });
    return o;
  }();

  dynsim::StrategyProfile profile;
  profile.horizon = horizon;
  profile.routes.resize((size_t)horizon);

  // Virtual capacity slots: slot v holds gamma players, cheapest edges first.
  // A burst beyond the current slot spills into later slots, which is exactly
  // the postponement that turns the inflow uniform.
  Stage slot = 1;
  size_t slot_edge = 0;      // position within `order`
  long long slot_used = 0;   // players already dealt to order[slot_edge] in this slot
  for (Stage t = 1; t <= horizon; ++t) {
    if (slot < t) {
      slot = t;
      slot_edge = 0;
      slot_used = 0;
    }
    long long delta = inflow.at(t);
    for (long long i = 1; i <= delta; ++i) {
      int e = order[slot_edge];
      profile.routes[(size_t)(t - 1)].push_back(netcore::Route{{e}});
      if (++slot_used == net.edges[(size_t)e].capacity) {
        slot_used = 0;
        if (++slot_edge == order.size()) {
          slot_edge = 0;
          ++slot;
        }
      }
    }
  }
  return profile;
}

GapReport seasonality_gap(const netcore::Network& net, const dynsim::InflowProfile& inflow,
                          const equilib::EqOptions& opts) {
  if (!inflow.is_periodic()) fail(Errc::bad_argument, "seasonality gap needs a periodic inflow");
  long long k = inflow.period();
  long long gamma = implied_rate(inflow);

  GapReport report;
  auto cut = netcore::min_cut(net);
  if (gamma == cut.capacity) {
    // the distance is defined against uniform departures at capacity
    report.distance = distance_to_uniform(inflow.values(), gamma);
  }

  equilib::EqValue periodic = equilib::weq(net, inflow, opts);
  equilib::EqValue uniform = equilib::weq(net, dynsim::InflowProfile::uniform(gamma), opts);
  report.periodic_cost = periodic.value * Rat(k);
  report.uniform_cost = uniform.value * Rat(k);
  report.gap = report.periodic_cost - report.uniform_cost;
  report.source = periodic.source;
  return report;
}

}  // namespace dynq::seasonal
