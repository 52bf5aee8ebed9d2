#include "dynq/metrics.hpp"

#include <algorithm>
#include <functional>

#include "dynq/optflow.hpp"

namespace dynq::metrics {

namespace {

long long heavy_traffic_rate(const netcore::Network& net) {
  return netcore::min_cut(net).capacity;
}

}  // namespace

Rat poa(const netcore::Network& net, const equilib::EqOptions& opts) {
  long long gamma = heavy_traffic_rate(net);
  Rat worst = equilib::weq(net, dynsim::InflowProfile::uniform(gamma), opts).value;
  Rat best_cost = optflow::opt_value(net, gamma);
  return worst / best_cost;
}

Rat pos(const netcore::Network& net, const equilib::EqOptions& opts) {
  long long gamma = heavy_traffic_rate(net);
  Rat best = equilib::beq(net, dynsim::InflowProfile::uniform(gamma), opts).value;
  Rat best_cost = optflow::opt_value(net, gamma);
  return best / best_cost;
}

std::optional<netcore::Network> remove_edges(const netcore::Network& net,
                                             const std::set<int>& removed) {
  netcore::Network cur;
  cur.name = net.name + "_reduced";
  cur.vertices = net.vertices;
  cur.source = net.source;
  cur.destination = net.destination;
  for (int e = 0; e < (int)net.edges.size(); ++e) {
    if (removed.count(e)) continue;
    cur.edges.push_back(net.edges[(size_t)e]);
    if (long long q = net.initial_queue(e); q > 0)
      cur.initial_queues[(int)cur.edges.size() - 1] = q;
  }

  // Prune vertices stranded by the removal, with their incident edges.
  while (true) {
    auto violations = netcore::validate(cur);
    std::set<int> drop_vertices;
    for (const auto& v : violations) {
      if (v.kind == netcore::Violation::NoRoute) return std::nullopt;
      if (v.kind == netcore::Violation::UnreachableVertex ||
          v.kind == netcore::Violation::DeadEndVertex)
        drop_vertices.insert(v.vertex);
      else
        return std::nullopt;  // source/destination structure broken
    }
    if (drop_vertices.empty()) break;

    netcore::Network next;
    next.name = cur.name;
    next.source = -1;
    next.destination = -1;
    std::vector<int> vmap(cur.vertices.size(), -1);
    for (int v = 0; v < (int)cur.vertices.size(); ++v) {
      if (drop_vertices.count(v)) continue;
      vmap[(size_t)v] = next.add_vertex(cur.vertices[(size_t)v]);
    }
    next.source = vmap[(size_t)cur.source];
    next.destination = vmap[(size_t)cur.destination];
    if (next.source < 0 || next.destination < 0) return std::nullopt;
    for (int e = 0; e < (int)cur.edges.size(); ++e) {
      const auto& edge = cur.edges[(size_t)e];
      if (vmap[(size_t)edge.tail] < 0 || vmap[(size_t)edge.head] < 0) continue;
      next.edges.push_back(edge);
      next.edges.back().tail = vmap[(size_t)edge.tail];
      next.edges.back().head = vmap[(size_t)edge.head];
      if (long long q = cur.initial_queue(e); q > 0)
        next.initial_queues[(int)next.edges.size() - 1] = q;
    }
    cur = std::move(next);
  }
  return cur;
}

std::pair<Rat, std::set<int>> braess_ratio(const netcore::Network& net,
                                           const BraessOptions& opts) {
  long long gamma = heavy_traffic_rate(net);
  auto inflow = dynsim::InflowProfile::uniform(gamma);
  Rat original = equilib::weq(net, inflow, opts.eq).value;

  Rat best{1};
  std::set<int> witness;
  long long examined = 0;
  int m = (int)net.edges.size();

  // Subsets in increasing size, lexicographic within a size; the first
  // maximum wins, so smaller witnesses are preferred.
  std::vector<int> subset;
  equilib::EqOptions reduced_opts;  // generic policies only on reduced networks
  reduced_opts.max_horizon = opts.eq.max_horizon;
  std::function<void(int)> scan = [&](int first) {
    if (!subset.empty()) {
      if (++examined > opts.budget)
        fail(Errc::search_budget_exceeded,
             "removal search exceeded " + std::to_string(opts.budget) + " candidates");
      std::set<int> removed(subset.begin(), subset.end());
      if (auto reduced = remove_edges(net, removed)) {
        if (netcore::min_cut(*reduced).capacity >= gamma) {
          Rat value = equilib::weq(*reduced, inflow, reduced_opts).value;
          if (value > Rat(0)) {
            Rat ratio = original / value;
            if (ratio > best) {
              best = ratio;
              witness = removed;
            }
          }
        }
      }
    }
    if ((int)subset.size() == opts.max_removal_size) return;
    for (int e = first; e < m; ++e) {
      subset.push_back(e);
      scan(e + 1);
      subset.pop_back();
    }
  };
  scan(0);
  return {best, witness};
}

netcore::Network with_probe(const netcore::Network& net, const ParadoxProbe& probe) {
  if (probe.edge < 0 || probe.edge >= (int)net.edges.size())
    fail(Errc::bad_argument, "probe references a missing edge");
  if (probe.amount < 1) fail(Errc::bad_argument, "probe amount must be >= 1");
  netcore::Network out = net;
  if (probe.kind == ParadoxProbe::AddInitialQueue)
    out.initial_queues[probe.edge] += probe.amount;
  else
    out.edges[(size_t)probe.edge].transit += probe.amount;
  out.name = net.name + "_probed";
  return out;
}

ParadoxResult paradox_probe(const netcore::Network& net, const ParadoxProbe& probe,
                            const equilib::EqOptions& opts) {
  long long gamma = heavy_traffic_rate(net);
  auto inflow = dynsim::InflowProfile::uniform(gamma);
  ParadoxResult result;
  result.probe = probe;
  result.before = equilib::weq(net, inflow, opts).value;
  result.after = equilib::weq(with_probe(net, probe), inflow, opts).value;
  result.paradox = result.after < result.before;
  return result;
}

EfficiencyReport full_report(const netcore::Network& net, const ReportOptions& opts) {
  EfficiencyReport report;
  report.delta = heavy_traffic_rate(net);
  auto inflow = dynsim::InflowProfile::uniform(report.delta);
  report.opt = optflow::opt_value(net, report.delta);
  auto w = equilib::weq(net, inflow, opts.eq);
  auto b = equilib::beq(net, inflow, opts.eq);
  report.weq = w.value;
  report.weq_source = w.source;
  report.beq = b.value;
  report.beq_source = b.source;
  report.poa = report.weq / report.opt;
  report.pos = report.beq / report.opt;
  if (opts.braess_max_removal) {
    BraessOptions bo;
    bo.max_removal_size = *opts.braess_max_removal;
    bo.eq = opts.eq;
    auto [ratio, witness] = braess_ratio(net, bo);
    report.braess_ratio = ratio;
    report.witness_removal = witness;
  }
  for (const auto& probe : opts.probes) report.paradoxes.push_back(paradox_probe(net, probe, opts.eq));
  return report;
}

}  // namespace dynq::metrics
