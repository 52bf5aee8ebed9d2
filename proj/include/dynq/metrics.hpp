#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dynq/equilib.hpp"
#include "dynq/netcore.hpp"
#include "dynq/types.hpp"

namespace dynq::metrics {

struct ParadoxProbe {
  enum Kind { AddInitialQueue, IncreaseTransit } kind = AddInitialQueue;
  int edge = -1;
  long long amount = 1;
};

struct ParadoxResult {
  ParadoxProbe probe;
  Rat before{0};
  Rat after{0};
  bool paradox = false;  // the modification lowered the worst equilibrium
};

struct EfficiencyReport {
  long long delta = 0;  // heavy-traffic inflow = network capacity
  Rat opt{0};
  Rat weq{0};
  Rat beq{0};
  Rat poa{0};
  Rat pos{0};
  std::string weq_source, beq_source;
  std::optional<Rat> braess_ratio;
  std::set<int> witness_removal;
  std::vector<ParadoxResult> paradoxes;
};

// Heavy-traffic efficiency ratios (inflow = capacity).
Rat poa(const netcore::Network& net, const equilib::EqOptions& opts = {});
Rat pos(const netcore::Network& net, const equilib::EqOptions& opts = {});

struct BraessOptions {
  int max_removal_size = 1;
  long long budget = 100'000;  // candidate subsets examined
  equilib::EqOptions eq;       // candidates apply to the original network only
};

// Largest worst-equilibrium improvement factor over edge removals that keep
// the network feasible at the original inflow; removals that disconnect the
// pair or drop capacity below the inflow are skipped.
std::pair<Rat, std::set<int>> braess_ratio(const netcore::Network& net,
                                           const BraessOptions& opts = {});

ParadoxResult paradox_probe(const netcore::Network& net, const ParadoxProbe& probe,
                            const equilib::EqOptions& opts = {});

struct ReportOptions {
  std::optional<int> braess_max_removal;  // unset: skip the removal search
  std::vector<ParadoxProbe> probes;
  equilib::EqOptions eq;
};

EfficiencyReport full_report(const netcore::Network& net, const ReportOptions& opts = {});

// The network with the given edges removed and stranded vertices pruned, or
// nullopt when the s-d pair disconnects.
std::optional<netcore::Network> remove_edges(const netcore::Network& net,
                                             const std::set<int>& edges);

netcore::Network with_probe(const netcore::Network& net, const ParadoxProbe& probe);

}  // namespace dynq::metrics
