#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dynq/equilib.hpp"
#include "dynq/netcore.hpp"

namespace dynq::presets {

// Two modules of two edges each (transits 1 and 2, unit capacities); hosts a
// profile that is a Nash equilibrium but not uniformly fastest.
netcore::Network two_module_network();

// Reference equilibrium profiles for the bundled instances. Each returns a
// candidate for the equilibrium-value search.
equilib::ProfileCandidate fig2_stationary();   // queue parked on the short first edge
equilib::ProfileCandidate fig2_alternating();  // two-stage rotation, same value
equilib::ProfileCandidate fig3_worst();        // the worst stationary split on fig3
equilib::ProfileCandidate wheatstone_worst();  // steady split after a 4-stage ramp
equilib::ProfileCandidate two_module_bad_nash();
equilib::ProfileCandidate seasonal_opt_profile();   // (6,0,0) burst, alternating deal
equilib::ProfileCandidate seasonal_worst_profile();

// Path families of the ladder instances from gen_braess: detour[i] crosses
// rung i; bypass[i] are the cost-1 paths that share no rung.
struct LadderPaths {
  std::vector<netcore::Route> detours;   // k of them, cost 0
  std::vector<netcore::Route> bypasses;  // k+1 of them, cost 1
};
LadderPaths ladder_paths(const netcore::Network& net, int k);

// Preference orders driving the extreme equilibria on gen_braess(k).
equilib::TieBreakPolicy ladder_worst_policy(const netcore::Network& net, int k);
equilib::TieBreakPolicy ladder_best_policy(const netcore::Network& net, int k);

// Reference profile lookup for the CLI.
std::optional<equilib::ProfileCandidate> candidate_by_name(const std::string& name);
std::vector<std::string> candidate_names();

}  // namespace dynq::presets
