#include "dynq/presets.hpp"

#include <functional>

namespace dynq::presets {

using netcore::Route;

netcore::Network two_module_network() {
  netcore::Network net;
  net.name = "two_module";
  net.source = net.add_vertex("s");
  net.add_vertex("v");
  net.destination = net.add_vertex("d");
  net.add_edge("e1_1", "s", "v", 1, 1);
  net.add_edge("e2_1", "s", "v", 2, 1);
  net.add_edge("e1_2", "v", "d", 1, 1);
  net.add_edge("e2_2", "v", "d", 2, 1);
  return net;
}

namespace {

dynsim::StrategyProfile from_rule(
    Stage horizon, long long delta,
    const std::function<Route(Stage t, long long i)>& rule) {
  dynsim::StrategyProfile profile;
  profile.horizon = horizon;
  profile.routes.resize((size_t)horizon);
  for (Stage t = 1; t <= horizon; ++t)
    for (long long i = 1; i <= delta; ++i)
      profile.routes[(size_t)(t - 1)].push_back(rule(t, i));
  return profile;
}

}  // namespace

equilib::ProfileCandidate fig2_stationary() {
  equilib::ProfileCandidate cand;
  cand.name = "fig2-stationary";
  cand.profile_period = 1;
  cand.min_onset = 3;
  cand.make = [](Stage horizon) {
    auto net = netcore::gen_example(netcore::ExampleName::fig2);
    Route fast_fast = netcore::route_from_ids(net, {"e1_1", "e1_2"});
    Route fast_slow = netcore::route_from_ids(net, {"e1_1", "e2_2"});
    Route mid_slow = netcore::route_from_ids(net, {"e2_1", "e2_2"});
    return from_rule(horizon, 2, [=](Stage t, long long i) {
      if (t == 1) return i == 1 ? fast_fast : fast_slow;
      return i == 1 ? fast_fast : mid_slow;
    });
  };
  return cand;
}

equilib::ProfileCandidate fig2_alternating() {
  equilib::ProfileCandidate cand;
  cand.name = "fig2-alternating";
  cand.profile_period = 2;
  cand.min_onset = 4;  // queue pattern locks in after two rotations
  cand.make = [](Stage horizon) {
    auto net = netcore::gen_example(netcore::ExampleName::fig2);
    Route r11 = netcore::route_from_ids(net, {"e1_1", "e1_2"});
    Route r12 = netcore::route_from_ids(net, {"e1_1", "e2_2"});
    Route r21 = netcore::route_from_ids(net, {"e2_1", "e1_2"});
    Route r32 = netcore::route_from_ids(net, {"e3_1", "e2_2"});
    return from_rule(horizon, 2, [=](Stage t, long long i) {
      if (t % 2 == 1) return i == 1 ? r11 : r12;
      return i == 1 ? r21 : r32;
    });
  };
  return cand;
}

equilib::ProfileCandidate fig3_worst() {
  equilib::ProfileCandidate cand;
  cand.name = "fig3-worst";
  cand.profile_period = 1;
  cand.min_onset = 3;
  cand.make = [](Stage horizon) {
    auto net = netcore::gen_example(netcore::ExampleName::fig3);
    Route through_fast = netcore::route_from_ids(net, {"e1", "e2"});
    Route through_slow = netcore::route_from_ids(net, {"e1", "e3"});
    Route direct = netcore::route_from_ids(net, {"e4"});
    return from_rule(horizon, 3, [=](Stage t, long long i) {
      if (t == 1) return i == 2 ? through_slow : through_fast;
      if (i == 1) return through_fast;
      if (i == 2) return direct;
      return through_slow;
    });
  };
  return cand;
}

equilib::ProfileCandidate wheatstone_worst() {
  equilib::ProfileCandidate cand;
  cand.name = "wheatstone-worst";
  cand.profile_period = 1;
  cand.min_onset = 6;
  cand.make = [](Stage horizon) {
    auto net = netcore::gen_example(netcore::ExampleName::wheatstone);
    Route zigzag = netcore::route_from_ids(net, {"e1", "e3", "e5"});
    Route left = netcore::route_from_ids(net, {"e1", "e4"});
    Route right = netcore::route_from_ids(net, {"e2", "e5"});
    return from_rule(horizon, 2, [=](Stage t, long long i) {
      if (t == 1) return zigzag;
      if (t == 2) return i == 1 ? zigzag : right;
      if (t == 3) return i == 1 ? zigzag : left;
      if (t == 4) return i == 1 ? right : zigzag;
      return i == 1 ? left : right;
    });
  };
  return cand;
}

equilib::ProfileCandidate two_module_bad_nash() {
  equilib::ProfileCandidate cand;
  cand.name = "two-module-bad-nash";
  cand.profile_period = 1;
  cand.min_onset = 4;
  cand.make = [](Stage horizon) {
    auto net = two_module_network();
    Route fast_fast = netcore::route_from_ids(net, {"e1_1", "e1_2"});
    Route slow_fast = netcore::route_from_ids(net, {"e2_1", "e1_2"});
    Route slow_slow = netcore::route_from_ids(net, {"e2_1", "e2_2"});
    return from_rule(horizon, 2, [=](Stage t, long long i) {
      if (t <= 2) return fast_fast;
      if (t == 3) return i == 1 ? slow_fast : fast_fast;
      return i == 1 ? slow_slow : fast_fast;
    });
  };
  return cand;
}

namespace {

dynsim::StrategyProfile seasonal_profile(Stage horizon, bool worst) {
  auto net = netcore::gen_example(netcore::ExampleName::seasonal_two_edge);
  Route fast = netcore::route_from_ids(net, {"e1"});
  Route slow = netcore::route_from_ids(net, {"e2"});
  dynsim::StrategyProfile profile;
  profile.horizon = horizon;
  profile.routes.resize((size_t)horizon);
  for (Stage t = 1; t <= horizon; ++t) {
    if (t % 3 != 1) continue;  // burst slots only
    for (long long i = 1; i <= 6; ++i) {
      Route pick;
      if (!worst) {
        pick = (i % 2 == 1) ? fast : slow;
      } else if (t == 1) {
        pick = (i == 1 || i % 2 == 0) ? fast : slow;
      } else {
        pick = (i % 2 == 1) ? fast : slow;
      }
      profile.routes[(size_t)(t - 1)].push_back(pick);
    }
  }
  return profile;
}

}  // namespace

equilib::ProfileCandidate seasonal_opt_profile() {
  equilib::ProfileCandidate cand;
  cand.name = "seasonal-opt";
  cand.profile_period = 3;
  cand.min_onset = 1;
  cand.make = [](Stage horizon) { return seasonal_profile(horizon, false); };
  return cand;
}

equilib::ProfileCandidate seasonal_worst_profile() {
  equilib::ProfileCandidate cand;
  cand.name = "seasonal-worst";
  cand.profile_period = 3;
  cand.min_onset = 4;
  cand.make = [](Stage horizon) { return seasonal_profile(horizon, true); };
  return cand;
}

LadderPaths ladder_paths(const netcore::Network& net, int k) {
  LadderPaths paths;
  auto v = [&](int i) { return "v" + std::to_string(i); };
  auto w = [&](int i) { return "w" + std::to_string(i); };
  for (int i = 1; i <= k; ++i)
    paths.detours.push_back(
        netcore::route_from_ids(net, {"s_" + v(i), v(i) + "_" + w(i), w(i) + "_d"}));
  paths.bypasses.push_back(netcore::route_from_ids(net, {"s_v1", "v1_d"}));
  for (int i = 2; i <= k; ++i)
    paths.bypasses.push_back(
        netcore::route_from_ids(net, {"s_" + v(i), v(i) + "_" + w(i - 1), w(i - 1) + "_d"}));
  paths.bypasses.push_back(netcore::route_from_ids(net, {"s_" + w(k), w(k) + "_d"}));
  return paths;
}

equilib::TieBreakPolicy ladder_worst_policy(const netcore::Network& net, int k) {
  auto paths = ladder_paths(net, k);
  std::vector<Route> pref = paths.detours;
  // bypass order: first, last, then the middle ones in increasing order
  pref.push_back(paths.bypasses.front());
  pref.push_back(paths.bypasses.back());
  for (int i = 1; i + 1 < (int)paths.bypasses.size(); ++i) pref.push_back(paths.bypasses[(size_t)i]);
  return equilib::TieBreakPolicy::explicit_order(std::move(pref), "ladder-worst");
}

equilib::TieBreakPolicy ladder_best_policy(const netcore::Network& net, int k) {
  auto paths = ladder_paths(net, k);
  std::vector<Route> pref = paths.bypasses;
  for (const auto& r : paths.detours) pref.push_back(r);
  return equilib::TieBreakPolicy::explicit_order(std::move(pref), "ladder-best");
}

std::optional<equilib::ProfileCandidate> candidate_by_name(const std::string& name) {
  if (name == "fig2-stationary") return fig2_stationary();
  if (name == "fig2-alternating") return fig2_alternating();
  if (name == "fig3-worst") return fig3_worst();
  if (name == "wheatstone-worst") return wheatstone_worst();
  if (name == "two-module-bad-nash") return two_module_bad_nash();
  if (name == "seasonal-opt") return seasonal_opt_profile();
  if (name == "seasonal-worst") return seasonal_worst_profile();
  return std::nullopt;
}

std::vector<std::string> candidate_names() {
  return {"fig2-stationary", "fig2-alternating",    "fig3-worst",   "wheatstone-worst",
          "two-module-bad-nash", "seasonal-opt", "seasonal-worst"};
}

}  // namespace dynq::presets
