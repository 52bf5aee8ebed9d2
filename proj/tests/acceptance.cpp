// End-to-end acceptance suite: ten criteria, one pass/fail line each, all
// values exact. Exit status is nonzero when any criterion fails.

#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "dynq/equilib.hpp"
#include "dynq/forms.hpp"
#include "dynq/metrics.hpp"
#include "dynq/netcore.hpp"
#include "dynq/optflow.hpp"
#include "dynq/presets.hpp"
#include "dynq/reproduce.hpp"
#include "dynq/seasonal.hpp"
#include "test_util.hpp"

using namespace dynq;
using dynsim::InflowProfile;
using equilib::EqOptions;
using equilib::TieBreakPolicy;

namespace {

struct Checker {
  std::ostringstream log;
  bool ok = true;

  template <typename A, typename B>
  void eq(const std::string& what, const A& expected, const B& actual) {
    if (!(expected == actual)) {
      ok = false;
      log << "    " << what << ": mismatch\n";
    }
  }
  void truthy(const std::string& what, bool value) {
    if (!value) {
      ok = false;
      log << "    " << what << ": failed\n";
    }
  }
};

bool criterion1(Checker& c) {
  auto net = netcore::gen_example(netcore::ExampleName::fig2);
  auto inflow = InflowProfile::uniform(2);

  auto greedy = equilib::detect_steady_state(net, inflow, TieBreakPolicy::worst(), 300);
  c.eq("worst-case greedy steady latency", Rat(6), greedy.cycle_average);

  auto alternating = equilib::evaluate_candidate(net, inflow, presets::fig2_alternating(), true);
  c.truthy("alternating profile verifies", alternating.has_value());
  if (alternating) {
    c.eq("alternating profile value", Rat(6), alternating->value);
    c.eq("alternating queue period", Stage(2), alternating->steady.period);
  }

  c.eq("chain form optimum", Rat(5), forms::chain_opt(net));
  c.eq("chain form worst equilibrium", Rat(6), forms::chain_weq(net));
  auto traj = dynsim::simulate(net, inflow, optflow::opt_strategy(net, 2, 40), 40);
  c.eq("optimal schedule average", Rat(5), dynsim::average_latency(traj, 1, 30).value);
  c.eq("greedy matches the chain form", forms::chain_weq(net), greedy.cycle_average);
  return c.ok;
}

bool criterion2(Checker& c) {
  auto net = netcore::gen_example(netcore::ExampleName::fig3);
  EqOptions eq;
  eq.candidates.push_back(presets::fig3_worst());

  c.eq("worst equilibrium", Rat(4), equilib::weq(net, InflowProfile::uniform(3), eq).value);

  metrics::ParadoxProbe queue{metrics::ParadoxProbe::AddInitialQueue, net.edge_index("e2"), 1};
  auto qres = metrics::paradox_probe(net, queue, eq);
  c.eq("queue probe before", Rat(4), qres.before);
  c.eq("queue probe after", Rat(3), qres.after);
  c.truthy("queue paradox flagged", qres.paradox);

  metrics::ParadoxProbe transit{metrics::ParadoxProbe::IncreaseTransit, net.edge_index("e2"), 1};
  auto tres = metrics::paradox_probe(net, transit, eq);
  c.truthy("transit paradox flagged", tres.paradox);
  return c.ok;
}

bool criterion3(Checker& c) {
  auto net = netcore::gen_example(netcore::ExampleName::wheatstone);
  auto inflow = InflowProfile::uniform(2);
  c.eq("worst equilibrium", Rat(6), equilib::weq(net, inflow, {}).value);

  auto reduced = metrics::remove_edges(net, {net.edge_index("e3")});
  c.truthy("reduced network valid", reduced.has_value());
  if (reduced) c.eq("reduced worst equilibrium", Rat(2), equilib::weq(*reduced, inflow, {}).value);
  c.eq("optimum", Rat(2), optflow::opt_value(net, 2));

  auto [ratio, witness] = metrics::braess_ratio(net, {});
  c.eq("removal ratio", Rat(3), ratio);
  c.eq("witness", std::set<int>{net.edge_index("e3")}, witness);
  return c.ok;
}

bool criterion4(Checker& c) {
  for (int k = 1; k <= 3; ++k) {
    auto net = netcore::gen_braess(k);
    long long gamma = k + 1;
    auto inflow = InflowProfile::uniform(gamma);
    std::string tag = "k=" + std::to_string(k) + " ";

    EqOptions eq;
    eq.max_horizon = 800;
    eq.include_default_policy = false;
    eq.policies.push_back(presets::ladder_worst_policy(net, k));
    eq.policies.push_back(presets::ladder_best_policy(net, k));

    c.eq(tag + "optimum", Rat(k + 1), optflow::opt_value(net, gamma));
    c.eq(tag + "best equilibrium", Rat(k + 1), equilib::beq(net, inflow, eq).value);

    // worst value must come out of the simulated preference construction
    auto pref = equilib::detect_steady_state(net, inflow, presets::ladder_worst_policy(net, k),
                                             800);
    c.eq(tag + "worst preference simulated", Rat((k + 1) * (2 * k + 1)), pref.cycle_average);
    c.eq(tag + "worst equilibrium", Rat((k + 1) * (2 * k + 1)),
         equilib::weq(net, inflow, eq).value);

    c.eq(tag + "price of anarchy", Rat(2 * k + 1), metrics::poa(net, eq));
    c.eq(tag + "price of stability", Rat(1), metrics::pos(net, eq));

    metrics::BraessOptions bo;
    bo.max_removal_size = k;
    bo.eq = eq;
    auto [ratio, witness] = metrics::braess_ratio(net, bo);
    c.eq(tag + "removal ratio", Rat(2 * k + 1), ratio);
  }
  return c.ok;
}

bool criterion5(Checker& c) {
  std::mt19937 rng(2024);
  int done = 0;
  while (done < 200) {
    testutil::RandomNetOptions opts;
    opts.max_middles = 4;  // six vertices total
    opts.max_edges = 10;
    opts.max_capacity = 4;
    auto net = testutil::random_valid_network(rng, opts);
    long long cap = netcore::min_cut(net).capacity;
    if (cap > 6) continue;
    long long delta = 1 + (long long)(rng() % (unsigned)cap);

    Stage horizon = 25;
    auto flow = optflow::min_cost_flow(net, delta);
    auto traj = dynsim::simulate(net, InflowProfile::uniform(delta),
                                 optflow::opt_strategy(net, delta, horizon), horizon);
    bool zero_wait = true;
    for (Stage t = 1; t <= horizon; ++t) zero_wait &= traj.totals(t).waiting == 0;
    c.truthy("zero waiting", zero_wait);
    c.eq("average equals the static cost", Rat(flow.cost),
         dynsim::average_latency(traj, 1, horizon).value);

    if (netcore::enumerate_routes(net).size() <= 8)
      c.eq("brute-force optimality", *testutil::brute_min_cost(net, delta), flow.cost);
    if (!c.ok) return false;
    ++done;
  }
  return c.ok;
}

bool criterion6(Checker& c) {
  std::mt19937 rng(2025);
  int done = 0;
  while (done < 200) {
    auto net = testutil::random_parallel_network(rng, 5, 5, 4);
    long long cap = 0;
    for (const auto& e : net.edges) cap += e.capacity;
    long long delta = 1 + (long long)(rng() % (unsigned)cap);
    auto inflow = InflowProfile::uniform(delta);

    auto ss = equilib::detect_steady_state(net, inflow, TieBreakPolicy::worst(), 3000);
    c.eq("cycle average equals the closed form", forms::parallel_weq(net, delta),
         ss.cycle_average);
    c.eq("optimum equals the closed form", forms::parallel_opt(net, delta),
         optflow::opt_value(net, delta));

    // post-onset per-edge counts follow the capacity split
    auto pp = forms::parallel_profile(net, delta);
    Stage horizon = ss.onset + 2 * ss.period + 2;
    auto res = equilib::greedy_ufr(net, inflow, TieBreakPolicy::worst(), horizon);
    bool counts_ok = true;
    for (Stage t = ss.onset + 1; t <= horizon; ++t) {
      std::vector<long long> count(net.edges.size(), 0);
      for (const auto& r : res.profile.routes[(size_t)(t - 1)]) ++count[(size_t)r.edges[0]];
      for (size_t pos = 0; pos < pp.order.size(); ++pos) {
        long long want = pos < pp.boundary_pos    ? net.edges[(size_t)pp.order[pos]].capacity
                         : pos == pp.boundary_pos ? pp.residual
                                                  : 0;
        counts_ok &= count[(size_t)pp.order[pos]] == want;
      }
    }
    c.truthy("post-onset counts", counts_ok);

    if (delta == cap && net.edges.size() >= 2) {
      auto ts = forms::transient_schedule(net, delta);
      long long gamma1 = net.edges[(size_t)pp.order[0]].capacity;
      for (const auto& alpha : ts.offsets) {
        c.truthy("alpha lower bound", alpha >= Rat(0));
        if (delta > gamma1) c.truthy("alpha upper bound", alpha < Rat(delta - gamma1));
      }
      // transient ends by the last threshold: split holds for t > floor+2
      Stage probe_end = ts.floors.back() + 8;
      auto probe = equilib::greedy_ufr(net, inflow, TieBreakPolicy::worst(), probe_end);
      Stage last_dev = 0;
      for (Stage t = 1; t <= probe_end; ++t) {
        std::vector<long long> count(net.edges.size(), 0);
        for (const auto& r : probe.profile.routes[(size_t)(t - 1)]) ++count[(size_t)r.edges[0]];
        for (size_t pos = 0; pos < pp.order.size(); ++pos)
          if (count[(size_t)pp.order[pos]] != net.edges[(size_t)pp.order[pos]].capacity) {
            last_dev = t;
            break;
          }
      }
      c.truthy("onset within the schedule", last_dev <= ts.floors.back() + 2);
    }
    if (!c.ok) return false;
    ++done;
  }
  return c.ok;
}

bool criterion7(Checker& c) {
  auto net = netcore::gen_example(netcore::ExampleName::seasonal_two_edge);
  auto inflow = InflowProfile::periodic({6, 0, 0});
  c.eq("distance", 6LL, seasonal::distance_to_uniform({6, 0, 0}, 2));
  c.eq("seasonal optimum", Rat(15), seasonal::seasonal_parallel_opt(net, inflow));
  c.eq("seasonal worst equilibrium", Rat(18), seasonal::seasonal_parallel_weq(net, inflow));

  auto opt = equilib::evaluate_candidate(net, inflow, presets::seasonal_opt_profile(), false);
  c.truthy("reference planner profile evaluates", opt.has_value());
  if (opt) c.eq("reference planner per period", Rat(15), opt->value * Rat(3));
  auto eq = equilib::evaluate_candidate(net, inflow, presets::seasonal_worst_profile(), true);
  c.truthy("reference equilibrium profile verifies", eq.has_value());
  if (eq) c.eq("reference equilibrium per period", Rat(18), eq->value * Rat(3));
  return c.ok;
}

bool criterion8(Checker& c) {
  std::mt19937 rng(2026);
  int done = 0;
  while (done < 120) {
    auto net = testutil::random_parallel_network(rng, 3, 4, 2);
    long long gamma = 0;
    for (const auto& e : net.edges) gamma += e.capacity;
    if (gamma > 4) continue;
    long long k = 2 + (long long)(rng() % 3);
    std::vector<long long> values((size_t)k, 0);
    for (long long unit = 0; unit < gamma * k; ++unit) ++values[rng() % (unsigned)k];
    auto inflow = InflowProfile::periodic(values);

    Rat opt_form = seasonal::seasonal_parallel_opt(net, inflow);
    Rat weq_form = seasonal::seasonal_parallel_weq(net, inflow);

    Stage horizon = 40 * (Stage)k;
    equilib::ProfileCandidate planner;
    planner.name = "planner";
    planner.make = [&](Stage h) { return seasonal::planner_profile(net, inflow, h); };
    planner.profile_period = (Stage)k;
    planner.eval_horizon = horizon;
    auto planned = equilib::evaluate_candidate(net, inflow, planner, false);
    c.truthy("planner evaluates", planned.has_value());
    if (planned) c.eq("planner per period", opt_form, planned->value * Rat(k));

    auto ss = equilib::detect_steady_state(net, inflow, TieBreakPolicy::worst(), 4000);
    c.eq("worst greedy per period", weq_form, ss.cycle_average * Rat(k));
    if (!c.ok) return false;
    ++done;
  }
  return c.ok;
}

bool criterion9(Checker& c) {
  auto net = presets::two_module_network();
  auto inflow = InflowProfile::uniform(2);
  auto profile = presets::two_module_bad_nash().make(40);
  c.truthy("profile is a Nash equilibrium", equilib::verify_nash(net, inflow, profile, 40).pass);
  auto ufr = equilib::verify_ufr(net, inflow, profile, 40);
  c.truthy("profile is not uniformly fastest", !ufr.pass);
  auto traj = dynsim::simulate(net, inflow, profile, 40);
  c.eq("steady per-stage latency", Rat(9), dynsim::average_latency(traj, 10, 30).value);
  return c.ok;
}

bool criterion10(Checker& c) {
  // duality on every generator
  for (int k = 1; k <= 4; ++k) {
    auto net = netcore::gen_braess(k);
    c.eq("ladder duality", testutil::dfs_max_flow(net), netcore::min_cut(net).capacity);
  }
  for (long long n = 2; n <= 4; ++n)
    for (long long p = 1; p <= 2; ++p) {
      auto net = netcore::gen_pigou(n, p);
      c.eq("pigou duality", testutil::dfs_max_flow(net), netcore::min_cut(net).capacity);
    }
  for (auto which : {netcore::ExampleName::fig2, netcore::ExampleName::fig3,
                     netcore::ExampleName::wheatstone, netcore::ExampleName::seasonal_two_edge}) {
    auto net = netcore::gen_example(which);
    c.eq("example duality", testutil::dfs_max_flow(net), netcore::min_cut(net).capacity);
  }

  // capacity splitting invariance on random pairs
  std::mt19937 rng(2027);
  auto routes_of = [](const netcore::Network& net) { return netcore::enumerate_routes(net); };
  int pairs = 0;
  while (pairs < 100) {
    auto net = testutil::random_valid_network(rng);
    if (rng() % 3 == 0) net.initial_queues[(int)(rng() % net.edges.size())] = 1 + rng() % 2;
    long long delta = 1 + (long long)(rng() % 4);
    Stage horizon = 10;
    auto routes = routes_of(net);
    dynsim::StrategyProfile profile;
    profile.horizon = horizon;
    profile.routes.resize((size_t)horizon);
    for (Stage t = 1; t <= horizon; ++t)
      for (long long i = 0; i < delta; ++i)
        profile.routes[(size_t)(t - 1)].push_back(routes[rng() % routes.size()]);

    auto [split, map] = dynsim::split_capacities(net);
    auto image = dynsim::map_profile_to_split(net, InflowProfile::uniform(delta), profile, horizon,
                                              split, map);
    auto a = dynsim::simulate(net, InflowProfile::uniform(delta), profile, horizon);
    auto b = dynsim::simulate(split, InflowProfile::uniform(delta), image, horizon);
    bool same = true;
    for (Stage t = 1; t <= horizon; ++t)
      for (size_t i = 0; i < a.players[(size_t)(t - 1)].size(); ++i)
        same &= a.players[(size_t)(t - 1)][i].latency == b.players[(size_t)(t - 1)][i].latency;
    c.truthy("splitting invariance", same);
    if (!c.ok) return false;
    ++pairs;
  }

  // determinism: the bundled pipelines replay to identical bytes
  auto run_corpus = [&]() {
    std::ostringstream out;
    for (auto which : {netcore::ExampleName::fig2, netcore::ExampleName::fig3,
                       netcore::ExampleName::wheatstone, netcore::ExampleName::seasonal_two_edge}) {
      auto net = netcore::gen_example(which);
      out << netcore::emit_network(net);
      long long cap = netcore::min_cut(net).capacity;
      auto res = equilib::greedy_ufr(net, InflowProfile::uniform(cap),
                                     TieBreakPolicy::worst(), 40);
      out << dynsim::emit_profile(net, res.profile);
      auto traj = dynsim::simulate(net, InflowProfile::uniform(cap), res.profile, 40);
      out << dynsim::trajectory_csv(traj);
    }
    for (int k = 1; k <= 3; ++k) out << netcore::emit_network(netcore::gen_braess(k));
    return out.str();
  };
  c.eq("bit-identical rerun", run_corpus(), run_corpus());
  return c.ok;
}

}  // namespace

int main() {
  struct Entry {
    int number;
    const char* title;
    std::function<bool(Checker&)> run;
  };
  const Entry entries[] = {
      {1, "two-module chain: greedy, rotation profile, closed forms", criterion1},
      {2, "series-parallel instance: worst value and both paradoxes", criterion2},
      {3, "wheatstone: worst value and removal improvement", criterion3},
      {4, "ladder family k=1..3 end to end", criterion4},
      {5, "repeated min-cost flow on 200 random networks", criterion5},
      {6, "parallel closed forms on 200 random networks", criterion6},
      {7, "seasonal burst instance", criterion7},
      {8, "seasonal closed forms on random parallel instances", criterion8},
      {9, "Nash-but-not-uniformly-fastest profile", criterion9},
      {10, "duality, splitting invariance, determinism", criterion10},
  };
  bool all_ok = true;
  for (const auto& entry : entries) {
    Checker c;
    bool ok = false;
    std::string error;
    try {
      ok = entry.run(c);
    } catch (const Error& e) {
      error = e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << entry.number << ": " << entry.title
              << "\n";
    if (!ok) {
      std::cout << c.log.str();
      if (!error.empty()) std::cout << "    error: " << error << "\n";
      all_ok = false;
    }
  }
  return all_ok ? 0 : 1;
}
