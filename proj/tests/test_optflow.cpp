#include "dynq/optflow.hpp"

#include <functional>
#include <optional>
#include <random>

#include "doctest.h"
#include "dynq/equilib.hpp"
#include "test_util.hpp"

using namespace dynq;
using namespace dynq::optflow;
using netcore::ExampleName;
using netcore::Network;

namespace {

void check_flow_consistency(const Network& net, const StaticFlow& flow) {
  // capacities and conservation
  for (const auto& [e, f] : flow.edge_flow) {
    CHECK(f >= 0);
    CHECK(f <= net.edges[(size_t)e].capacity);
  }
  std::vector<long long> balance(net.vertices.size(), 0);
  for (const auto& [e, f] : flow.edge_flow) {
    balance[(size_t)net.edges[(size_t)e].tail] += f;
    balance[(size_t)net.edges[(size_t)e].head] -= f;
  }
  for (int v = 0; v < (int)net.vertices.size(); ++v) {
    if (v == net.source)
      CHECK(balance[(size_t)v] == flow.value);
    else if (v == net.destination)
      CHECK(balance[(size_t)v] == -flow.value);
    else
      CHECK(balance[(size_t)v] == 0);
  }
  // decomposition aggregates back to the edge flows
  std::map<int, long long> agg;
  long long total = 0, cost = 0;
  for (const auto& [route, amount] : flow.route_flow) {
    total += amount;
    cost += amount * netcore::route_transit(net, route);
    for (int e : route.edges) agg[e] += amount;
  }
  CHECK(total == flow.value);
  CHECK(cost == flow.cost);
  CHECK(agg == flow.edge_flow);
}

}  // namespace

TEST_CASE("min cost flow on the bundled instances") {
  auto ws = netcore::gen_example(ExampleName::wheatstone);
  auto flow = min_cost_flow(ws, 2);
  CHECK(flow.cost == 2);
  check_flow_consistency(ws, flow);

  auto fig3 = netcore::gen_example(ExampleName::fig3);
  auto f3 = min_cost_flow(fig3, 3);
  CHECK(f3.cost == 2);
  CHECK(*testutil::brute_min_cost(fig3, 3) == 2);
  check_flow_consistency(fig3, f3);

  CHECK(min_cost_flow(ws, 0).cost == 0);
  CHECK(min_cost_flow(ws, 0).route_flow.empty());

  CHECK_THROWS_AS((void)min_cost_flow(ws, 3), Error);  // above capacity
}

TEST_CASE("opt values for the generators") {
  for (int k = 1; k <= 3; ++k) CHECK(opt_value(netcore::gen_braess(k), k + 1) == Rat(k + 1));
  CHECK(opt_value(netcore::gen_pigou(2, 1), 3) == Rat(2 + 2));  // N^p + N
  CHECK(*testutil::brute_min_cost(netcore::gen_pigou(2, 1), 3) == 4);
  CHECK(opt_value(netcore::gen_pigou(2, 2), 5) == Rat(4 + 2));

  Network single;
  single.source = single.add_vertex("s");
  single.destination = single.add_vertex("d");
  single.add_edge("e", "s", "d", 4, 3);
  CHECK(opt_value(single, 3) == Rat(12));  // gamma * tau
}

TEST_CASE("min cost flow matches brute force on random instances") {
  std::mt19937 rng(17);
  int done = 0;
  while (done < 60) {
    auto net = testutil::random_valid_network(rng);
    if (netcore::enumerate_routes(net).size() > 8) continue;
    long long cap = netcore::min_cut(net).capacity;
    long long value = std::min(cap, 1 + (long long)(rng() % 6));
    auto flow = min_cost_flow(net, value);
    check_flow_consistency(net, flow);
    CHECK(flow.cost == *testutil::brute_min_cost(net, value));
    ++done;
  }
}

TEST_CASE("min cost flow is deterministic") {
  std::mt19937 rng(19);
  auto net = testutil::random_valid_network(rng);
  long long value = netcore::min_cut(net).capacity;
  auto a = min_cost_flow(net, value);
  auto b = min_cost_flow(net, value);
  CHECK(a.edge_flow == b.edge_flow);
  REQUIRE(a.route_flow.size() == b.route_flow.size());
  for (size_t i = 0; i < a.route_flow.size(); ++i) {
    CHECK(a.route_flow[i].first.edges == b.route_flow[i].first.edges);
    CHECK(a.route_flow[i].second == b.route_flow[i].second);
  }
}

TEST_CASE("repeating the optimal flow creates no queues") {
  auto check_zero_wait = [](const Network& net, long long delta, Rat expect_cost) {
    auto profile = opt_strategy(net, delta, 30);
    auto traj = dynsim::simulate(net, dynsim::InflowProfile::uniform(delta), profile, 30);
    for (Stage t = 1; t <= 30; ++t) {
      CHECK(traj.totals(t).waiting == 0);
      CHECK(Rat(traj.totals(t).latency) == expect_cost);
    }
  };
  check_zero_wait(netcore::gen_example(ExampleName::fig2), 2, Rat(5));
  check_zero_wait(netcore::gen_example(ExampleName::wheatstone), 2, Rat(2));
  check_zero_wait(netcore::gen_example(ExampleName::fig3), 3, Rat(2));

  // parallel at capacity: gamma_e players per edge per stage
  auto pigou = netcore::gen_pigou(2, 1);
  auto profile = opt_strategy(pigou, 3, 10);
  auto traj = dynsim::simulate(pigou, dynsim::InflowProfile::uniform(3), profile, 10);
  for (Stage t = 1; t <= 10; ++t) {
    CHECK(traj.entries[(size_t)(t - 1)][0] == 2);
    CHECK(traj.entries[(size_t)(t - 1)][1] == 1);
    CHECK(traj.totals(t).waiting == 0);
  }
}

TEST_CASE("rate audit sees cut edges saturate under the optimum") {
  auto ws = netcore::gen_example(ExampleName::wheatstone);
  auto cut = netcore::min_cut(ws);
  auto traj = dynsim::simulate(ws, dynsim::InflowProfile::uniform(2), opt_strategy(ws, 2, 40), 40);
  auto audit = rate_audit(traj, ws, cut);
  CHECK_FALSE(audit.any_flag);
  for (const auto& row : audit.cut_edges) {
    // downstream cut edges see their first entry one stage late at most
    CHECK(row.entry_avg >= Rat(39, 40));
    CHECK(row.entry_avg <= Rat(1));
  }
}

TEST_CASE("cut edges saturate after the worst-equilibrium onset") {
  auto net = netcore::gen_example(netcore::ExampleName::fig2);
  auto res = dynq::equilib::greedy_ufr(net, dynsim::InflowProfile::uniform(2),
                                       dynq::equilib::TieBreakPolicy::worst(), 60);
  auto traj = dynsim::simulate(net, dynsim::InflowProfile::uniform(2), res.profile, 60);
  auto cut = netcore::min_cut(net);
  for (int e : cut.cut_edges) {
    long long entries = 0;
    for (Stage t = 20; t <= 50; ++t) entries += traj.entries[(size_t)(t - 1)][(size_t)e];
    CHECK(Rat(entries, 31) == Rat(net.edges[(size_t)e].capacity));
  }
}

TEST_CASE("rate audit flags sustained over-capacity inflow") {
  Network net;
  net.source = net.add_vertex("s");
  net.destination = net.add_vertex("d");
  net.add_edge("e", "s", "d", 1, 1);
  dynsim::StrategyProfile p;
  p.horizon = 20;
  p.routes.assign(20, {netcore::route_from_ids(net, {"e"}), netcore::route_from_ids(net, {"e"})});
  auto traj = dynsim::simulate(net, dynsim::InflowProfile::uniform(2), p, 20);
  auto audit = rate_audit(traj, net, netcore::min_cut(net));
  CHECK(audit.any_flag);
  // the queue grows linearly while inflow continues
  CHECK(traj.queue_after(10, 0) > traj.queue_after(5, 0));
}
