#include "dynq/metrics.hpp"

#include <random>

#include "doctest.h"
#include "dynq/optflow.hpp"
#include "dynq/presets.hpp"
#include "test_util.hpp"

using namespace dynq;
using namespace dynq::metrics;
using netcore::ExampleName;
using netcore::Network;

TEST_CASE("pigou ratios") {
  CHECK(poa(netcore::gen_pigou(2, 2)) == Rat(10, 6));  // (N^p+1)/(N^{p-1}+1)
  Network single;
  single.source = single.add_vertex("s");
  single.destination = single.add_vertex("d");
  single.add_edge("e", "s", "d", 2, 3);
  CHECK(poa(single) == Rat(1));
  CHECK(pos(single) == Rat(1));
}

TEST_CASE("ladder ratios end to end") {
  for (int k = 1; k <= 2; ++k) {
    auto net = netcore::gen_braess(k);
    equilib::EqOptions eq;
    eq.max_horizon = 400;
    eq.include_default_policy = false;
    eq.policies.push_back(presets::ladder_worst_policy(net, k));
    eq.policies.push_back(presets::ladder_best_policy(net, k));
    CHECK(poa(net, eq) == Rat(2 * k + 1));
    CHECK(pos(net, eq) == Rat(1));

    BraessOptions bo;
    bo.max_removal_size = k;
    bo.eq = eq;
    auto [ratio, witness] = braess_ratio(net, bo);
    CHECK(ratio == Rat(2 * k + 1));
    CHECK(!witness.empty());
  }
}

TEST_CASE("wheatstone removal improves threefold") {
  auto net = netcore::gen_example(ExampleName::wheatstone);
  auto [ratio, witness] = braess_ratio(net, {});
  CHECK(ratio == Rat(3));
  CHECK(witness == std::set<int>{net.edge_index("e3")});

  // removing the crossing edge leaves the optimum value
  auto reduced = remove_edges(net, {net.edge_index("e3")});
  REQUIRE(reduced.has_value());
  CHECK(equilib::weq(*reduced, dynsim::InflowProfile::uniform(2), {}).value == Rat(2));
  CHECK(optflow::opt_value(*reduced, 2) == Rat(2));
}

TEST_CASE("parallel networks at capacity admit no helpful removal") {
  auto net = netcore::gen_pigou(2, 1);
  auto [ratio, witness] = braess_ratio(net, {});
  CHECK(ratio == Rat(1));
  CHECK(witness.empty());
}

TEST_CASE("initial-queue and transit paradoxes on the series-parallel instance") {
  auto net = netcore::gen_example(ExampleName::fig3);
  equilib::EqOptions eq;
  eq.candidates.push_back(presets::fig3_worst());

  ParadoxProbe queue{ParadoxProbe::AddInitialQueue, net.edge_index("e2"), 1};
  auto qres = paradox_probe(net, queue, eq);
  CHECK(qres.before == Rat(4));
  CHECK(qres.after == Rat(3));
  CHECK(qres.paradox);

  ParadoxProbe transit{ParadoxProbe::IncreaseTransit, net.edge_index("e2"), 1};
  auto tres = paradox_probe(net, transit, eq);
  CHECK(tres.before == Rat(4));
  CHECK(tres.after == Rat(3));
  CHECK(tres.paradox);
}

TEST_CASE("a queue on the longest parallel edge changes nothing") {
  Network net;
  net.source = net.add_vertex("s");
  net.destination = net.add_vertex("d");
  net.add_edge("e1", "s", "d", 1, 1);
  net.add_edge("e2", "s", "d", 3, 1);
  ParadoxProbe probe{ParadoxProbe::AddInitialQueue, net.edge_index("e2"), 1};
  auto res = paradox_probe(net, probe, {});
  CHECK(res.before == res.after);
  CHECK_FALSE(res.paradox);
}

TEST_CASE("report identities hold exactly") {
  auto net = netcore::gen_braess(1);
  equilib::EqOptions eq;
  eq.policies.push_back(presets::ladder_worst_policy(net, 1));
  eq.policies.push_back(presets::ladder_best_policy(net, 1));
  ReportOptions opts;
  opts.eq = eq;
  opts.braess_max_removal = 1;
  auto report = full_report(net, opts);
  CHECK(report.poa * report.opt == report.weq);
  CHECK(report.pos * report.opt == report.beq);
  CHECK(report.poa >= report.pos);
  CHECK(report.pos >= Rat(1));
  CHECK(report.braess_ratio.has_value());
  CHECK(*report.braess_ratio == Rat(3));
}

TEST_CASE("feasible removals never lower the static optimum") {
  std::mt19937 rng(83);
  int done = 0;
  while (done < 20) {
    auto net = testutil::random_valid_network(rng);
    long long cap = netcore::min_cut(net).capacity;
    long long delta = 1 + (long long)(rng() % (unsigned)cap);
    Rat base = optflow::opt_value(net, delta);
    for (int e = 0; e < (int)net.edges.size(); ++e) {
      auto reduced = remove_edges(net, {e});
      if (!reduced) continue;
      if (netcore::min_cut(*reduced).capacity < delta) continue;
      CHECK(optflow::opt_value(*reduced, delta) >= base);
    }
    ++done;
  }
}

TEST_CASE("removal search respects its budget") {
  auto net = netcore::gen_braess(2);
  BraessOptions bo;
  bo.max_removal_size = 3;
  bo.budget = 10;
  CHECK_THROWS_AS((void)braess_ratio(net, bo), Error);
}
