#include "dynq/netcore.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "test_util.hpp"

using namespace dynq;
using namespace dynq::netcore;

using testutil::dfs_max_flow;
using testutil::random_valid_network;

TEST_CASE("validate accepts the bundled instances") {
  CHECK(validate(gen_example(ExampleName::wheatstone)).empty());
  CHECK(validate(gen_example(ExampleName::fig2)).empty());
  CHECK(validate(gen_example(ExampleName::fig3)).empty());
  CHECK(validate(gen_example(ExampleName::seasonal_two_edge)).empty());

  Network single;
  single.source = single.add_vertex("s");
  single.destination = single.add_vertex("d");
  single.add_edge("e", "s", "d", 3, 1);
  CHECK(validate(single).empty());
}

TEST_CASE("validate reports structured violations") {
  Network net;
  net.source = net.add_vertex("s");
  net.destination = net.add_vertex("d");
  net.add_vertex("u");  // isolated
  net.add_edge("e", "s", "d", 1, 1);
  auto vs = validate(net);
  REQUIRE(vs.size() == 2);
  CHECK(vs[0].kind == Violation::UnreachableVertex);
  CHECK(vs[1].kind == Violation::DeadEndVertex);
  CHECK(vs[0].describe(net) == "UnreachableVertex(u)");

  Network back;
  back.source = back.add_vertex("s");
  back.destination = back.add_vertex("d");
  back.add_edge("e1", "s", "d", 1, 1);
  back.add_edge("e2", "d", "s", 1, 1);
  auto vs2 = validate(back);
  bool has_incoming = false, has_outgoing = false;
  for (const auto& v : vs2) {
    has_incoming |= v.kind == Violation::SourceHasIncoming;
    has_outgoing |= v.kind == Violation::DestHasOutgoing;
  }
  CHECK(has_incoming);
  CHECK(has_outgoing);
}

TEST_CASE("route enumeration: counts and order") {
  auto fig2 = gen_example(ExampleName::fig2);
  auto rs = enumerate_routes(fig2);
  CHECK(rs.size() == 6);  // 3 x 2 choices

  auto ws = gen_example(ExampleName::wheatstone);
  auto wr = enumerate_routes(ws);
  REQUIRE(wr.size() == 3);
  CHECK(route_id(ws, wr[0]) == "e1,e3,e5");
  CHECK(route_id(ws, wr[1]) == "e1,e4");
  CHECK(route_id(ws, wr[2]) == "e2,e5");

  Network single;
  single.source = single.add_vertex("s");
  single.destination = single.add_vertex("d");
  single.add_edge("e", "s", "d", 3, 1);
  CHECK(enumerate_routes(single).size() == 1);

  SUBCASE("explosion guard") {
    RouteLimits tight;
    tight.max_routes = 5;
    CHECK_THROWS_AS((void)enumerate_routes(fig2, tight), Error);
  }
}

TEST_CASE("routes are simple, duplicate-free and stable") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    auto net = random_valid_network(rng);
    auto rs = enumerate_routes(net);
    auto rs2 = enumerate_routes(net);
    CHECK(rs == rs2);
    std::set<std::vector<int>> seen;
    for (const auto& r : rs) {
      CHECK(seen.insert(r.edges).second);
      auto vs = route_vertices(net, r);
      std::set<int> uniq(vs.begin(), vs.end());
      CHECK(uniq.size() == vs.size());
      CHECK(vs.front() == net.source);
      CHECK(vs.back() == net.destination);
    }
    CHECK(std::is_sorted(rs.begin(), rs.end()));
  }
}

TEST_CASE("min cut values on the bundled instances") {
  CHECK(min_cut(gen_example(ExampleName::wheatstone)).capacity == 2);

  auto fig3 = gen_example(ExampleName::fig3);
  auto cut = min_cut(fig3);
  CHECK(cut.capacity == 3);
  std::set<int> e1e4{fig3.edge_index("e1"), fig3.edge_index("e4")};
  std::set<int> e2e3e4{fig3.edge_index("e2"), fig3.edge_index("e3"), fig3.edge_index("e4")};
  CHECK((cut.cut_edges == e1e4 || cut.cut_edges == e2e3e4));

  auto pigou = gen_pigou(2, 1);
  CHECK(min_cut(pigou).capacity == 3);  // sum of the parallel capacities
}

TEST_CASE("max-flow/min-cut duality on generators and random instances") {
  for (int k = 1; k <= 4; ++k) {
    auto net = gen_braess(k);
    auto cut = min_cut(net);
    CHECK(cut.capacity == k + 1);
    CHECK(cut.capacity == dfs_max_flow(net));
  }
  for (long long n = 2; n <= 3; ++n)
    for (long long p = 1; p <= 2; ++p) {
      auto net = gen_pigou(n, p);
      CHECK(min_cut(net).capacity == dfs_max_flow(net));
    }
  std::mt19937 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    auto net = random_valid_network(rng);
    auto cut = min_cut(net);
    CHECK(cut.capacity == dfs_max_flow(net));
    // every route crosses the cut
    for (const auto& r : enumerate_routes(net)) {
      bool hit = false;
      for (int e : r.edges) hit |= cut.cut_edges.count(e) > 0;
      CHECK(hit);
    }
  }
}

TEST_CASE("classify tags the bundled topologies") {
  CHECK(classify(gen_example(ExampleName::seasonal_two_edge)).kind == Topology::Parallel);
  CHECK(classify(gen_pigou(2, 2)).kind == Topology::Parallel);

  auto fig2 = classify(gen_example(ExampleName::fig2));
  REQUIRE(fig2.kind == Topology::ChainOfParallel);
  REQUIRE(fig2.chain.has_value());
  REQUIRE(fig2.chain->modules.size() == 2);
  CHECK(fig2.chain->modules[0].size() == 3);
  CHECK(fig2.chain->modules[1].size() == 2);

  CHECK(classify(gen_example(ExampleName::fig3)).kind == Topology::SeriesParallel);
  CHECK(classify(gen_example(ExampleName::wheatstone)).kind == Topology::General);
  for (int k = 1; k <= 3; ++k) CHECK(classify(gen_braess(k)).kind == Topology::General);
}

TEST_CASE("braess ladder generator shape") {
  auto net = gen_braess(3);
  CHECK(net.vertices.size() == 8);
  CHECK(net.edges.size() == 13);  // 3k + (k-1) + 2 with k=3
  CHECK(min_cut(net).capacity == 4);

  auto n1 = gen_braess(1);
  CHECK(n1.vertices.size() == 4);
  CHECK(n1.edges.size() == 5);
  auto rs = enumerate_routes(n1);
  CHECK(rs.size() == 3);

  CHECK(gen_braess(2).vertices.size() == 6);
  CHECK(min_cut(gen_braess(2)).capacity == 3);
}

TEST_CASE("pigou generator") {
  auto net = gen_pigou(3, 2);
  REQUIRE(net.edges.size() == 2);
  CHECK(net.edges[0].transit == 1);
  CHECK(net.edges[0].capacity == 9);
  CHECK(net.edges[1].transit == 3);
  CHECK(net.edges[1].capacity == 1);
  CHECK(min_cut(gen_pigou(2, 2)).capacity == 5);

  CHECK_THROWS_AS((void)gen_pigou(10, 40), Error);  // overflow guard
}

TEST_CASE("fig3 and wheatstone carry their defining labels") {
  auto fig3 = gen_example(ExampleName::fig3);
  REQUIRE(fig3.edges.size() == 4);
  CHECK(fig3.edges[0].transit == 0);
  CHECK(fig3.edges[0].capacity == 2);
  CHECK(fig3.edges[1].transit == 0);
  CHECK(fig3.edges[2].transit == 1);
  CHECK(fig3.edges[3].transit == 1);

  auto ws = gen_example(ExampleName::wheatstone);
  REQUIRE(ws.edges.size() == 5);
  long long taus[] = {0, 1, 0, 1, 0};
  for (int i = 0; i < 5; ++i) {
    CHECK(ws.edges[(size_t)i].transit == taus[i]);
    CHECK(ws.edges[(size_t)i].capacity == 1);
  }

  auto two = gen_example(ExampleName::seasonal_two_edge);
  CHECK(two.edges[0].transit == 1);
  CHECK(two.edges[1].transit == 2);
}

TEST_CASE("network text format round-trips") {
  auto net = gen_example(ExampleName::fig3);
  net.initial_queues[net.edge_index("e2")] = 1;
  std::string text = emit_network(net);
  std::istringstream in(text);
  auto parsed = parse_network(in, "fig3.net");
  CHECK(emit_network(parsed) == text);
  CHECK(parsed.initial_queue(parsed.edge_index("e2")) == 1);
}

TEST_CASE("network parser rejects malformed input with line numbers") {
  auto expect_error = [](const std::string& text, const std::string& fragment) {
    std::istringstream in(text);
    try {
      (void)parse_network(in, "bad.net");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };
  expect_error("vertex s\nvertex s\n", "bad.net:2");
  expect_error("vertex s\nfrobnicate x\n", "unknown directive");
  expect_error("vertex s\nvertex d\nedge e s d tau=1 gamma=0\nsource s\ndest d\n", "gamma");
  expect_error("vertex s\nvertex d\nedge e s d tau=1 gamma=1\nsource s\n", "missing 'dest'");
  expect_error("vertex s\nvertex d\nedge e s d tau=x gamma=1\nsource s\ndest d\n", "bad unsigned");
}
