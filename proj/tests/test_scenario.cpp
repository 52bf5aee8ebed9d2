#include "dynq/scenario.hpp"

#include <sstream>

#include "doctest.h"
#include "dynq/reproduce.hpp"

using namespace dynq;
using namespace dynq::shell;

namespace {

const char* kFig3Scenario = R"(network fig3
vertex s
vertex v
vertex d
edge e1 s v tau=0 gamma=2
edge e2 v d tau=0 gamma=1
edge e3 v d tau=1 gamma=1
edge e4 s d tau=1 gamma=1
source s
dest d
inflow uniform 3
horizon 40
)";

}  // namespace

TEST_CASE("scenario files parse to the matching generated instance") {
  std::istringstream in(kFig3Scenario);
  auto sc = parse_scenario(in, "fig3.scn");
  auto want = netcore::gen_example(netcore::ExampleName::fig3);
  REQUIRE(sc.network.edges.size() == want.edges.size());
  for (size_t e = 0; e < want.edges.size(); ++e) {
    CHECK(sc.network.edges[e].id == want.edges[e].id);
    CHECK(sc.network.edges[e].transit == want.edges[e].transit);
    CHECK(sc.network.edges[e].capacity == want.edges[e].capacity);
  }
  CHECK(sc.network.source == want.source);
  CHECK(sc.network.destination == want.destination);
  REQUIRE(sc.inflow.has_value());
  CHECK_FALSE(sc.inflow->is_periodic());
  CHECK(sc.inflow->at(1) == 3);
  CHECK(sc.horizon == 40);
  CHECK(cross_validate(sc).empty());
}

TEST_CASE("scenario emit/parse round-trips byte for byte") {
  std::istringstream in(kFig3Scenario);
  auto sc = parse_scenario(in, "fig3.scn");
  std::string text = emit_scenario(sc);
  std::istringstream again(text);
  auto sc2 = parse_scenario(again, "fig3.scn");
  CHECK(emit_scenario(sc2) == text);
}

TEST_CASE("periodic inflow directive") {
  std::string text = R"(network two
vertex s
vertex d
edge e1 s d tau=1 gamma=1
edge e2 s d tau=2 gamma=1
source s
dest d
inflow periodic 6 0 0
)";
  std::istringstream in(text);
  auto sc = parse_scenario(in, "two.scn");
  REQUIRE(sc.inflow.has_value());
  CHECK(sc.inflow->is_periodic());
  CHECK(sc.inflow->period() == 3);
  CHECK(sc.inflow->values() == std::vector<long long>{6, 0, 0});
  CHECK(cross_validate(sc).empty());  // average 2 equals the capacity
}

TEST_CASE("scenario errors carry file and line") {
  auto expect_error = [](const std::string& text, const std::string& fragment) {
    std::istringstream in(text);
    try {
      (void)parse_scenario(in, "bad.scn");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      INFO(e.what());
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };
  expect_error("vertex s\nvertex d\nedge e s d tau=1 gamma=1\nsource s\n", "missing 'dest'");
  expect_error("vertex s\ninflow sometimes 3\n", "bad.scn:2");
  expect_error("vertex s\nhorizon 0\n", "horizon must be >= 1");
  expect_error("vertex s\nvertex d\nedge e s d tau=1 gamma=1\nsource s\ndest d\n"
               "inflow uniform 1\ninflow uniform 2\n",
               "duplicate 'inflow'");
}

TEST_CASE("over-capacity inflow draws a warning") {
  std::string text = R"(network one
vertex s
vertex d
edge e s d tau=1 gamma=1
source s
dest d
inflow uniform 2
)";
  std::istringstream in(text);
  auto sc = parse_scenario(in, "one.scn");
  CHECK(cross_validate(sc).find("diverge") != std::string::npos);
}

TEST_CASE("reproduce registry covers every bundled pipeline and passes") {
  auto names = reproduce_names();
  CHECK(names.size() == 10);  // 9 pipelines + "all"
  for (const auto& report : run_reproduce("all")) {
    INFO(report.name);
    CHECK(report.all_ok());
  }
  CHECK_THROWS_AS((void)run_reproduce("nonsense"), Error);
}

TEST_CASE("bundled scenario files load and match their generators") {
  struct Row {
    const char* path;
    netcore::ExampleName name;
  };
  const Row rows[] = {
      {"scenarios/wheatstone.scn", netcore::ExampleName::wheatstone},
      {"scenarios/series-parallel.scn", netcore::ExampleName::fig3},
      {"scenarios/seasonal-burst.scn", netcore::ExampleName::seasonal_two_edge},
      {"scenarios/two-module-chain.scn", netcore::ExampleName::fig2},
  };
  for (const auto& row : rows) {
    auto sc = parse_scenario_file(std::string(DYNQ_SOURCE_DIR) + "/" + row.path);
    auto want = netcore::gen_example(row.name);
    CHECK(netcore::emit_network(sc.network) == netcore::emit_network(want));
    CHECK(cross_validate(sc).empty());
  }
}
