#include <sstream>

#include <doctest.h>

#include "tvroute/scenario.hpp"

using namespace tvroute;

namespace {

const char* kReferenceConfig = R"cfg(
# built-in jet benchmark
[provider]
type = jet

[grid]
x_min = 0
x_max = 12
y_min = -4
y_max = 4
nx = 61
ny = 41
neighborhood = 16

[mission]
starts = 0.5 -3  0.5 0  0.5 3  3 -3  6 -3
goal = 11 3
t0 = 0

[uncertainty]
variances = 5

[search]
algorithms = RTVE RA*TVE RZTVE RZA*TVE
)cfg";

}  // namespace

TEST_CASE("algorithm taxonomy") {
  CHECK(parse_algorithm("RZA*TVE") == Algorithm::RZAStarTVE);
  CHECK(parse_algorithm("A*TVE") == Algorithm::AStarTVE);
  CHECK_FALSE(parse_algorithm("dijkstra").has_value());
  for (Algorithm a : kAllAlgorithms) {
    CHECK(parse_algorithm(algorithm_name(a)) == a);
    CHECK_FALSE(is_robust(non_robust_twin(a)));
    CHECK(has_gating(non_robust_twin(a)) == has_gating(a));
    CHECK(has_heuristic(non_robust_twin(a)) == has_heuristic(a));
  }
  CHECK(is_robust(Algorithm::RTVE));
  CHECK_FALSE(is_robust(Algorithm::ZAStarTVE));
  CHECK(has_gating(Algorithm::RZTVE));
  CHECK_FALSE(has_gating(Algorithm::RAStarTVE));
}

TEST_CASE("scenario parsing") {
  SUBCASE("reference config matches the built-in scenario") {
    std::istringstream in(kReferenceConfig);
    const Scenario parsed = parse_scenario(in, "ref.cfg");
    const Scenario builtin = reference_scenario();
    CHECK(parsed.grid.nx == builtin.grid.nx);
    CHECK(parsed.grid.ny == builtin.grid.ny);
    CHECK(parsed.grid.neighborhood == builtin.grid.neighborhood);
    CHECK(parsed.starts.size() == builtin.starts.size());
    for (std::size_t i = 0; i < parsed.starts.size(); ++i)
      CHECK(parsed.starts[i] == builtin.starts[i]);
    CHECK(parsed.goal == builtin.goal);
    CHECK(parsed.variances_pct == builtin.variances_pct);
    CHECK(parsed.algorithms == builtin.algorithms);
    CHECK(parsed.transit.n_seg == builtin.transit.n_seg);
    CHECK(parsed.transit.tau == builtin.transit.tau);
    CHECK(parsed.transit.v_veh == builtin.transit.v_veh);
    CHECK(parsed.delta_phi_max == builtin.delta_phi_max);
  }
  SUBCASE("defaults fill optional sections") {
    std::istringstream in(
        "[grid]\nx_min=0\nx_max=2\ny_min=0\ny_max=2\nnx=3\nny=3\n"
        "[mission]\nstarts = 0 0\ngoal = 2 2\n");
    const Scenario s = parse_scenario(in);
    CHECK(s.provider.kind == ProviderSpec::Kind::Jet);
    CHECK(s.provider.jet.b0 == 1.2);
    CHECK(s.transit.n_seg == 8);
    CHECK(s.variances_pct == std::vector<double>{0.0});
    CHECK(s.algorithms == std::vector<Algorithm>{Algorithm::RTVE});
    CHECK(s.workers == 1);
  }
  SUBCASE("errors carry the file and line") {
    std::istringstream bad("[grid]\nnx = banana\n");
    try {
      parse_scenario(bad, "s.cfg");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      CHECK(what.find("s.cfg:2") != std::string::npos);
      CHECK(what.find("grid.nx") != std::string::npos);
    }
  }
  SUBCASE("unknown keys are rejected") {
    std::istringstream bad(
        "[grid]\nx_min=0\nx_max=2\ny_min=0\ny_max=2\nnx=3\nny=3\ntypo=1\n"
        "[mission]\nstarts = 0 0\ngoal = 2 2\n");
    CHECK_THROWS_AS(parse_scenario(bad), ConfigError);
  }
  SUBCASE("unknown algorithm names are rejected") {
    std::istringstream bad(
        "[grid]\nx_min=0\nx_max=2\ny_min=0\ny_max=2\nnx=3\nny=3\n"
        "[mission]\nstarts = 0 0\ngoal = 2 2\n[search]\nalgorithms = BFS\n");
    CHECK_THROWS_AS(parse_scenario(bad), ConfigError);
  }
  SUBCASE("start outside the region is rejected") {
    std::istringstream bad(
        "[grid]\nx_min=0\nx_max=2\ny_min=0\ny_max=2\nnx=3\nny=3\n"
        "[mission]\nstarts = 5 0\ngoal = 2 2\n");
    CHECK_THROWS_AS(parse_scenario(bad), ConfigError);
  }
  SUBCASE("odd start coordinate count is rejected") {
    std::istringstream bad(
        "[grid]\nx_min=0\nx_max=2\ny_min=0\ny_max=2\nnx=3\nny=3\n"
        "[mission]\nstarts = 0 0 1\ngoal = 2 2\n");
    CHECK_THROWS_AS(parse_scenario(bad), ConfigError);
  }
  SUBCASE("gridded provider requires a file") {
    std::istringstream bad(
        "[provider]\ntype = gridded\n"
        "[grid]\nx_min=0\nx_max=2\ny_min=0\ny_max=2\nnx=3\nny=3\n"
        "[mission]\nstarts = 0 0\ngoal = 2 2\n");
    CHECK_THROWS_AS(parse_scenario(bad), ConfigError);
  }
}
