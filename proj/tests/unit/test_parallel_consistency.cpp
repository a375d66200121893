// The OpenMP kernels must reproduce the serial reference bit for bit,
// counters included, at every parallelization level.

#include <memory>

#include <doctest.h>

#include "test_support.hpp"
#include "tvroute/harness.hpp"

using namespace tvroute;

namespace {

Scenario pool_scenario() {
  Scenario s;
  s.grid = {0.0, 7.5, -2.5, 2.5, 16, 11, 16};
  s.starts = {{0.5, -2.0}, {0.5, 2.0}};
  s.goal = {7.0, 2.0};
  s.variances_pct = {5.0};
  s.algorithms = {Algorithm::RTVE, Algorithm::RZAStarTVE};
  s.validate();
  return s;
}

}  // namespace

TEST_CASE("arrival grid kernel: serial and parallel agree exactly") {
  const FlowField field{JetParams{}};
  const TransitConfig cfg{};
  TestRng rng(97);
  for (int i = 0; i < 20; ++i) {
    const Vec2 a{rng.uniform(0.5, 5.0), rng.uniform(-1.5, 1.5)};
    const Vec2 b = a + Vec2{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    if (norm(b - a) < 1e-3) continue;
    const double lo = rng.uniform(0.0, 10.0);
    const CostInterval departure{lo, lo + rng.uniform(0.0, 4.0)};
    const UncertaintyDomain domain = uniform_domain(rng.uniform(0.0, 0.1));
    const std::vector<double> starts = departure_times(departure, cfg.tau);
    const std::vector<ParameterSet> sets = corner_sets(domain);

    const FlowField f_serial = field.with_counters(make_counter_block());
    const auto serial = detail::eval_arrival_grid_serial(a, b, starts, sets, f_serial, cfg);
    const FlowField f_parallel = field.with_counters(make_counter_block());
    const auto parallel =
        detail::eval_arrival_grid_parallel(a, b, starts, sets, f_parallel, cfg, 4);

    CHECK(serial.lo == parallel.lo);
    CHECK(serial.hi == parallel.hi);
    CHECK(serial.impassable == parallel.impassable);
    CHECK(f_serial.counters()->snapshot() == f_parallel.counters()->snapshot());
  }
}

TEST_CASE("search: edge-level parallelism changes nothing") {
  const Scenario s = pool_scenario();
  const PlanSetup setup(s);
  for (Algorithm a : {Algorithm::RTVE, Algorithm::RZAStarTVE}) {
    const FlowField f1 = setup.field.with_counters(make_counter_block());
    SearchConfig serial_cfg = make_search_config(s, setup, a, 5.0, 0.0);
    serial_cfg.exec.threads = 1;
    const SearchResult serial = search(setup.graph, f1, setup.start_ids[0], serial_cfg);

    const FlowField f2 = setup.field.with_counters(make_counter_block());
    SearchConfig parallel_cfg = serial_cfg;
    parallel_cfg.exec.threads = 4;
    const SearchResult parallel = search(setup.graph, f2, setup.start_ids[0], parallel_cfg);

    CHECK(serial.reached == parallel.reached);
    CHECK(serial.path == parallel.path);
    CHECK(serial.extraction_order == parallel.extraction_order);
    CHECK(serial.counters == parallel.counters);
    REQUIRE(serial.labels.size() == parallel.labels.size());
    for (std::size_t i = 0; i < serial.labels.size(); ++i) {
      CHECK(serial.labels[i].interval.lo == parallel.labels[i].interval.lo);
      CHECK(serial.labels[i].interval.hi == parallel.labels[i].interval.hi);
      CHECK(serial.labels[i].pred == parallel.labels[i].pred);
    }
  }
}

TEST_CASE("run pool: reports are byte-identical across worker counts") {
  const Scenario s = pool_scenario();
  RunReport one = run_bench(s, 1);
  RunReport four = run_bench(s, 4);
  for (RunRecord& r : one.runs) r.wall_ms = 0.0;
  for (RunRecord& r : four.runs) r.wall_ms = 0.0;
  CHECK(report_to_json(one) == report_to_json(four));
  CHECK(report_to_csv(one) == report_to_csv(four));
}

TEST_CASE("speed bound: serial and parallel agree exactly") {
  const FlowField field{JetParams{}};
  const Region region{0.0, 12.0, -4.0, 4.0};
  const double serial = max_speed_bound_serial(field, region, 0.0, 50.0, 32, 32, 8);
  const double parallel =
      max_speed_bound(field, region, 0.0, 50.0, ExecPolicy{4}, 32, 32, 8);
  CHECK(serial == parallel);
}
