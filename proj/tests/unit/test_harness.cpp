#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "test_support.hpp"
#include "tvroute/harness.hpp"

using namespace tvroute;

namespace {

// Compact jet scenario so harness-level tests stay fast; knight-move edges
// keep the jet crossing feasible under perturbation.
Scenario small_scenario() {
  Scenario s;
  s.grid = {0.0, 7.5, -2.5, 2.5, 16, 11, 16};
  s.starts = {{0.5, -2.0}, {0.5, 2.0}};
  s.goal = {7.0, 2.0};
  s.variances_pct = {5.0};
  s.algorithms = {Algorithm::RTVE, Algorithm::RAStarTVE};
  s.validate();
  return s;
}

// Zero-current gridded field on disk; also exercises the file provider path.
Scenario still_water_scenario() {
  const std::string path =
      (std::filesystem::temp_directory_path() / "tvroute_test_zero_field.txt").string();
  {
    GriddedField f;
    f.xs = {-10.0, 10.0};
    f.ys = {-10.0, 10.0};
    f.ts = {0.0};
    f.u.assign(4, 0.0);
    f.v.assign(4, 0.0);
    std::ofstream out(path);
    write_gridded_field(out, f);
  }
  Scenario s = small_scenario();
  s.provider.kind = ProviderSpec::Kind::Gridded;
  s.provider.gridded_file = path;
  s.variances_pct = {0.0};
  s.algorithms = {Algorithm::TVE};
  return s;
}

}  // namespace

TEST_CASE("round_sig") {
  CHECK(round_sig(2.0000000000000004) == 2.0);
  CHECK(round_sig(1.0 / 3.0) == 0.333333333333);
  CHECK(std::isinf(round_sig(std::numeric_limits<double>::infinity())));
}

TEST_CASE("run_plan") {
  const Scenario s = small_scenario();
  SUBCASE("zero variance: robust run retraces the non-robust path") {
    const RunRecord robust = run_plan(s, Algorithm::RTVE, 0, 0.0);
    const RunRecord plain = run_plan(s, Algorithm::TVE, 0, 0.0);
    REQUIRE(robust.reached);
    REQUIRE(plain.reached);
    REQUIRE(robust.path.size() == plain.path.size());
    for (std::size_t i = 0; i < robust.path.size(); ++i)
      CHECK(robust.path[i] == plain.path[i]);
    CHECK(robust.intervals.back().hi == plain.intervals.back().hi);
    for (const CostInterval& iv : robust.intervals) CHECK(iv.lo == iv.hi);
  }
  SUBCASE("5% variance: goal interval widens") {
    const RunRecord rec = run_plan(s, Algorithm::RTVE, 0, 5.0);
    REQUIRE(rec.reached);
    CHECK(rec.intervals.back().width() > 0.0);
    CHECK(rec.counters.rcfc > 0);
    CHECK(rec.counters.cfc > rec.counters.rcfc);
    CHECK(rec.counters.cmc == rec.counters.cfc * s.transit.n_seg);
  }
}

TEST_CASE("run_bench") {
  const Scenario s = small_scenario();
  SUBCASE("single algorithm and start equals run_plan") {
    Scenario single = s;
    single.algorithms = {Algorithm::RAStarTVE};
    single.starts = {s.starts[0]};
    const RunReport rep = run_bench(single, 1);
    REQUIRE(rep.runs.size() == 1);
    const RunRecord direct = run_plan(single, Algorithm::RAStarTVE, 0, 5.0);
    CHECK(rep.runs[0].reached == direct.reached);
    CHECK(rep.runs[0].intervals == direct.intervals);
    CHECK(rep.runs[0].counters == direct.counters);
  }
  SUBCASE("records are ordered algorithm-major, start-minor") {
    const RunReport rep = run_bench(s, 1);
    REQUIRE(rep.runs.size() == 4);
    CHECK(rep.runs[0].algorithm == Algorithm::RTVE);
    CHECK(rep.runs[0].start_index == 0);
    CHECK(rep.runs[1].algorithm == Algorithm::RTVE);
    CHECK(rep.runs[1].start_index == 1);
    CHECK(rep.runs[2].algorithm == Algorithm::RAStarTVE);
    CHECK(rep.runs[3].algorithm == Algorithm::RAStarTVE);
    const std::string table = format_counter_table(rep);
    CHECK(table.find("RTVE") != std::string::npos);
    CHECK(table.find("SP2") != std::string::npos);
  }
}

TEST_CASE("variance sweep widens intervals monotonically") {
  Scenario s = small_scenario();
  s.algorithms = {Algorithm::RTVE};
  s.starts = {{0.5, -1.5}};
  s.variances_pct = {0.0, 2.5, 5.0};
  const RunReport rep = run_variance_sweep(s, 1);
  REQUIRE(rep.runs.size() == 3);
  CHECK(rep.runs[0].variance_pct == 0.0);
  REQUIRE(rep.runs[0].reached);
  CHECK(rep.runs[0].intervals.back().width() == 0.0);
  double prev = -1.0;
  for (const RunRecord& rec : rep.runs) {
    REQUIRE(rec.reached);
    CHECK(rec.intervals.back().width() > prev);
    prev = rec.intervals.back().width();
  }
}

TEST_CASE("departure sweep") {
  SUBCASE("still water: duration independent of departure time") {
    const Scenario s = still_water_scenario();
    const std::vector<double> t0s{0.0, 2.0, 5.0, 9.0};
    const RunReport rep = run_departure_sweep(s, t0s, 1);
    REQUIRE(rep.runs.size() == 4);
    REQUIRE(rep.departure_curve.size() == 4);
    const double d0 = rep.departure_curve[0].second - rep.departure_curve[0].first;
    for (const auto& [t0, arrival] : rep.departure_curve)
      CHECK(arrival - t0 == doctest::Approx(d0).epsilon(1e-9));
    REQUIRE(rep.argmin_t0.has_value());
  }
  SUBCASE("single t0 equals run_plan") {
    Scenario s = small_scenario();
    s.algorithms = {Algorithm::RAStarTVE};
    const RunReport rep = run_departure_sweep(s, {0.0}, 1);
    REQUIRE(rep.runs.size() == 1);
    const RunRecord direct = run_plan(s, Algorithm::RAStarTVE, 0, 5.0);
    CHECK(rep.runs[0].intervals == direct.intervals);
    CHECK(rep.argmin_t0 == 0.0);
  }
  SUBCASE("jet field: duration varies with departure, argmin is stable") {
    Scenario s = small_scenario();
    s.algorithms = {Algorithm::RAStarTVE};
    std::vector<double> t0s;
    for (int i = 0; i < 8; ++i) t0s.push_back(2.0 * kPi / 0.4 * i / 8.0);
    const RunReport one = run_departure_sweep(s, t0s, 1);
    const RunReport four = run_departure_sweep(s, t0s, 4);
    REQUIRE(one.argmin_t0.has_value());
    CHECK(one.argmin_t0 == four.argmin_t0);
    double lo = 1e300, hi = -1e300;
    for (const auto& [t0, arrival] : one.departure_curve) {
      lo = std::min(lo, arrival - t0);
      hi = std::max(hi, arrival - t0);
    }
    CHECK(hi - lo > 1e-6);
  }
}

TEST_CASE("oracle check on trivial and random instances") {
  const OracleReport rep = run_oracle_check(25, 9);
  CHECK(rep.cases == 25);
  CHECK(rep.max_deviation < 1e-9);
  CHECK(rep.max_astar_deviation < 1e-9);
  CHECK_THROWS_AS(run_oracle_check(1, 16), ConfigError);
}

TEST_CASE("fifo audit runs and reports") {
  Scenario s = small_scenario();
  const FifoAuditReport rep = fifo_audit(s, 200, 0x5eed);
  CHECK(rep.sampled == 200);
  CHECK(rep.comparable > 0);
  CHECK(rep.violations <= rep.comparable);
}

TEST_CASE("emit_field") {
  Scenario s = small_scenario();
  SUBCASE("density 2, one time: exactly 4 rows") {
    std::ostringstream out;
    emit_field(s, {0.0}, 2, out);
    std::istringstream in(out.str());
    std::string line;
    int rows = 0;
    REQUIRE(std::getline(in, line));
    CHECK(line == "x,y,t,u,v");
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);
  }
  SUBCASE("values match direct sampling and respect the speed bound") {
    std::ostringstream out;
    emit_field(s, {0.0, 3.0}, 9, out);
    const FlowField field{JetParams{}};
    const double bound =
        max_speed_bound(field, s.grid.region(), 0.0, 3.0, ExecPolicy{}, 64, 64, 8);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    std::string line;
    int checked = 0;
    while (std::getline(in, line)) {
      double x, y, t, u, v;
      REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &x, &y, &t, &u, &v) == 5);
      const FlowSample direct = field.sample(x, y, t);
      CHECK(u == doctest::Approx(direct.u).epsilon(1e-9));
      CHECK(v == doctest::Approx(direct.v).epsilon(1e-9));
      CHECK(std::hypot(u, v) <= bound);
      ++checked;
    }
    CHECK(checked == 2 * 9 * 9);
  }
}

TEST_CASE("report serialization") {
  Scenario s = small_scenario();
  s.algorithms = {Algorithm::RAStarTVE};
  s.starts = {{0.5, -1.5}};
  const RunReport rep = run_bench(s, 1);

  SUBCASE("json carries the stable schema") {
    const nlohmann::json doc = nlohmann::json::parse(report_to_json(rep));
    REQUIRE(doc.contains("scenario"));
    REQUIRE(doc.contains("runs"));
    REQUIRE(doc["runs"].size() == 1);
    const auto& run = doc["runs"][0];
    for (const char* key :
         {"algorithm", "start_index", "variance_pct", "t0", "reached", "path", "intervals",
          "counters", "wall_ms"})
      CHECK(run.contains(key));
    CHECK(run["algorithm"] == "RA*TVE");
    CHECK(run["counters"].contains("rcfc"));
    CHECK(run["counters"].contains("cfc"));
    CHECK(run["counters"].contains("cmc"));
    CHECK(doc["scenario"]["grid"]["nx"] == 16);
    // One interval pair per path waypoint.
    CHECK(run["path"].size() == run["intervals"].size());
  }
  SUBCASE("csv has one row per run") {
    const std::string csv = report_to_csv(rep);
    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line ==
          "algorithm,start_index,variance_pct,t0,reached,goal_lo,goal_hi,rcfc,cfc,cmc,wall_ms");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 1);
  }
}
