#include <cmath>
#include <limits>
#include <memory>

#include <doctest.h>

#include "test_support.hpp"
#include "tvroute/transit.hpp"

using namespace tvroute;

namespace {

FlowField uniform_field(double u, double v) {
  GriddedField f;
  f.xs = {-100.0, 100.0};
  f.ys = {-100.0, 100.0};
  f.ts = {0.0};
  f.u.assign(4, u);
  f.v.assign(4, v);
  return FlowField(std::make_shared<const GriddedField>(std::move(f)));
}

}  // namespace

TEST_CASE("ground speed closed forms") {
  CHECK(*ground_speed({1, 0}, {0, 0}, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_FALSE(ground_speed({1, 0}, {0, 0.5}, 0.5).has_value());  // drift equals speed
  CHECK(*ground_speed({1, 0}, {0.1, 0}, 0.5) == doctest::Approx(0.6).epsilon(1e-15));
  // Strong opposing current: crabbing succeeds but the track loses ground.
  CHECK_FALSE(ground_speed({1, 0}, {-0.9, 0}, 0.5).has_value());
  // Oblique current, hand-computed: along 0.3, cross 0.2.
  const double expected = std::sqrt(0.25 - 0.04) + 0.3;
  CHECK(*ground_speed({1, 0}, {0.3, 0.2}, 0.5) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("edge transit time") {
  const TransitConfig cfg{};
  const ParameterSet nominal{};

  SUBCASE("still water") {
    const FlowField still = uniform_field(0.0, 0.0);
    CHECK(*edge_transit_time({0, 0}, {1, 0}, 0.0, still, nominal, cfg) ==
          doctest::Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("uniform along-track current, independent of n_seg") {
    const FlowField along = uniform_field(0.1, 0.0);
    double reference = 0.0;
    for (int n_seg : {1, 3, 8, 17}) {
      TransitConfig c = cfg;
      c.n_seg = n_seg;
      const double d = *edge_transit_time({0, 0}, {1, 0}, 5.0, along, nominal, c);
      CHECK(d == doctest::Approx(1.0 / 0.6).epsilon(1e-12));
      if (n_seg == 1) reference = d;
      CHECK(d == doctest::Approx(reference).epsilon(1e-12));
    }
  }
  SUBCASE("closed form for random constant currents") {
    TestRng rng(53);
    for (int i = 0; i < 50; ++i) {
      const double v_veh = rng.uniform(0.2, 1.0);
      const double along = rng.uniform(-0.5, 0.8) * v_veh;
      const double cross = rng.uniform(-0.9, 0.9) * v_veh;
      const double length = rng.uniform(0.1, 4.0);
      const double made_good = std::sqrt(v_veh * v_veh - cross * cross) + along;
      if (made_good <= 1e-6) continue;
      TransitConfig c = cfg;
      c.v_veh = v_veh;
      c.n_seg = rng.uniform_int(1, 12);
      const FlowField field = uniform_field(along, cross);  // edge runs east
      const auto d = edge_transit_time({0, 0}, {length, 0}, rng.uniform(0, 20), field,
                                       ParameterSet{}, c);
      REQUIRE(d.has_value());
      CHECK(*d == doctest::Approx(length / made_good).epsilon(1e-9));
    }
  }
  SUBCASE("impassable cross current") {
    const FlowField cross = uniform_field(0.0, 0.6);
    CHECK_FALSE(edge_transit_time({0, 0}, {1, 0}, 0.0, cross, nominal, cfg).has_value());
  }
  SUBCASE("nominal parameter set collapses to the plain computation") {
    const FlowField field{JetParams{}};
    ParameterSet zero_var{+1, -1, +1, 0.0, 0.0, 0.0};  // signs without variance
    const double a = *edge_transit_time({1, -1}, {2, 0}, 3.0, field, nominal, cfg);
    const double b = *edge_transit_time({1, -1}, {2, 0}, 3.0, field, zero_var, cfg);
    CHECK(a == b);
  }
  SUBCASE("counts one CFC and n_seg CMC") {
    const FlowField field{JetParams{}};
    const CallCounters before = field.counters()->snapshot();
    edge_transit_time({0, -3}, {1, -3}, 0.0, field, nominal, cfg);
    const CallCounters delta = field.counters()->snapshot() - before;
    CHECK(delta.cfc == 1);
    CHECK(delta.cmc == cfg.n_seg);
    CHECK(delta.rcfc == 0);
  }
}

TEST_CASE("departure time lists") {
  SUBCASE("degenerate interval keeps one start") {
    CHECK(departure_times({3.0, 3.0}, 0.5) == std::vector<double>{3.0});
  }
  SUBCASE("narrow interval keeps both ends") {
    CHECK(departure_times({0.0, 0.3}, 0.5) == std::vector<double>{0.0, 0.3});
  }
  SUBCASE("interior points keep spacing at or below tau") {
    TestRng rng(59);
    for (int i = 0; i < 100; ++i) {
      const double lo = rng.uniform(0.0, 10.0);
      const double width = rng.uniform(1e-6, 8.0);
      const double tau = rng.uniform(0.05, 1.0);
      const auto starts = departure_times({lo, lo + width}, tau);
      REQUIRE(starts.size() >= 2);
      CHECK(starts.front() == lo);
      CHECK(starts.back() == lo + width);
      for (std::size_t k = 1; k < starts.size(); ++k) {
        CHECK(starts[k] > starts[k - 1]);
        CHECK(starts[k] - starts[k - 1] <= tau * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("robust edge cost") {
  const TransitConfig cfg{};

  SUBCASE("zero variance, degenerate interval: identical to the plain transit") {
    const FlowField field{JetParams{}};
    const Vec2 a{0.5, -3.0}, b{0.7, -2.8};
    const double w = *edge_transit_time(a, b, 4.0, field, ParameterSet{}, cfg);
    const auto interval = robust_edge_cost(a, b, {4.0, 4.0}, field, UncertaintyDomain{}, cfg);
    REQUIRE(interval.has_value());
    CHECK(interval->lo == 4.0 + w);  // bitwise: same evaluation path
    CHECK(interval->hi == 4.0 + w);
  }
  SUBCASE("still water with an interval shifts both ends") {
    const FlowField still = uniform_field(0.0, 0.0);
    const auto interval =
        robust_edge_cost({0, 0}, {1, 0}, {0.0, 1.0}, still, UncertaintyDomain{}, cfg);
    REQUIRE(interval.has_value());
    CHECK(interval->lo == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(interval->hi == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("call accounting: exactly (m+2) * 2^a transits") {
    const FlowField field{JetParams{}};
    const CallCounters before = field.counters()->snapshot();
    // width < tau: two departures; three live axes: eight corner sets.
    const auto interval =
        robust_edge_cost({0.5, -3.0}, {0.7, -2.8}, {0.0, 0.4}, field, uniform_domain(0.05), cfg);
    REQUIRE(interval.has_value());
    const CallCounters delta = field.counters()->snapshot() - before;
    CHECK(delta.rcfc == 1);
    CHECK(delta.cfc == 16);
    CHECK(delta.cmc == 16 * cfg.n_seg);
  }
  SUBCASE("result is the min/max over the full evaluation grid") {
    const FlowField field{JetParams{}};
    const UncertaintyDomain domain = uniform_domain(0.05);
    TestRng rng(61);
    for (int i = 0; i < 25; ++i) {
      const Vec2 a{rng.uniform(0.5, 11.0), rng.uniform(-3.5, 3.5)};
      const Vec2 b = a + Vec2{rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)};
      if (norm(b - a) < 1e-3) continue;
      const double lo = rng.uniform(0.0, 10.0);
      const CostInterval departure{lo, lo + rng.uniform(0.0, 2.0)};
      const auto interval = robust_edge_cost(a, b, departure, field, domain, cfg);

      // Independent re-enumeration of the same grid.
      double best = std::numeric_limits<double>::infinity();
      double worst = -best;
      bool blocked = false;
      for (double start : departure_times(departure, cfg.tau)) {
        for (const ParameterSet& set : corner_sets(domain)) {
          const auto d = edge_transit_time(a, b, start, field, set, cfg);
          if (!d) {
            blocked = true;
            continue;
          }
          best = std::min(best, start + *d);
          worst = std::max(worst, start + *d);
        }
      }
      if (blocked) {
        CHECK_FALSE(interval.has_value());
      } else {
        REQUIRE(interval.has_value());
        CHECK(interval->lo == best);
        CHECK(interval->hi == worst);
        CHECK(interval->lo <= interval->hi);
        CHECK(interval->lo >= departure.lo);
      }
    }
  }
  SUBCASE("any impassable corner rejects the edge") {
    // Cross current of 0.48 is passable nominally but not at +10%.
    const FlowField cross = uniform_field(0.0, 0.48);
    CHECK(robust_edge_cost({0, 0}, {1, 0}, {0.0, 0.0}, cross, UncertaintyDomain{}, cfg)
              .has_value());
    CHECK_FALSE(robust_edge_cost({0, 0}, {1, 0}, {0.0, 0.0}, cross, uniform_domain(0.10), cfg)
                    .has_value());
  }
}

TEST_CASE("heuristic") {
  CHECK(heuristic_h({2, 3}, {2, 3}, 0.5, 1.0) == 0.0);
  CHECK(heuristic_h({0, 0}, {3, 0}, 0.5, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  // Never exceeds an achievable straight-line transit.
  const FlowField field{JetParams{}};
  const Region region{0.0, 12.0, -4.0, 4.0};
  const double bound = max_speed_bound(field, region, 0.0, 50.0);
  TestRng rng(67);
  const TransitConfig cfg{};
  for (int i = 0; i < 50; ++i) {
    const Vec2 a{rng.uniform(0.5, 11.5), rng.uniform(-3.5, 3.5)};
    const Vec2 b{rng.uniform(0.5, 11.5), rng.uniform(-3.5, 3.5)};
    if (norm(b - a) < 1e-3) continue;
    const auto d = edge_transit_time(a, b, rng.uniform(0.0, 30.0), field, ParameterSet{}, cfg);
    if (!d) continue;
    CHECK(heuristic_h(a, b, cfg.v_veh, bound) <= *d * (1.0 + 1e-12));
  }
}
