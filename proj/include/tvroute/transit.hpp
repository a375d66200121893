#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tvroute/exec.hpp"
#include "tvroute/flow_field.hpp"
#include "tvroute/geometry.hpp"
#include "tvroute/uncertainty.hpp"

namespace tvroute {

/// Arrival-time bounds [lo, hi] at a vertex, absolute dimensionless times.
struct CostInterval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool degenerate() const { return lo == hi; }
  bool operator==(const CostInterval&) const = default;
};

struct TransitConfig {
  int n_seg = 8;        // sub-segments per edge
  double tau = 0.5;     // max departure spacing before interior starts are added
  double v_veh = 0.5;   // nominal vehicle speed through water

  void validate() const;
};

/// Speed made good along a unit edge direction while crabbing against the
/// cross-track current. nullopt means the edge cannot be held (impassable).
std::optional<double> ground_speed(Vec2 edge_dir, FlowSample current, double v_veh);

/// Travel time along the straight edge from `from` to `to` departing at
/// t_start, under the given corner parameter set. Integrates n_seg
/// sub-segments with midpoint flow sampling. Counts one CFC and one CMC per
/// sampled sub-segment.
std::optional<double> edge_transit_time(Vec2 from, Vec2 to, double t_start,
                                        const FlowField& field, const ParameterSet& set,
                                        const TransitConfig& cfg);

/// Departure times evaluated for an interval: both ends plus uniformly spaced
/// interior points so that adjacent starts differ by at most tau. A degenerate
/// interval yields the single start.
std::vector<double> departure_times(const CostInterval& interval, double tau);

namespace detail {

/// Min/max arrival over the (departure time x parameter set) grid; impassable
/// if any single evaluation is. Every grid point is always evaluated so the
/// serial and parallel routes make identical flow queries.
struct GridReduction {
  double lo = 0.0;
  double hi = 0.0;
  bool impassable = false;
};

GridReduction eval_arrival_grid_serial(Vec2 from, Vec2 to, std::span<const double> starts,
                                       std::span<const ParameterSet> sets,
                                       const FlowField& field, const TransitConfig& cfg);

GridReduction eval_arrival_grid_parallel(Vec2 from, Vec2 to, std::span<const double> starts,
                                         std::span<const ParameterSet> sets,
                                         const FlowField& field, const TransitConfig& cfg,
                                         int threads);

}  // namespace detail

/// Robust edge cost: maps the departure interval at `from` to the arrival
/// interval at `to` by evaluating the transit over every (departure, corner
/// set) pair. Counts one RCFC. nullopt if any evaluation is impassable.
std::optional<CostInterval> robust_edge_cost(Vec2 from, Vec2 to, const CostInterval& departure,
                                             const FlowField& field,
                                             const UncertaintyDomain& domain,
                                             const TransitConfig& cfg,
                                             const ExecPolicy& exec = {});

/// Admissible remaining-time estimate: straight-line distance over the best
/// conceivable ground speed.
double heuristic_h(Vec2 p, Vec2 goal, double v_veh, double v_c_max);

}  // namespace tvroute
