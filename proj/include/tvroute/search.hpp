#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "tvroute/exec.hpp"
#include "tvroute/flow_field.hpp"
#include "tvroute/grid_graph.hpp"
#include "tvroute/transit.hpp"
#include "tvroute/uncertainty.hpp"

namespace tvroute {

enum class Color : std::uint8_t { White, Gray, Black };

/// Search state of one vertex. Unreached vertices carry [+inf, +inf] and no
/// predecessor; in non-robust mode the interval stays degenerate.
struct VertexLabel {
  Color color = Color::White;
  CostInterval interval{std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity()};
  double f = std::numeric_limits<double>::infinity();
  std::int32_t pred = -1;
  std::uint64_t queue_seq = 0;  // latest queue insertion, for stale-entry skipping
};

/// Feature switches composing the eight algorithm variants: robust interval
/// propagation, goal heuristic (early exit on goal extraction), and
/// optimal-direction successor gating.
struct SearchConfig {
  bool robust = false;
  bool heuristic = false;
  bool gating = false;
  double delta_phi_max = kPi / 4.0;
  int goal = -1;  // required when heuristic or gating is set
  double t0 = 0.0;
  UncertaintyDomain uncertainty;
  TransitConfig transit;
  // Heuristic denominator terms; callers pass the best achievable vehicle
  // speed and current bound so h stays admissible under perturbation.
  double h_v_veh = 0.5;
  double h_v_c_max = 0.0;
  ExecPolicy exec;
};

struct SearchResult {
  std::vector<VertexLabel> labels;
  bool reached = false;
  std::vector<std::int32_t> path;             // start..goal vertex ids, empty if unreached
  std::vector<CostInterval> path_intervals;   // aligned with path
  CallCounters counters;                      // evaluation effort of this search
  std::vector<std::int32_t> extraction_order; // finalized vertices, in order
  int black_reopens = 0;                      // finalized vertices later relabeled (FIFO breach)
};

/// Direction of the p_from -> p_to ground track, in (-pi, pi].
double calc_path_dir(Vec2 p_from, Vec2 p_to);

/// True iff the wrapped absolute difference of the two angles is below tol.
bool angle_within(double a, double b, double tol);

struct OptDirection {
  double angle = 0.0;
  bool degenerate = false;  // crab infeasible at departure; angle is the edge direction
};

/// Outgoing ground-track direction a time-optimal steering policy would have
/// at p_u after traversing p_pred -> p_u over [t_depart, t_arrive]: the crab
/// heading at departure evolved by the optimal-steering heading rate
///   dtheta/dt = sin^2(theta) dv/dx + sin(theta)cos(theta)(du/dx - dv/dy)
///               - cos^2(theta) du/dy
/// with explicit Euler over cfg.n_seg sub-segments.
OptDirection calc_opt_dir(Vec2 p_pred, Vec2 p_u, double t_depart, double t_arrive,
                          const FlowField& field, const ParameterSet& set,
                          const TransitConfig& cfg);

struct OptDirectionSet {
  std::vector<double> angles;
  bool degenerate = false;  // any combination fell back to the edge direction
};

/// calc_opt_dir for every (corner set, boundary-time pair) combination, the
/// pairs being (pred.lo -> u.lo) and (pred.hi -> u.hi).
OptDirectionSet calc_unc_opt_dir(Vec2 p_pred, Vec2 p_u, const CostInterval& pred_interval,
                                 const CostInterval& u_interval, const FlowField& field,
                                 const UncertaintyDomain& domain, const TransitConfig& cfg);

/// Predecessor chain from s to g; throws if g was not reached.
std::vector<std::int32_t> reconstruct_path(const std::vector<VertexLabel>& labels,
                                           std::int32_t s, std::int32_t g);

/// Unified label-setting search over the grid in the time-varying field.
SearchResult search(const GridGraph& graph, const FlowField& field, int source,
                    const SearchConfig& cfg);

}  // namespace tvroute
