#include "tvroute/transit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tvroute {

void TransitConfig::validate() const {
  if (n_seg < 1) throw ConfigError("transit: n_seg must be >= 1");
  if (!(tau > 0.0)) throw ConfigError("transit: tau must be > 0");
  if (!(v_veh > 0.0)) throw ConfigError("transit: v_veh must be > 0");
}

std::optional<double> ground_speed(Vec2 edge_dir, FlowSample current, double v_veh) {
  const Vec2 w{current.u, current.v};
  const double along = dot(w, edge_dir);
  const double cross_sq = std::max(0.0, dot(w, w) - along * along);
  const double v_sq = v_veh * v_veh;
  if (v_sq <= cross_sq) return std::nullopt;  // cannot cancel the drift
  const double made_good = std::sqrt(v_sq - cross_sq) + along;
  if (made_good <= 0.0) return std::nullopt;
  return made_good;
}

std::optional<double> edge_transit_time(Vec2 from, Vec2 to, double t_start,
                                        const FlowField& field, const ParameterSet& set,
                                        const TransitConfig& cfg) {
  field.counters()->add_cfc(1);
  const Vec2 delta = to - from;
  const double length = norm(delta);
  const Vec2 dir = delta * (1.0 / length);
  const double seg_len = length / cfg.n_seg;
  const double v_veh = perturb_speed(cfg.v_veh, set);

  // Every call samples exactly n_seg midpoints, impassable or not, keeping
  // CMC = CFC * n_seg. Once a sub-segment blocks, the running time freezes.
  double t = t_start;
  bool impassable = false;
  for (int i = 0; i < cfg.n_seg; ++i) {
    const Vec2 mid = from + dir * (seg_len * (i + 0.5));
    const FlowSample current = perturb_flow(field.sample(mid.x, mid.y, t), set);
    if (impassable) continue;
    const std::optional<double> speed = ground_speed(dir, current, v_veh);
    if (!speed) {
      impassable = true;
      continue;
    }
    t += seg_len / *speed;
  }
  if (impassable) return std::nullopt;
  return t - t_start;
}

std::vector<double> departure_times(const CostInterval& interval, double tau) {
  std::vector<double> starts{interval.lo};
  if (interval.degenerate()) return starts;
  const double width = interval.hi - interval.lo;
  const int interior = static_cast<int>(std::ceil(width / tau)) - 1;
  for (int i = 1; i <= interior; ++i)
    starts.push_back(interval.lo + width * static_cast<double>(i) /
                                       static_cast<double>(interior + 1));
  starts.push_back(interval.hi);
  return starts;
}

namespace detail {

namespace {

// One grid point: arrival time for (start, set), +inf when impassable.
double grid_arrival(Vec2 from, Vec2 to, double start, const ParameterSet& set,
                    const FlowField& field, const TransitConfig& cfg, bool& impassable) {
  const std::optional<double> duration = edge_transit_time(from, to, start, field, set, cfg);
  if (!duration) {
    impassable = true;
    return std::numeric_limits<double>::infinity();
  }
  return start + *duration;
}

}  // namespace

GridReduction eval_arrival_grid_serial(Vec2 from, Vec2 to, std::span<const double> starts,
                                       std::span<const ParameterSet> sets,
                                       const FlowField& field, const TransitConfig& cfg) {
  GridReduction r{std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(), false};
  for (double start : starts) {
    for (const ParameterSet& set : sets) {
      bool impassable = false;
      const double arrival = grid_arrival(from, to, start, set, field, cfg, impassable);
      r.impassable = r.impassable || impassable;
      r.lo = std::min(r.lo, arrival);
      r.hi = std::max(r.hi, arrival);
    }
  }
  return r;
}

GridReduction eval_arrival_grid_parallel(Vec2 from, Vec2 to, std::span<const double> starts,
                                         std::span<const ParameterSet> sets,
                                         const FlowField& field, const TransitConfig& cfg,
                                         int threads) {
  const int n = static_cast<int>(starts.size() * sets.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  int blocked = 0;
#pragma omp parallel num_threads(threads) reduction(min : lo) reduction(max : hi) \
    reduction(+ : blocked)
  {
    // Per-worker tally, merged by summation: totals stay scheduling-
    // independent without contending on one counter cache line.
    const FlowField local = field.with_counters(make_counter_block());
#pragma omp for schedule(static) nowait
    for (int i = 0; i < n; ++i) {
      const double start = starts[static_cast<std::size_t>(i) / sets.size()];
      const ParameterSet& set = sets[static_cast<std::size_t>(i) % sets.size()];
      bool impassable = false;
      const double arrival = grid_arrival(from, to, start, set, local, cfg, impassable);
      if (impassable) ++blocked;
      lo = std::min(lo, arrival);
      hi = std::max(hi, arrival);
    }
    const CallCounters tally = local.counters()->snapshot();
    field.counters()->add_cfc(tally.cfc);
    field.counters()->add_cmc(tally.cmc);
  }
  return {lo, hi, blocked > 0};
}

}  // namespace detail

std::optional<CostInterval> robust_edge_cost(Vec2 from, Vec2 to, const CostInterval& departure,
                                             const FlowField& field,
                                             const UncertaintyDomain& domain,
                                             const TransitConfig& cfg,
                                             const ExecPolicy& exec) {
  field.counters()->add_rcfc(1);
  const std::vector<double> starts = departure_times(departure, cfg.tau);
  const std::vector<ParameterSet> sets = corner_sets(domain);

  const detail::GridReduction r =
      exec.parallel()
          ? detail::eval_arrival_grid_parallel(from, to, starts, sets, field, cfg,
                                               exec.threads)
          : detail::eval_arrival_grid_serial(from, to, starts, sets, field, cfg);
  if (r.impassable) return std::nullopt;
  return CostInterval{r.lo, r.hi};
}

double heuristic_h(Vec2 p, Vec2 goal, double v_veh, double v_c_max) {
  return norm(goal - p) / (v_veh + v_c_max);
}

}  // namespace tvroute
