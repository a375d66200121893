#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "tvroute/counters.hpp"
#include "tvroute/errors.hpp"
#include "tvroute/exec.hpp"
#include "tvroute/geometry.hpp"

namespace tvroute {

/// Current vector at one space-time point (dimensionless velocities).
struct FlowSample {
  double u = 0.0;  // eastward
  double v = 0.0;  // northward

  bool operator==(const FlowSample&) const = default;
};

struct FlowJacobian {
  double du_dx = 0.0;
  double du_dy = 0.0;
  double dv_dx = 0.0;
  double dv_dy = 0.0;
};

/// Parameters of the analytic meandering-jet model.
struct JetParams {
  double b0 = 1.2;
  double eps = 0.3;
  double omega = 0.4;
  double theta = kPi / 2.0;
  double k = 0.84;  // must be nonzero
  double c = 0.12;
};

/// B(t): time-dependent oscillation of the meander amplitude.
double meander_amplitude(double t, const JetParams& p);

/// Stream function of the meandering jet.
double stream_value(double x, double y, double t, const JetParams& p);

/// Closed-form velocity (u, v) = (-dphi/dy, dphi/dx). Does not touch counters;
/// use FlowField::sample for counted evaluation.
FlowSample jet_velocity(double x, double y, double t, const JetParams& p);

/// Closed-form spatial jacobian of the jet velocity. Locked against the
/// finite-difference route in tests; kept as a cross-check, the planner itself
/// always differentiates numerically.
FlowJacobian jet_velocity_jacobian(double x, double y, double t, const JetParams& p);

/// Regular space-time sample grid with axes strictly increasing. u and v are
/// stored [t][y][x], flattened.
struct GriddedField {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> ts;
  std::vector<double> u;
  std::vector<double> v;

  std::size_t index(std::size_t it, std::size_t iy, std::size_t ix) const {
    return (it * ys.size() + iy) * xs.size() + ix;
  }
  void validate() const;  // throws ConfigError on shape/monotonicity problems
};

GriddedField load_gridded_field(std::istream& in, const std::string& origin = "<stream>");
GriddedField load_gridded_field_file(const std::string& path);
void write_gridded_field(std::ostream& out, const GriddedField& f);

/// Time-varying current provider: analytic jet or gridded samples. Immutable
/// after construction and shareable across threads. Every sample() call adds
/// one to the attached CMC tally.
class FlowField {
 public:
  explicit FlowField(const JetParams& p, CounterBlockPtr counters = make_counter_block());
  explicit FlowField(std::shared_ptr<const GriddedField> grid,
                     CounterBlockPtr counters = make_counter_block());

  /// Current at (x, y, t). Gridded providers clamp t to the sampled range but
  /// throw DomainError for out-of-range (x, y).
  FlowSample sample(double x, double y, double t) const;

  bool is_analytic() const { return grid_ == nullptr; }
  const JetParams& jet() const { return jet_; }
  const CounterBlockPtr& counters() const { return counters_; }

  /// Same field, tallying into a different block. Gridded data is shared.
  FlowField with_counters(CounterBlockPtr counters) const;

 private:
  JetParams jet_{};
  std::shared_ptr<const GriddedField> grid_;
  CounterBlockPtr counters_;
};

/// Central finite differences of sample() with the given step; costs 8 flow
/// samples (4 partials x 2 evaluations).
FlowJacobian flow_jacobian(const FlowField& field, double x, double y, double t,
                           double step = 1e-4);

/// Upper bound on |(u,v)| over region x [t0, t1], from a deterministic
/// sampling lattice inflated by 5%. Slightly loose by construction; used to
/// keep the arrival-time heuristic admissible.
double max_speed_bound(const FlowField& field, const Region& region, double t0, double t1,
                       const ExecPolicy& exec = {}, int nx = 64, int ny = 64, int nt = 16);

/// Serial reference for max_speed_bound's lattice scan (no OpenMP).
double max_speed_bound_serial(const FlowField& field, const Region& region, double t0,
                              double t1, int nx = 64, int ny = 64, int nt = 16);

}  // namespace tvroute
