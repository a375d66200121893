#include "tvroute/flow_field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tvroute {

double meander_amplitude(double t, const JetParams& p) {
  return p.b0 + p.eps * std::cos(p.omega * t + p.theta);
}

namespace {

// Shared sub-expressions of the stream function and its derivatives at one
// space-time point.
struct JetTerms {
  double b;        // B(t)
  double sin_s;    // sin(k(x - ct))
  double cos_s;
  double num;      // y - B cos(s)
  double den;      // sqrt(1 + k^2 B^2 sin^2(s))
  double arg;      // num / den
};

JetTerms jet_terms(double x, double y, double t, const JetParams& p) {
  JetTerms j;
  j.b = meander_amplitude(t, p);
  const double s = p.k * (x - p.c * t);
  j.sin_s = std::sin(s);
  j.cos_s = std::cos(s);
  j.num = y - j.b * j.cos_s;
  j.den = std::sqrt(1.0 + p.k * p.k * j.b * j.b * j.sin_s * j.sin_s);
  j.arg = j.num / j.den;
  return j;
}

}  // namespace

double stream_value(double x, double y, double t, const JetParams& p) {
  return 1.0 - std::tanh(jet_terms(x, y, t, p).arg);
}

FlowSample jet_velocity(double x, double y, double t, const JetParams& p) {
  const JetTerms j = jet_terms(x, y, t, p);
  const double th = std::tanh(j.arg);
  const double sech2 = 1.0 - th * th;
  const double k2 = p.k * p.k;
  const double d3 = j.den * j.den * j.den;
  // d(arg)/dx; the y-partial is simply 1/den.
  const double arg_x =
      p.k * j.b * j.sin_s * (j.den * j.den - j.num * k2 * j.b * j.cos_s) / d3;
  return {sech2 / j.den, -sech2 * arg_x};
}

FlowJacobian jet_velocity_jacobian(double x, double y, double t, const JetParams& p) {
  const JetTerms j = jet_terms(x, y, t, p);
  const double th = std::tanh(j.arg);
  const double sech2 = 1.0 - th * th;
  const double k2 = p.k * p.k;
  const double b = j.b;
  const double d = j.den;
  const double d2 = d * d;
  const double d3 = d2 * d;
  const double d5 = d3 * d2;
  const double sc = j.sin_s * j.cos_s;

  const double arg_x = p.k * b * j.sin_s * (d2 - j.num * k2 * b * j.cos_s) / d3;
  const double den_x = k2 * p.k * b * b * sc / d;
  const double arg_xy = -k2 * p.k * b * b * sc / d3;
  const double cos_2s = j.cos_s * j.cos_s - j.sin_s * j.sin_s;
  const double arg_xx =
      k2 * b *
          (j.cos_s - k2 * b * b * j.sin_s * j.sin_s * j.cos_s - j.num * k2 * b * cos_2s) /
          d3 +
      3.0 * j.num * k2 * k2 * k2 * b * b * b * b * j.sin_s * j.sin_s * j.cos_s * j.cos_s / d5;

  FlowJacobian out;
  out.du_dx = -sech2 * (2.0 * th * arg_x * d + den_x) / d2;
  out.du_dy = -2.0 * sech2 * th / d2;
  out.dv_dx = sech2 * (2.0 * th * arg_x * arg_x - arg_xx);
  out.dv_dy = sech2 * (2.0 * th * arg_x / d - arg_xy);
  return out;
}

void GriddedField::validate() const {
  auto strictly_increasing = [](const std::vector<double>& a) {
    for (std::size_t i = 1; i < a.size(); ++i)
      if (!(a[i] > a[i - 1])) return false;
    return true;
  };
  if (xs.size() < 2 || ys.size() < 2 || ts.empty())
    throw ConfigError("gridded field: need nx >= 2, ny >= 2, nt >= 1");
  if (!strictly_increasing(xs) || !strictly_increasing(ys) || !strictly_increasing(ts))
    throw ConfigError("gridded field: axes must be strictly increasing");
  const std::size_t n = xs.size() * ys.size() * ts.size();
  if (u.size() != n || v.size() != n)
    throw ConfigError("gridded field: array shapes inconsistent with axes");
}

GriddedField load_gridded_field(std::istream& in, const std::string& origin) {
  auto fail = [&origin](const std::string& what) {
    throw ConfigError(origin + ": " + what);
  };
  std::size_t nx = 0, ny = 0, nt = 0;
  if (!(in >> nx >> ny >> nt)) fail("expected header 'nx ny nt'");

  GriddedField f;
  auto read_values = [&](std::vector<double>& dst, std::size_t n, const char* what) {
    dst.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      if (!(in >> dst[i])) fail(std::string("truncated while reading ") + what);
  };
  read_values(f.xs, nx, "x axis");
  read_values(f.ys, ny, "y axis");
  read_values(f.ts, nt, "t axis");
  read_values(f.u, nx * ny * nt, "u values");
  read_values(f.v, nx * ny * nt, "v values");
  f.validate();
  return f;
}

GriddedField load_gridded_field_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open gridded field file: " + path);
  return load_gridded_field(in, path);
}

void write_gridded_field(std::ostream& out, const GriddedField& f) {
  out.precision(17);
  out << f.xs.size() << ' ' << f.ys.size() << ' ' << f.ts.size() << '\n';
  auto write_values = [&out](const std::vector<double>& a, std::size_t per_line) {
    for (std::size_t i = 0; i < a.size(); ++i)
      out << a[i] << ((i + 1) % per_line == 0 ? '\n' : ' ');
    if (a.size() % per_line != 0) out << '\n';
  };
  write_values(f.xs, f.xs.size());
  write_values(f.ys, f.ys.size());
  write_values(f.ts, f.ts.size());
  write_values(f.u, f.xs.size());
  write_values(f.v, f.xs.size());
}

FlowField::FlowField(const JetParams& p, CounterBlockPtr counters)
    : jet_(p), counters_(std::move(counters)) {
  if (p.k == 0.0) throw ConfigError("jet parameters: k must be nonzero");
}

FlowField::FlowField(std::shared_ptr<const GriddedField> grid, CounterBlockPtr counters)
    : grid_(std::move(grid)), counters_(std::move(counters)) {
  grid_->validate();
}

FlowField FlowField::with_counters(CounterBlockPtr counters) const {
  FlowField copy = *this;
  copy.counters_ = std::move(counters);
  return copy;
}

namespace {

// Index of the cell [axis[i], axis[i+1]] containing q, for in-range q.
std::size_t cell_index(const std::vector<double>& axis, double q) {
  auto it = std::upper_bound(axis.begin(), axis.end(), q);
  std::size_t i = static_cast<std::size_t>(it - axis.begin());
  if (i == 0) return 0;
  if (i >= axis.size()) return axis.size() - 2;
  return i - 1;
}

FlowSample grid_interpolate(const GriddedField& g, double x, double y, double t) {
  if (x < g.xs.front() || x > g.xs.back() || y < g.ys.front() || y > g.ys.back()) {
    std::ostringstream msg;
    msg << "flow query (" << x << ", " << y << ") outside gridded domain ["
        << g.xs.front() << ", " << g.xs.back() << "] x [" << g.ys.front() << ", "
        << g.ys.back() << "]";
    throw DomainError(msg.str());
  }
  // Currents persist beyond the sampled horizon: clamp t to the axis.
  t = std::clamp(t, g.ts.front(), g.ts.back());

  const std::size_t ix = cell_index(g.xs, x);
  const std::size_t iy = cell_index(g.ys, y);
  const double fx = (x - g.xs[ix]) / (g.xs[ix + 1] - g.xs[ix]);
  const double fy = (y - g.ys[iy]) / (g.ys[iy + 1] - g.ys[iy]);

  auto bilinear = [&](const std::vector<double>& a, std::size_t it) {
    const double a00 = a[g.index(it, iy, ix)];
    const double a01 = a[g.index(it, iy, ix + 1)];
    const double a10 = a[g.index(it, iy + 1, ix)];
    const double a11 = a[g.index(it, iy + 1, ix + 1)];
    return (1.0 - fy) * ((1.0 - fx) * a00 + fx * a01) +
           fy * ((1.0 - fx) * a10 + fx * a11);
  };

  if (g.ts.size() == 1)
    return {bilinear(g.u, 0), bilinear(g.v, 0)};

  const std::size_t it = cell_index(g.ts, t);
  const double ft = (t - g.ts[it]) / (g.ts[it + 1] - g.ts[it]);
  return {(1.0 - ft) * bilinear(g.u, it) + ft * bilinear(g.u, it + 1),
          (1.0 - ft) * bilinear(g.v, it) + ft * bilinear(g.v, it + 1)};
}

}  // namespace

FlowSample FlowField::sample(double x, double y, double t) const {
  counters_->add_cmc(1);
  if (grid_) return grid_interpolate(*grid_, x, y, t);
  return jet_velocity(x, y, t, jet_);
}

FlowJacobian flow_jacobian(const FlowField& field, double x, double y, double t,
                           double step) {
  // Each partial is two model evaluations; the u- and v-components count as
  // separate queries, so one jacobian costs exactly 8 CMC.
  const double inv = 1.0 / (2.0 * step);
  FlowJacobian out;
  out.du_dx = (field.sample(x + step, y, t).u - field.sample(x - step, y, t).u) * inv;
  out.du_dy = (field.sample(x, y + step, t).u - field.sample(x, y - step, t).u) * inv;
  out.dv_dx = (field.sample(x + step, y, t).v - field.sample(x - step, y, t).v) * inv;
  out.dv_dy = (field.sample(x, y + step, t).v - field.sample(x, y - step, t).v) * inv;
  return out;
}

namespace {

double lattice_point(double lo, double hi, int i, int n) {
  return n > 1 ? lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1)
               : lo;
}

double bound_at(const FlowField& field, const Region& r, double t0, double t1, int nx,
                int ny, int nt, int flat) {
  const int it = flat / (nx * ny);
  const int iy = (flat / nx) % ny;
  const int ix = flat % nx;
  const FlowSample s = field.sample(lattice_point(r.x_min, r.x_max, ix, nx),
                                    lattice_point(r.y_min, r.y_max, iy, ny),
                                    lattice_point(t0, t1, it, nt));
  return std::hypot(s.u, s.v);
}

}  // namespace

double max_speed_bound_serial(const FlowField& field, const Region& region, double t0,
                              double t1, int nx, int ny, int nt) {
  double peak = 0.0;
  const int total = nx * ny * nt;
  for (int i = 0; i < total; ++i)
    peak = std::max(peak, bound_at(field, region, t0, t1, nx, ny, nt, i));
  return peak * 1.05;
}

double max_speed_bound(const FlowField& field, const Region& region, double t0, double t1,
                       const ExecPolicy& exec, int nx, int ny, int nt) {
  if (!exec.parallel()) return max_speed_bound_serial(field, region, t0, t1, nx, ny, nt);
  double peak = 0.0;
  const int total = nx * ny * nt;
#pragma omp parallel for schedule(static) num_threads(exec.threads) reduction(max : peak)
  for (int i = 0; i < total; ++i)
    peak = std::max(peak, bound_at(field, region, t0, t1, nx, ny, nt, i));
  return peak * 1.05;
}

}  // namespace tvroute
