#include "tvroute/grid_graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace tvroute {

void GridSpec::validate() const {
  std::ostringstream msg;
  if (nx < 2 || ny < 2) {
    msg << "grid: nx and ny must be >= 2 (got " << nx << " x " << ny << ")";
    throw ConfigError(msg.str());
  }
  if (!(x_max > x_min) || !(y_max > y_min)) {
    msg << "grid: empty region [" << x_min << ", " << x_max << "] x [" << y_min << ", "
        << y_max << "]";
    throw ConfigError(msg.str());
  }
  if (neighborhood != 4 && neighborhood != 8 && neighborhood != 16 && neighborhood != 32) {
    msg << "grid: neighborhood must be one of 4, 8, 16, 32 (got " << neighborhood << ")";
    throw ConfigError(msg.str());
  }
}

namespace {

struct Offset {
  int dx;
  int dy;
};

std::vector<Offset> stencil(int neighborhood) {
  std::vector<Offset> offs;
  auto ring = [&offs](std::initializer_list<Offset> base) {
    for (Offset o : base) {
      offs.push_back({o.dx, o.dy});
      offs.push_back({-o.dx, o.dy});
      offs.push_back({o.dx, -o.dy});
      offs.push_back({-o.dx, -o.dy});
    }
  };
  offs.push_back({1, 0});
  offs.push_back({-1, 0});
  offs.push_back({0, 1});
  offs.push_back({0, -1});
  if (neighborhood >= 8) ring({{1, 1}});
  if (neighborhood >= 16) ring({{1, 2}, {2, 1}});
  if (neighborhood >= 32) ring({{1, 3}, {3, 1}, {2, 3}, {3, 2}});
  return offs;
}

}  // namespace

GridGraph::GridGraph(const GridSpec& spec) : spec_(spec) {
  spec.validate();
  const double dx = (spec.x_max - spec.x_min) / (spec.nx - 1);
  const double dy = (spec.y_max - spec.y_min) / (spec.ny - 1);

  positions_.reserve(static_cast<std::size_t>(spec.nx) * spec.ny);
  for (int iy = 0; iy < spec.ny; ++iy)
    for (int ix = 0; ix < spec.nx; ++ix)
      positions_.push_back({spec.x_min + ix * dx, spec.y_min + iy * dy});

  const std::vector<Offset> offs = stencil(spec.neighborhood);
  adjacency_.resize(positions_.size());
  for (int iy = 0; iy < spec.ny; ++iy) {
    for (int ix = 0; ix < spec.nx; ++ix) {
      auto& succ = adjacency_[static_cast<std::size_t>(iy) * spec.nx + ix];
      for (Offset o : offs) {
        const int jx = ix + o.dx;
        const int jy = iy + o.dy;
        if (jx < 0 || jx >= spec.nx || jy < 0 || jy >= spec.ny) continue;
        succ.push_back(jy * spec.nx + jx);
      }
      std::sort(succ.begin(), succ.end());
    }
  }
}

int nearest_vertex(const GridGraph& g, Vec2 p) {
  const GridSpec& spec = g.spec();
  if (!spec.region().contains(p)) {
    std::ostringstream msg;
    msg << "position (" << p.x << ", " << p.y << ") outside grid region";
    throw ConfigError(msg.str());
  }
  const double dx = (spec.x_max - spec.x_min) / (spec.nx - 1);
  const double dy = (spec.y_max - spec.y_min) / (spec.ny - 1);
  const int cx = std::clamp(static_cast<int>((p.x - spec.x_min) / dx), 0, spec.nx - 2);
  const int cy = std::clamp(static_cast<int>((p.y - spec.y_min) / dy), 0, spec.ny - 2);

  // Check the enclosing cell's corners; lowest id wins ties.
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int iy = cy; iy <= cy + 1; ++iy) {
    for (int ix = cx; ix <= cx + 1; ++ix) {
      const int id = iy * spec.nx + ix;
      const Vec2 q = g.position(id);
      const double d = dot(q - p, q - p);
      if (d < best_d) {
        best_d = d;
        best = id;
      }
    }
  }
  return best;
}

}  // namespace tvroute
