#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tvroute/errors.hpp"
#include "tvroute/geometry.hpp"

namespace tvroute {

/// Lattice description. Neighborhood order selects the successor stencil:
/// 4 = axis offsets, 8 = + diagonals, 16 = + knight moves, 32 = + the coprime
/// (1,3)/(3,1)/(2,3)/(3,2) rings.
struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  int nx = 2;
  int ny = 2;
  int neighborhood = 8;

  void validate() const;
  Region region() const { return {x_min, x_max, y_min, y_max}; }
};

/// Immutable rectangular lattice with per-vertex successor lists in ascending
/// id order. Connectivity is symmetric; edges are traversed directionally.
class GridGraph {
 public:
  explicit GridGraph(const GridSpec& spec);

  int vertex_count() const { return static_cast<int>(positions_.size()); }
  Vec2 position(int id) const { return positions_[static_cast<std::size_t>(id)]; }
  std::span<const std::int32_t> successors(int id) const {
    return adjacency_[static_cast<std::size_t>(id)];
  }
  const GridSpec& spec() const { return spec_; }

 private:
  GridSpec spec_;
  std::vector<Vec2> positions_;
  std::vector<std::vector<std::int32_t>> adjacency_;
};

inline GridGraph build_grid(const GridSpec& spec) { return GridGraph(spec); }

/// Vertex closest to p (euclidean), ties broken by lowest id. p must lie
/// within the lattice bounds.
int nearest_vertex(const GridGraph& g, Vec2 p);

}  // namespace tvroute
