#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tvroute/flow_field.hpp"
#include "tvroute/geometry.hpp"
#include "tvroute/grid_graph.hpp"
#include "tvroute/transit.hpp"

namespace tvroute {

/// The eight search variants. R* propagate arrival intervals under parameter
/// uncertainty, A* adds the goal heuristic, Z adds optimal-direction gating.
enum class Algorithm {
  TVE,
  AStarTVE,
  ZTVE,
  ZAStarTVE,
  RTVE,
  RAStarTVE,
  RZTVE,
  RZAStarTVE,
};

inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::TVE,  Algorithm::AStarTVE,  Algorithm::ZTVE,  Algorithm::ZAStarTVE,
    Algorithm::RTVE, Algorithm::RAStarTVE, Algorithm::RZTVE, Algorithm::RZAStarTVE,
};

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);
bool is_robust(Algorithm a);
bool has_heuristic(Algorithm a);
bool has_gating(Algorithm a);
/// The variant with the same switches minus interval propagation.
Algorithm non_robust_twin(Algorithm a);

struct ProviderSpec {
  enum class Kind { Jet, Gridded };
  Kind kind = Kind::Jet;
  JetParams jet{};
  std::string gridded_file;  // Kind::Gridded only
};

/// One planning problem: field, lattice, missions, uncertainty levels and
/// engine settings. Mirrors the scenario config file field-for-field.
struct Scenario {
  ProviderSpec provider{};
  GridSpec grid{};
  std::vector<Vec2> starts;
  Vec2 goal{};
  double t0 = 0.0;
  std::vector<double> variances_pct{0.0};  // percentages, converted on use
  std::vector<Algorithm> algorithms{Algorithm::RTVE};
  TransitConfig transit{};
  double delta_phi_max = kPi / 4.0;
  double bound_horizon = 50.0;  // time span scanned for the current bound
  int workers = 1;
  std::vector<double> departure_times;  // optional, for departure sweeps

  void validate() const;
};

/// Parses the key/value scenario format (see README). Errors carry file and
/// line positions.
Scenario load_scenario_file(const std::string& path);
Scenario parse_scenario(std::istream& in, const std::string& origin = "<stream>");

/// The built-in benchmark scenario over the meandering jet: region
/// [0,12] x [-4,4], 61 x 41 lattice, neighborhood 16, five starts, goal
/// (11, 3), 5% variance, the four robust algorithms.
Scenario reference_scenario();

}  // namespace tvroute
