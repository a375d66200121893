#include "tvroute/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tvroute {

namespace {

FlowField make_field(const ProviderSpec& spec, CounterBlockPtr counters) {
  if (spec.kind == ProviderSpec::Kind::Gridded) {
    auto grid = std::make_shared<const GriddedField>(load_gridded_field_file(spec.gridded_file));
    return FlowField(std::move(grid), std::move(counters));
  }
  return FlowField(spec.jet, std::move(counters));
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

// splitmix64; deterministic across platforms, unlike <random> distributions.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

}  // namespace

PlanSetup::PlanSetup(const Scenario& s)
    : graph(s.grid), field(make_field(s.provider, make_counter_block())) {
  s.validate();
  start_ids.reserve(s.starts.size());
  for (Vec2 p : s.starts) start_ids.push_back(nearest_vertex(graph, p));
  goal_id = nearest_vertex(graph, s.goal);
  v_c_max = max_speed_bound(field, s.grid.region(), s.t0, s.t0 + s.bound_horizon);
}

SearchConfig make_search_config(const Scenario& s, const PlanSetup& setup, Algorithm a,
                                double variance_pct, double t0) {
  SearchConfig cfg;
  cfg.robust = is_robust(a);
  cfg.heuristic = has_heuristic(a);
  cfg.gating = has_gating(a);
  cfg.delta_phi_max = s.delta_phi_max;
  cfg.goal = setup.goal_id;
  cfg.t0 = t0;
  cfg.uncertainty = cfg.robust ? uniform_domain(variance_pct / 100.0) : UncertaintyDomain{};
  cfg.transit = s.transit;
  // Best achievable ground speed under the domain keeps h a lower bound.
  cfg.h_v_veh = s.transit.v_veh * (1.0 + cfg.uncertainty.rel_var_speed);
  cfg.h_v_c_max =
      setup.v_c_max * (1.0 + std::max(cfg.uncertainty.rel_var_u, cfg.uncertainty.rel_var_v));
  return cfg;
}

SearchResult run_search(const PlanSetup& setup, const Scenario& s, const FlowField& field,
                        Algorithm a, int start_index, double variance_pct, double t0) {
  if (start_index < 0 || start_index >= static_cast<int>(setup.start_ids.size()))
    throw ConfigError("run: start index out of range");
  const SearchConfig cfg = make_search_config(s, setup, a, variance_pct, t0);
  return search(setup.graph, field, setup.start_ids[static_cast<std::size_t>(start_index)],
                cfg);
}

namespace {

RunRecord record_run(const PlanSetup& setup, const Scenario& s, Algorithm a, int start_index,
                     double variance_pct, double t0) {
  const auto clock_start = std::chrono::steady_clock::now();
  const FlowField field = setup.field.with_counters(make_counter_block());
  const SearchResult result = run_search(setup, s, field, a, start_index, variance_pct, t0);

  RunRecord rec;
  rec.algorithm = a;
  rec.start_index = start_index;
  rec.variance_pct = variance_pct;
  rec.t0 = t0;
  rec.reached = result.reached;
  rec.path.reserve(result.path.size());
  for (std::int32_t v : result.path) rec.path.push_back(setup.graph.position(v));
  rec.intervals = result.path_intervals;
  rec.counters = result.counters;
  rec.wall_ms = elapsed_ms(clock_start);
  return rec;
}

struct RunSpec {
  Algorithm algorithm;
  int start_index;
  double variance_pct;
  double t0;
};

// Pool execution: records land at their spec's slot, so report assembly is a
// deterministic ordered merge regardless of scheduling.
std::vector<RunRecord> run_pool(const PlanSetup& setup, const Scenario& s,
                                const std::vector<RunSpec>& specs, int workers) {
  std::vector<RunRecord> records(specs.size());
  const int n = static_cast<int>(specs.size());
  if (workers > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int i = 0; i < n; ++i) {
      const RunSpec& spec = specs[static_cast<std::size_t>(i)];
      records[static_cast<std::size_t>(i)] =
          record_run(setup, s, spec.algorithm, spec.start_index, spec.variance_pct, spec.t0);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const RunSpec& spec = specs[static_cast<std::size_t>(i)];
      records[static_cast<std::size_t>(i)] =
          record_run(setup, s, spec.algorithm, spec.start_index, spec.variance_pct, spec.t0);
    }
  }
  return records;
}

// Scenario selection in canonical order, duplicates dropped.
std::vector<Algorithm> canonical_selection(const Scenario& s) {
  std::vector<Algorithm> out;
  for (Algorithm a : kAllAlgorithms)
    if (std::find(s.algorithms.begin(), s.algorithms.end(), a) != s.algorithms.end())
      out.push_back(a);
  return out;
}

}  // namespace

RunRecord run_plan(const Scenario& s, Algorithm a, int start_index, double variance_pct) {
  const PlanSetup setup(s);
  return record_run(setup, s, a, start_index, variance_pct, s.t0);
}

RunReport run_bench(const Scenario& s, int workers) {
  const PlanSetup setup(s);
  const double variance = s.variances_pct.front();
  std::vector<RunSpec> specs;
  for (Algorithm a : canonical_selection(s))
    for (std::size_t i = 0; i < setup.start_ids.size(); ++i)
      specs.push_back({a, static_cast<int>(i), variance, s.t0});
  return {s, run_pool(setup, s, specs, workers), {}, std::nullopt};
}

RunReport run_variance_sweep(const Scenario& s, int workers) {
  const PlanSetup setup(s);
  std::vector<RunSpec> specs;
  for (Algorithm a : canonical_selection(s))
    for (std::size_t i = 0; i < setup.start_ids.size(); ++i)
      for (double variance : s.variances_pct)
        specs.push_back({a, static_cast<int>(i), variance, s.t0});
  return {s, run_pool(setup, s, specs, workers), {}, std::nullopt};
}

RunReport run_departure_sweep(const Scenario& s, const std::vector<double>& t0_list,
                              int workers) {
  if (t0_list.empty()) throw ConfigError("departure sweep: t0 list must be non-empty");
  const PlanSetup setup(s);
  const Algorithm a = canonical_selection(s).front();
  std::vector<RunSpec> specs;
  for (double t0 : t0_list) specs.push_back({a, 0, s.variances_pct.front(), t0});

  RunReport report{s, run_pool(setup, s, specs, workers), {}, std::nullopt};
  double best_duration = std::numeric_limits<double>::infinity();
  for (const RunRecord& rec : report.runs) {
    if (!rec.reached) continue;
    const double arrival = rec.intervals.back().hi;
    report.departure_curve.emplace_back(rec.t0, arrival);
    if (arrival - rec.t0 < best_duration) {
      best_duration = arrival - rec.t0;
      report.argmin_t0 = rec.t0;
    }
  }
  return report;
}

std::string format_counter_table(const RunReport& report) {
  // Start columns, one row block of RCFC/CFC/CMC per algorithm.
  std::vector<Algorithm> algorithms;
  int n_starts = 0;
  for (const RunRecord& rec : report.runs) {
    if (algorithms.empty() || algorithms.back() != rec.algorithm)
      algorithms.push_back(rec.algorithm);
    n_starts = std::max(n_starts, rec.start_index + 1);
  }

  auto counters_for = [&](Algorithm a, int start) -> const CallCounters* {
    for (const RunRecord& rec : report.runs)
      if (rec.algorithm == a && rec.start_index == start) return &rec.counters;
    return nullptr;
  };

  std::ostringstream out;
  out << "method     counter";
  for (int i = 0; i < n_starts; ++i) out << "  SP" << i + 1 << "           ";
  out << '\n';
  for (Algorithm a : algorithms) {
    const char* names[3] = {"RCFC", "CFC", "CMC"};
    for (int row = 0; row < 3; ++row) {
      out << (row == 0 ? algorithm_name(a) : "");
      out.width(11 - static_cast<int>(row == 0 ? std::string(algorithm_name(a)).size() : 0));
      out << "" << names[row];
      for (int i = 0; i < n_starts; ++i) {
        const CallCounters* c = counters_for(a, i);
        std::int64_t value = 0;
        if (c) value = row == 0 ? c->rcfc : row == 1 ? c->cfc : c->cmc;
        out << "  ";
        out.width(13);
        out << value;
      }
      out << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Enumeration oracle
// ---------------------------------------------------------------------------

namespace {

void enumerate_paths(const GridGraph& g, const FlowField& field, int vertex, int goal,
                     double arrival, const TransitConfig& cfg, std::vector<bool>& visited,
                     double& best) {
  if (arrival >= best) return;  // arrivals only grow along a path
  if (vertex == goal) {
    best = arrival;
    return;
  }
  visited[static_cast<std::size_t>(vertex)] = true;
  const ParameterSet nominal{};
  for (std::int32_t next : g.successors(vertex)) {
    if (visited[static_cast<std::size_t>(next)]) continue;
    const std::optional<double> duration = edge_transit_time(
        g.position(vertex), g.position(next), arrival, field, nominal, cfg);
    if (!duration) continue;
    enumerate_paths(g, field, next, goal, arrival + *duration, cfg, visited, best);
  }
  visited[static_cast<std::size_t>(vertex)] = false;
}

}  // namespace

double enumerate_min_arrival(const GridGraph& g, const FlowField& field, int source,
                             int goal, double t0, const TransitConfig& cfg) {
  std::vector<bool> visited(static_cast<std::size_t>(g.vertex_count()), false);
  double best = std::numeric_limits<double>::infinity();
  enumerate_paths(g, field, source, goal, t0, cfg, visited, best);
  return best;
}

OracleReport run_oracle_check(int seed_count, int max_vertices) {
  if (max_vertices > 12) throw ConfigError("oracle: graphs are capped at 12 vertices");
  if (max_vertices < 4) throw ConfigError("oracle: need at least a 2x2 graph");

  OracleReport report;
  report.cases = seed_count;
  for (int seed = 0; seed < seed_count; ++seed) {
    Rng rng(0x9e0c1ef5u + static_cast<std::uint64_t>(seed));

    GridSpec grid;
    grid.nx = rng.uniform_int(2, std::min(3, max_vertices / 2));
    grid.ny = rng.uniform_int(2, std::min(3, max_vertices / grid.nx));
    grid.neighborhood = 4;
    grid.x_min = rng.uniform(0.0, 9.0);
    grid.x_max = grid.x_min + rng.uniform(1.0, 3.0);
    grid.y_min = rng.uniform(-4.0, 1.0);
    grid.y_max = grid.y_min + rng.uniform(1.0, 3.0);
    const GridGraph graph(grid);

    const int n = graph.vertex_count();
    const int source = rng.uniform_int(0, n - 1);
    int goal = rng.uniform_int(0, n - 2);
    if (goal >= source) ++goal;
    const double t0 = rng.uniform(0.0, 15.0);

    const FlowField field{JetParams{}};
    const TransitConfig transit{};

    SearchConfig cfg;
    cfg.goal = goal;
    cfg.t0 = t0;
    cfg.transit = transit;
    const SearchResult tve = search(graph, field, source, cfg);

    SearchConfig astar_cfg = cfg;
    astar_cfg.heuristic = true;
    astar_cfg.h_v_veh = transit.v_veh;
    astar_cfg.h_v_c_max =
        max_speed_bound(field, grid.region(), t0, t0 + 20.0, ExecPolicy{}, 16, 16, 8);
    const SearchResult astar = search(graph, field, source, astar_cfg);

    const double oracle = enumerate_min_arrival(graph, field, source, goal, t0, transit);

    OracleCase c;
    c.seed = static_cast<std::uint64_t>(seed);
    c.search_reached = tve.reached;
    c.oracle_reached = std::isfinite(oracle);
    c.oracle_arrival = oracle;
    c.search_arrival = tve.reached
                           ? tve.labels[static_cast<std::size_t>(goal)].interval.hi
                           : std::numeric_limits<double>::infinity();
    c.astar_arrival = astar.reached
                          ? astar.labels[static_cast<std::size_t>(goal)].interval.hi
                          : std::numeric_limits<double>::infinity();
    if (c.search_reached != c.oracle_reached) {
      c.deviation = std::numeric_limits<double>::infinity();
    } else if (c.oracle_reached) {
      c.deviation = std::abs(c.search_arrival - c.oracle_arrival);
      ++report.reachable_cases;
    }
    if (tve.reached != astar.reached) {
      c.astar_deviation = std::numeric_limits<double>::infinity();
    } else if (tve.reached) {
      c.astar_deviation = std::abs(c.astar_arrival - c.search_arrival);
    }
    report.max_deviation = std::max(report.max_deviation, c.deviation);
    report.max_astar_deviation = std::max(report.max_astar_deviation, c.astar_deviation);
    report.details.push_back(c);
  }
  return report;
}

// ---------------------------------------------------------------------------
// FIFO audit
// ---------------------------------------------------------------------------

FifoAuditReport fifo_audit(const Scenario& s, int pairs, std::uint64_t seed, double tol) {
  const PlanSetup setup(s);
  const FlowField field = setup.field.with_counters(make_counter_block());
  Rng rng(seed);
  const double window = 2.0 * kPi / (s.provider.kind == ProviderSpec::Kind::Jet
                                         ? s.provider.jet.omega
                                         : 0.4);
  const ParameterSet nominal{};

  FifoAuditReport report;
  report.sampled = pairs;
  for (int i = 0; i < pairs; ++i) {
    int from = rng.uniform_int(0, setup.graph.vertex_count() - 1);
    while (setup.graph.successors(from).empty())
      from = rng.uniform_int(0, setup.graph.vertex_count() - 1);
    const auto succ = setup.graph.successors(from);
    const int to = succ[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(succ.size()) - 1))];

    const double t1 = s.t0 + rng.uniform(0.0, window);
    const double t2 = t1 + rng.uniform(1e-3, 5.0);
    const Vec2 p_from = setup.graph.position(from);
    const Vec2 p_to = setup.graph.position(to);
    const std::optional<double> d1 =
        edge_transit_time(p_from, p_to, t1, field, nominal, s.transit);
    const std::optional<double> d2 =
        edge_transit_time(p_from, p_to, t2, field, nominal, s.transit);
    if (!d1 || !d2) continue;
    ++report.comparable;
    const double a1 = t1 + *d1;
    const double a2 = t2 + *d2;
    if (a1 > a2 + tol) {
      ++report.violations;
      report.max_excess = std::max(report.max_excess, a1 - a2);
      if (report.details.size() < 32) report.details.push_back({from, to, t1, t2, a1, a2});
    }
  }
  return report;
}

ContainmentAuditReport containment_audit(const Scenario& s, double variance_pct, int samples,
                                         std::uint64_t seed, double tol) {
  const PlanSetup setup(s);
  const FlowField field = setup.field.with_counters(make_counter_block());
  const UncertaintyDomain domain = uniform_domain(variance_pct / 100.0);
  const ParameterSet nominal{};
  Rng rng(seed);

  ContainmentAuditReport report;
  report.sampled = samples;
  for (int i = 0; i < samples; ++i) {
    const int from = rng.uniform_int(0, setup.graph.vertex_count() - 1);
    const auto succ = setup.graph.successors(from);
    const int to = succ[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(succ.size()) - 1))];
    const Vec2 p_from = setup.graph.position(from);
    const Vec2 p_to = setup.graph.position(to);
    const double t0 = s.t0 + rng.uniform(0.0, 30.0);

    const auto robust = robust_edge_cost(p_from, p_to, {t0, t0}, field, domain, s.transit);
    const auto plain = edge_transit_time(p_from, p_to, t0, field, nominal, s.transit);
    if (!robust || !plain) continue;
    ++report.comparable;
    const double arrival = t0 + *plain;
    const double excess = std::max(robust->lo - arrival, arrival - robust->hi);
    if (excess > tol) {
      ++report.violations;
      report.max_excess = std::max(report.max_excess, excess);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Field export
// ---------------------------------------------------------------------------

void emit_field(const Scenario& s, const std::vector<double>& times, int density,
                std::ostream& out) {
  if (density < 2) throw ConfigError("emit-field: density must be >= 2");
  if (times.empty()) throw ConfigError("emit-field: need at least one time");
  const FlowField field = make_field(s.provider, make_counter_block());
  const Region r = s.grid.region();

  out << "x,y,t,u,v\n";
  char buf[160];
  for (double t : times) {
    for (int iy = 0; iy < density; ++iy) {
      for (int ix = 0; ix < density; ++ix) {
        const double x = r.x_min + (r.x_max - r.x_min) * ix / (density - 1);
        const double y = r.y_min + (r.y_max - r.y_min) * iy / (density - 1);
        const FlowSample v = field.sample(x, y, t);
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g\n", x, y, t, v.u, v.v);
        out << buf;
      }
    }
  }
}

}  // namespace tvroute
