#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tvroute/scenario.hpp"
#include "tvroute/search.hpp"

namespace tvroute {

/// Scenario resources shared by all runs: graph, provider prototype, mapped
/// mission vertices and the current-speed bound. The bound's lattice scan
/// tallies into a setup counter so per-run counters reflect search effort only.
struct PlanSetup {
  GridGraph graph;
  FlowField field;  // prototype; clone per run via with_counters
  std::vector<int> start_ids;
  int goal_id = -1;
  double v_c_max = 0.0;

  explicit PlanSetup(const Scenario& s);
};

/// Search outcome plus provenance of one (algorithm, start, variance, t0) run.
struct RunRecord {
  Algorithm algorithm = Algorithm::TVE;
  int start_index = 0;
  double variance_pct = 0.0;
  double t0 = 0.0;
  bool reached = false;
  std::vector<Vec2> path;
  std::vector<CostInterval> intervals;
  CallCounters counters;
  double wall_ms = 0.0;
};

struct RunReport {
  Scenario scenario;
  std::vector<RunRecord> runs;
  // Filled by departure sweeps only.
  std::vector<std::pair<double, double>> departure_curve;  // (t0, goal arrival hi)
  std::optional<double> argmin_t0;
};

/// SearchConfig for one algorithm under the scenario, at the given variance.
SearchConfig make_search_config(const Scenario& s, const PlanSetup& setup, Algorithm a,
                                double variance_pct, double t0);

/// Full search for one run; exposes labels for callers that need more than the
/// RunRecord summary. Counters tally into `field`'s block.
SearchResult run_search(const PlanSetup& setup, const Scenario& s, const FlowField& field,
                        Algorithm a, int start_index, double variance_pct, double t0);

/// One planning run from a cold setup.
RunRecord run_plan(const Scenario& s, Algorithm a, int start_index, double variance_pct);

/// Algorithms x starts at the scenario's first variance, the comparison table
/// workload. Runs execute in a bounded pool of `workers`.
RunReport run_bench(const Scenario& s, int workers);

/// Algorithms x starts x variances; feasibility and interval growth data.
RunReport run_variance_sweep(const Scenario& s, int workers);

/// Selected (first) algorithm once per departure time, plus the arrival curve
/// and its argmin.
RunReport run_departure_sweep(const Scenario& s, const std::vector<double>& t0_list,
                              int workers);

/// Text table of per-start counters, rows ordered as the canonical algorithm
/// list (the comparison-table layout).
std::string format_counter_table(const RunReport& report);

// ---------------------------------------------------------------------------
// Exhaustive-enumeration oracle and FIFO audit
// ---------------------------------------------------------------------------

struct OracleCase {
  std::uint64_t seed = 0;
  bool search_reached = false;
  bool oracle_reached = false;
  double search_arrival = 0.0;
  double oracle_arrival = 0.0;
  double astar_arrival = 0.0;
  double deviation = 0.0;        // |search - oracle|, 0 when both unreached
  double astar_deviation = 0.0;  // |astar - search|
};

struct OracleReport {
  int cases = 0;
  int reachable_cases = 0;
  double max_deviation = 0.0;
  double max_astar_deviation = 0.0;
  std::vector<OracleCase> details;
};

/// Minimum arrival over all simple paths, propagating transit times edge by
/// edge. Independent of the label-setting engine. +inf when unreachable.
double enumerate_min_arrival(const GridGraph& g, const FlowField& field, int source,
                             int goal, double t0, const TransitConfig& cfg);

/// Random small jet-field instances: exhaustive enumeration vs TVE and A*TVE.
OracleReport run_oracle_check(int seed_count, int max_vertices);

struct FifoViolation {
  int from = 0;
  int to = 0;
  double t1 = 0.0;
  double t2 = 0.0;
  double arrival1 = 0.0;
  double arrival2 = 0.0;
};

struct FifoAuditReport {
  int sampled = 0;
  int comparable = 0;  // both departures passable
  int violations = 0;  // arrival(t1) > arrival(t2) + tol with t1 < t2
  double max_excess = 0.0;
  std::vector<FifoViolation> details;
};

/// Empirical non-overtaking check on random edges of the scenario graph.
FifoAuditReport fifo_audit(const Scenario& s, int pairs, std::uint64_t seed,
                           double tol = 1e-9);

struct ContainmentAuditReport {
  int sampled = 0;
  int comparable = 0;
  int violations = 0;   // nominal arrival outside the robust interval
  double max_excess = 0.0;
};

/// Corner sets need not bracket interior extrema: checks empirically whether
/// the robust interval contains the nominal-parameter arrival on random edges.
ContainmentAuditReport containment_audit(const Scenario& s, double variance_pct, int samples,
                                         std::uint64_t seed, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

/// Field samples over a density x density lattice for each listed time, as CSV
/// rows x,y,t,u,v.
void emit_field(const Scenario& s, const std::vector<double>& times, int density,
                std::ostream& out);

std::string report_to_json(const RunReport& report);
std::string report_to_csv(const RunReport& report);

/// Rounds to 12 significant digits, the serialization precision for times.
double round_sig(double v, int digits = 12);

}  // namespace tvroute
