// Compares the serial reference implementations against the OpenMP kernels at
// the three parallelization levels: the robust cost grid under one edge, the
// successor-edge evaluation inside a search, and the run pool of the harness.
// Outputs are checked for exact equality before any timing is reported.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "tvroute/harness.hpp"

using namespace tvroute;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct Timed {
  double ms = 0.0;
};

template <typename F>
Timed time_call(F&& f, int repeats = 1) {
  const double start = now_ms();
  for (int i = 0; i < repeats; ++i) f();
  return {(now_ms() - start) / repeats};
}

void print_row(const std::string& name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-34s %10.1f ms %10.1f ms %7.2fx   %s\n", name.c_str(), serial_ms, parallel_ms,
              serial_ms / parallel_ms, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial reference vs OpenMP kernel comparison"};
  int threads =
#ifdef _OPENMP
      omp_get_max_threads();
#else
      1;
#endif
  app.add_option("--threads", threads, "threads for the parallel variants");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  omp_set_max_active_levels(1);
#endif

  std::printf("threads: %d\n", threads);
  std::printf("%-34s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  const Scenario scenario = reference_scenario();

  // Level 1: the (departure x parameter set) arrival grid of one robust edge.
  {
    const FlowField field{JetParams{}};
    const TransitConfig transit{};
    const UncertaintyDomain domain = uniform_domain(0.05);
    const std::vector<ParameterSet> sets = corner_sets(domain);
    const CostInterval wide{0.0, 30.0};  // ~60 departures x 8 sets
    const std::vector<double> starts = departure_times(wide, transit.tau);
    const Vec2 from{0.5, -3.0};
    const Vec2 to{1.0, -2.6};

    detail::GridReduction serial_out{}, parallel_out{};
    const Timed t_serial = time_call(
        [&] {
          for (int rep = 0; rep < 400; ++rep)
            serial_out = detail::eval_arrival_grid_serial(from, to, starts, sets, field, transit);
        });
    const Timed t_parallel = time_call(
        [&] {
          for (int rep = 0; rep < 400; ++rep)
            parallel_out = detail::eval_arrival_grid_parallel(from, to, starts, sets, field,
                                                              transit, threads);
        });
    const bool same = serial_out.lo == parallel_out.lo && serial_out.hi == parallel_out.hi &&
                      serial_out.impassable == parallel_out.impassable;
    print_row("robust cost grid (one edge)", t_serial.ms, t_parallel.ms, same);
  }

  // Level 2: successor-edge evaluation inside one full robust search. 10%
  // variance widens the intervals, the representative heavy case.
  {
    const PlanSetup setup(scenario);
    auto run_with = [&](int n_threads) {
      const FlowField field = setup.field.with_counters(make_counter_block());
      SearchConfig cfg =
          make_search_config(scenario, setup, Algorithm::RTVE, 10.0, scenario.t0);
      cfg.exec.threads = n_threads;
      return search(setup.graph, field, setup.start_ids[0], cfg);
    };
    SearchResult serial_res, parallel_res;
    const Timed t_serial = time_call([&] { serial_res = run_with(1); });
    const Timed t_parallel = time_call([&] { parallel_res = run_with(threads); });
    bool same = serial_res.counters == parallel_res.counters &&
                serial_res.path == parallel_res.path &&
                serial_res.extraction_order == parallel_res.extraction_order &&
                serial_res.labels.size() == parallel_res.labels.size();
    for (std::size_t i = 0; same && i < serial_res.labels.size(); ++i)
      same = serial_res.labels[i].interval == parallel_res.labels[i].interval &&
             serial_res.labels[i].pred == parallel_res.labels[i].pred;
    print_row("RTVE search (edge-level kernel)", t_serial.ms, t_parallel.ms, same);
  }

  // Level 3: the bench run pool.
  {
    Scenario pool_scenario = scenario;
    pool_scenario.algorithms = {Algorithm::RAStarTVE, Algorithm::RZTVE, Algorithm::RZAStarTVE};
    RunReport serial_rep, parallel_rep;
    const Timed t_serial = time_call([&] { serial_rep = run_bench(pool_scenario, 1); });
    const Timed t_parallel = time_call([&] { parallel_rep = run_bench(pool_scenario, threads); });
    for (RunRecord& r : serial_rep.runs) r.wall_ms = 0.0;
    for (RunRecord& r : parallel_rep.runs) r.wall_ms = 0.0;
    const bool same = report_to_json(serial_rep) == report_to_json(parallel_rep);
    print_row("bench run pool (3 algs x 5 starts)", t_serial.ms, t_parallel.ms, same);
  }

  return 0;
}
