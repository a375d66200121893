#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tvroute/harness.hpp"

namespace {

using namespace tvroute;

struct CommonOpts {
  std::string config;
  std::string out;
  std::string format = "json";
  int workers = 0;  // 0: take the scenario's value
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
  auto* c = cmd->add_option("--config", opts.config, "scenario config file");
  if (config_required) c->required();
  cmd->add_option("--out", opts.out, "output file (default: stdout)");
  cmd->add_option("--format", opts.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--workers", opts.workers, "worker pool size (overrides config)");
}

int effective_workers(const CommonOpts& opts, const Scenario& s) {
  return opts.workers > 0 ? opts.workers : s.workers;
}

void write_output(const CommonOpts& opts, const std::string& payload) {
  if (opts.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(opts.out, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + opts.out);
  out << payload;
}

void write_report(const CommonOpts& opts, const RunReport& report) {
  write_output(opts, opts.format == "csv" ? report_to_csv(report) : report_to_json(report));
}

std::vector<double> parse_number_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    std::istringstream vs(item);
    double v;
    if (!(vs >> v)) throw ConfigError(std::string("bad ") + what + " value: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
  // Pool parallelism and kernel parallelism are alternatives, not multipliers.
  omp_set_max_active_levels(1);
#endif

  CLI::App app{"Robust time-optimal route planning through time-varying currents"};
  app.require_subcommand(1);

  CommonOpts opts;

  auto* plan = app.add_subcommand("plan", "run one algorithm from one start");
  std::string plan_algorithm;
  int plan_start = 0;
  double plan_variance = -1.0;
  add_common(plan, opts);
  plan->add_option("--algorithm", plan_algorithm, "algorithm name (default: first configured)");
  plan->add_option("--start-index", plan_start, "start position index (0-based)");
  plan->add_option("--variance", plan_variance, "variance percentage (default: first configured)");

  auto* bench = app.add_subcommand("bench", "algorithms x starts counter comparison");
  add_common(bench, opts);

  auto* sweep_var = app.add_subcommand("sweep-variance", "algorithms x starts x variances");
  add_common(sweep_var, opts);

  auto* sweep_dep = app.add_subcommand("sweep-departure", "one search per departure time");
  std::string t0_list_text;
  add_common(sweep_dep, opts);
  sweep_dep->add_option("--t0-list", t0_list_text,
                        "comma-separated departure times (default: config departure_times)");

  auto* oracle = app.add_subcommand("oracle",
                                    "exhaustive-enumeration cross-check and FIFO audit");
  int oracle_seeds = 100;
  int oracle_vertices = 9;
  int fifo_pairs = 1000;
  add_common(oracle, opts, /*config_required=*/false);
  oracle->add_option("--seeds", oracle_seeds, "number of random instances");
  oracle->add_option("--max-vertices", oracle_vertices, "vertex cap per instance (<= 12)");
  oracle->add_option("--fifo-pairs", fifo_pairs, "departure pairs for the FIFO audit");

  auto* emit = app.add_subcommand("emit-field", "sample the current field to CSV");
  std::string times_text = "0";
  int density = 64;
  add_common(emit, opts);
  emit->add_option("--times", times_text, "comma-separated sample times");
  emit->add_option("--density", density, "lattice points per axis")->check(CLI::Range(2, 4096));

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan->parsed()) {
      const Scenario s = load_scenario_file(opts.config);
      Algorithm a = s.algorithms.front();
      if (!plan_algorithm.empty()) {
        const std::optional<Algorithm> parsed = parse_algorithm(plan_algorithm);
        if (!parsed) throw ConfigError("unknown algorithm: " + plan_algorithm);
        a = *parsed;
      }
      const double variance = plan_variance >= 0.0 ? plan_variance : s.variances_pct.front();
      RunReport report{s, {run_plan(s, a, plan_start, variance)}, {}, std::nullopt};
      write_report(opts, report);
    } else if (bench->parsed()) {
      const Scenario s = load_scenario_file(opts.config);
      const RunReport report = run_bench(s, effective_workers(opts, s));
      (opts.out.empty() ? std::cerr : std::cout) << format_counter_table(report);
      write_report(opts, report);
    } else if (sweep_var->parsed()) {
      const Scenario s = load_scenario_file(opts.config);
      write_report(opts, run_variance_sweep(s, effective_workers(opts, s)));
    } else if (sweep_dep->parsed()) {
      const Scenario s = load_scenario_file(opts.config);
      std::vector<double> t0_list = s.departure_times;
      if (!t0_list_text.empty()) t0_list = parse_number_list(t0_list_text, "t0");
      if (t0_list.empty())
        throw ConfigError("sweep-departure: provide --t0-list or mission.departure_times");
      write_report(opts, run_departure_sweep(s, t0_list, effective_workers(opts, s)));
    } else if (oracle->parsed()) {
      const OracleReport rep = run_oracle_check(oracle_seeds, oracle_vertices);
      std::cout << "enumeration cross-check: " << rep.cases << " instances, "
                << rep.reachable_cases << " reachable\n"
                << "  max |TVE - enumeration|  = " << rep.max_deviation << "\n"
                << "  max |A*TVE - TVE|        = " << rep.max_astar_deviation << "\n";
      const Scenario s = opts.config.empty() ? reference_scenario()
                                             : load_scenario_file(opts.config);
      const FifoAuditReport fifo = fifo_audit(s, fifo_pairs, 0x5eedULL);
      std::cout << "FIFO audit: " << fifo.comparable << " comparable pairs of "
                << fifo.sampled << ", " << fifo.violations << " violations";
      if (fifo.violations > 0) std::cout << " (max excess " << fifo.max_excess << ")";
      std::cout << "\n";
      for (const FifoViolation& v : fifo.details)
        std::cout << "  edge " << v.from << "->" << v.to << " t1=" << v.t1 << " t2=" << v.t2
                  << " arrivals " << v.arrival1 << " / " << v.arrival2 << "\n";
      const ContainmentAuditReport cont =
          containment_audit(s, s.variances_pct.front(), 500, 0xc0417ULL);
      std::cout << "containment audit (" << s.variances_pct.front() << "% variance): "
                << cont.violations << " of " << cont.comparable
                << " comparable edges put the nominal arrival outside the robust interval";
      if (cont.violations > 0) std::cout << " (max excess " << cont.max_excess << ")";
      std::cout << "\n";
      const bool ok = rep.max_deviation < 1e-9 && rep.max_astar_deviation < 1e-9;
      std::cout << (ok ? "PASS" : "FAIL") << "\n";
      return ok ? 0 : 1;
    } else if (emit->parsed()) {
      const Scenario s = load_scenario_file(opts.config);
      std::ostringstream payload;
      emit_field(s, parse_number_list(times_text, "time"), density, payload);
      write_output(opts, payload.str());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
