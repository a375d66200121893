#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>

#include <json.hpp>

#include "tvroute/harness.hpp"

namespace tvroute {

double round_sig(double v, int digits) {
  if (!std::isfinite(v)) return v;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

namespace {

using Json = nlohmann::ordered_json;

Json vec2_json(Vec2 p) { return Json::array({round_sig(p.x), round_sig(p.y)}); }

Json scenario_json(const Scenario& s) {
  Json provider;
  if (s.provider.kind == ProviderSpec::Kind::Jet) {
    provider = {{"type", "jet"},
                {"b0", s.provider.jet.b0},
                {"eps", s.provider.jet.eps},
                {"omega", s.provider.jet.omega},
                {"theta", round_sig(s.provider.jet.theta)},
                {"k", s.provider.jet.k},
                {"c", s.provider.jet.c}};
  } else {
    provider = {{"type", "gridded"}, {"file", s.provider.gridded_file}};
  }

  Json starts = Json::array();
  for (Vec2 p : s.starts) starts.push_back(vec2_json(p));
  Json algorithms = Json::array();
  for (Algorithm a : s.algorithms) algorithms.push_back(algorithm_name(a));

  // The worker count is a runtime knob, not part of the planning problem; it
  // is omitted so reports compare equal across pool sizes.
  return {{"provider", provider},
          {"grid",
           {{"x_min", s.grid.x_min},
            {"x_max", s.grid.x_max},
            {"y_min", s.grid.y_min},
            {"y_max", s.grid.y_max},
            {"nx", s.grid.nx},
            {"ny", s.grid.ny},
            {"neighborhood", s.grid.neighborhood}}},
          {"starts", starts},
          {"goal", vec2_json(s.goal)},
          {"t0", round_sig(s.t0)},
          {"variances_pct", s.variances_pct},
          {"algorithms", algorithms},
          {"transit",
           {{"n_seg", s.transit.n_seg},
            {"tau", s.transit.tau},
            {"v_veh", s.transit.v_veh}}},
          {"delta_phi_max", round_sig(s.delta_phi_max)},
          {"bound_horizon", s.bound_horizon},
          {"departure_times", s.departure_times}};
}

Json record_json(const RunRecord& rec) {
  Json path = Json::array();
  for (Vec2 p : rec.path) path.push_back(vec2_json(p));
  Json intervals = Json::array();
  for (const CostInterval& iv : rec.intervals)
    intervals.push_back(Json::array({round_sig(iv.lo), round_sig(iv.hi)}));
  return {{"algorithm", algorithm_name(rec.algorithm)},
          {"start_index", rec.start_index},
          {"variance_pct", rec.variance_pct},
          {"t0", round_sig(rec.t0)},
          {"reached", rec.reached},
          {"path", path},
          {"intervals", intervals},
          {"counters",
           {{"rcfc", rec.counters.rcfc}, {"cfc", rec.counters.cfc}, {"cmc", rec.counters.cmc}}},
          {"wall_ms", round_sig(rec.wall_ms, 6)}};
}

}  // namespace

std::string report_to_json(const RunReport& report) {
  Json doc = {{"scenario", scenario_json(report.scenario)}};
  Json runs = Json::array();
  for (const RunRecord& rec : report.runs) runs.push_back(record_json(rec));
  doc["runs"] = std::move(runs);
  if (!report.departure_curve.empty() || report.argmin_t0.has_value()) {
    Json curve = Json::array();
    for (const auto& [t0, arrival] : report.departure_curve)
      curve.push_back(Json::array({round_sig(t0), round_sig(arrival)}));
    doc["departure_curve"] = std::move(curve);
    if (report.argmin_t0)
      doc["argmin_t0"] = round_sig(*report.argmin_t0);
    else
      doc["argmin_t0"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const RunReport& report) {
  std::string out = "algorithm,start_index,variance_pct,t0,reached,goal_lo,goal_hi,rcfc,cfc,cmc,wall_ms\n";
  char buf[256];
  for (const RunRecord& rec : report.runs) {
    const double lo = rec.reached ? rec.intervals.back().lo
                                  : std::numeric_limits<double>::infinity();
    const double hi = rec.reached ? rec.intervals.back().hi
                                  : std::numeric_limits<double>::infinity();
    std::snprintf(buf, sizeof buf, "%s,%d,%.12g,%.12g,%d,%.12g,%.12g,%lld,%lld,%lld,%.3f\n",
                  algorithm_name(rec.algorithm), rec.start_index, rec.variance_pct,
                  round_sig(rec.t0), rec.reached ? 1 : 0, round_sig(lo), round_sig(hi),
                  static_cast<long long>(rec.counters.rcfc),
                  static_cast<long long>(rec.counters.cfc),
                  static_cast<long long>(rec.counters.cmc), rec.wall_ms);
    out += buf;
  }
  return out;
}

}  // namespace tvroute
