#include "tvroute/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace tvroute {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::TVE: return "TVE";
    case Algorithm::AStarTVE: return "A*TVE";
    case Algorithm::ZTVE: return "ZTVE";
    case Algorithm::ZAStarTVE: return "ZA*TVE";
    case Algorithm::RTVE: return "RTVE";
    case Algorithm::RAStarTVE: return "RA*TVE";
    case Algorithm::RZTVE: return "RZTVE";
    case Algorithm::RZAStarTVE: return "RZA*TVE";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms)
    if (name == algorithm_name(a)) return a;
  return std::nullopt;
}

bool is_robust(Algorithm a) {
  return a == Algorithm::RTVE || a == Algorithm::RAStarTVE || a == Algorithm::RZTVE ||
         a == Algorithm::RZAStarTVE;
}

bool has_heuristic(Algorithm a) {
  return a == Algorithm::AStarTVE || a == Algorithm::ZAStarTVE ||
         a == Algorithm::RAStarTVE || a == Algorithm::RZAStarTVE;
}

bool has_gating(Algorithm a) {
  return a == Algorithm::ZTVE || a == Algorithm::ZAStarTVE || a == Algorithm::RZTVE ||
         a == Algorithm::RZAStarTVE;
}

Algorithm non_robust_twin(Algorithm a) {
  switch (a) {
    case Algorithm::RTVE: return Algorithm::TVE;
    case Algorithm::RAStarTVE: return Algorithm::AStarTVE;
    case Algorithm::RZTVE: return Algorithm::ZTVE;
    case Algorithm::RZAStarTVE: return Algorithm::ZAStarTVE;
    default: return a;
  }
}

void Scenario::validate() const {
  grid.validate();
  transit.validate();
  if (starts.empty()) throw ConfigError("scenario: at least one start position is required");
  const Region region = grid.region();
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (!region.contains(starts[i])) {
      std::ostringstream msg;
      msg << "scenario: start " << i + 1 << " (" << starts[i].x << ", " << starts[i].y
          << ") outside the grid region";
      throw ConfigError(msg.str());
    }
  }
  if (!region.contains(goal)) throw ConfigError("scenario: goal outside the grid region");
  if (variances_pct.empty()) throw ConfigError("scenario: variance list must be non-empty");
  for (double pct : variances_pct)
    if (!(pct >= 0.0 && pct < 100.0))
      throw ConfigError("scenario: variances must lie in [0, 100) percent");
  if (algorithms.empty()) throw ConfigError("scenario: algorithm selection must be non-empty");
  if (!(delta_phi_max > 0.0 && delta_phi_max <= kPi))
    throw ConfigError("scenario: delta_phi_max must lie in (0, pi]");
  if (workers < 1) throw ConfigError("scenario: workers must be >= 1");
  if (!(bound_horizon > 0.0)) throw ConfigError("scenario: bound_horizon must be > 0");
}

namespace {

struct ConfigEntry {
  std::string value;
  int line = 0;
};

// section.key -> value, last assignment wins.
using ConfigMap = std::map<std::string, ConfigEntry>;

ConfigMap read_config(std::istream& in, const std::string& origin) {
  ConfigMap map;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    map[section + "." + key] = {trim(line.substr(eq + 1)), line_no};
  }
  return map;
}

class ConfigReader {
 public:
  ConfigReader(ConfigMap map, std::string origin)
      : map_(std::move(map)), origin_(std::move(origin)) {}

  bool has(const std::string& key) const { return map_.count(key) > 0; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    auto it = map_.find(key);
    std::ostringstream msg;
    msg << origin_;
    if (it != map_.end()) msg << ":" << it->second.line;
    msg << ": [" << key << "] " << what;
    throw ConfigError(msg.str());
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = map_.find(key);
    return it == map_.end() ? fallback : it->second.value;
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second.value, &pos);
      if (pos != it->second.value.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      fail(key, "not a number: '" + it->second.value + "'");
    }
  }

  int get_int(const std::string& key, int fallback) const {
    const double v = get_double(key, fallback);
    if (v != std::floor(v)) fail(key, "expected an integer");
    return static_cast<int>(v);
  }

  std::vector<double> get_doubles(const std::string& key) const {
    std::vector<double> out;
    auto it = map_.find(key);
    if (it == map_.end()) return out;
    std::istringstream ss(it->second.value);
    std::string tok;
    while (ss >> tok) {
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(tok, &pos));
        if (pos != tok.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        fail(key, "not a number: '" + tok + "'");
      }
    }
    return out;
  }

  std::vector<std::string> get_tokens(const std::string& key) const {
    std::vector<std::string> out;
    auto it = map_.find(key);
    if (it == map_.end()) return out;
    std::istringstream ss(it->second.value);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
  }

  void check_known_keys(const std::vector<std::string>& known) const {
    for (const auto& [key, entry] : map_)
      if (std::find(known.begin(), known.end(), key) == known.end())
        throw ConfigError(origin_ + ":" + std::to_string(entry.line) + ": unknown key [" +
                          key + "]");
  }

 private:
  ConfigMap map_;
  std::string origin_;
};

const std::vector<std::string> kKnownKeys = {
    "provider.type",       "provider.b0",          "provider.eps",
    "provider.omega",      "provider.theta",       "provider.k",
    "provider.c",          "provider.file",        "grid.x_min",
    "grid.x_max",          "grid.y_min",           "grid.y_max",
    "grid.nx",             "grid.ny",              "grid.neighborhood",
    "mission.starts",      "mission.goal",         "mission.t0",
    "mission.departure_times",                     "uncertainty.variances",
    "search.algorithms",   "search.delta_phi_max", "search.bound_horizon",
    "transit.n_seg",       "transit.tau",          "transit.v_veh",
    "run.workers",
};

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& origin) {
  const ConfigReader cfg(read_config(in, origin), origin);
  cfg.check_known_keys(kKnownKeys);
  Scenario s;

  const std::string type = cfg.get_string("provider.type", "jet");
  if (type == "jet") {
    s.provider.kind = ProviderSpec::Kind::Jet;
    JetParams defaults;
    s.provider.jet.b0 = cfg.get_double("provider.b0", defaults.b0);
    s.provider.jet.eps = cfg.get_double("provider.eps", defaults.eps);
    s.provider.jet.omega = cfg.get_double("provider.omega", defaults.omega);
    s.provider.jet.theta = cfg.get_double("provider.theta", defaults.theta);
    s.provider.jet.k = cfg.get_double("provider.k", defaults.k);
    s.provider.jet.c = cfg.get_double("provider.c", defaults.c);
  } else if (type == "gridded") {
    s.provider.kind = ProviderSpec::Kind::Gridded;
    s.provider.gridded_file = cfg.get_string("provider.file", "");
    if (s.provider.gridded_file.empty()) cfg.fail("provider.file", "required for gridded provider");
  } else {
    cfg.fail("provider.type", "must be 'jet' or 'gridded', got '" + type + "'");
  }

  s.grid.x_min = cfg.get_double("grid.x_min", s.grid.x_min);
  s.grid.x_max = cfg.get_double("grid.x_max", s.grid.x_max);
  s.grid.y_min = cfg.get_double("grid.y_min", s.grid.y_min);
  s.grid.y_max = cfg.get_double("grid.y_max", s.grid.y_max);
  s.grid.nx = cfg.get_int("grid.nx", s.grid.nx);
  s.grid.ny = cfg.get_int("grid.ny", s.grid.ny);
  s.grid.neighborhood = cfg.get_int("grid.neighborhood", s.grid.neighborhood);

  const std::vector<double> starts = cfg.get_doubles("mission.starts");
  if (starts.empty()) cfg.fail("mission.starts", "required (x y pairs)");
  if (starts.size() % 2 != 0) cfg.fail("mission.starts", "needs an even count of numbers");
  for (std::size_t i = 0; i + 1 < starts.size(); i += 2)
    s.starts.push_back({starts[i], starts[i + 1]});

  const std::vector<double> goal = cfg.get_doubles("mission.goal");
  if (goal.size() != 2) cfg.fail("mission.goal", "required as 'x y'");
  s.goal = {goal[0], goal[1]};
  s.t0 = cfg.get_double("mission.t0", 0.0);
  s.departure_times = cfg.get_doubles("mission.departure_times");

  if (cfg.has("uncertainty.variances")) s.variances_pct = cfg.get_doubles("uncertainty.variances");

  if (cfg.has("search.algorithms")) {
    s.algorithms.clear();
    for (const std::string& tok : cfg.get_tokens("search.algorithms")) {
      const std::optional<Algorithm> a = parse_algorithm(tok);
      if (!a) cfg.fail("search.algorithms", "unknown algorithm '" + tok + "'");
      s.algorithms.push_back(*a);
    }
  }
  s.delta_phi_max = cfg.get_double("search.delta_phi_max", s.delta_phi_max);
  s.bound_horizon = cfg.get_double("search.bound_horizon", s.bound_horizon);

  s.transit.n_seg = cfg.get_int("transit.n_seg", s.transit.n_seg);
  s.transit.tau = cfg.get_double("transit.tau", s.transit.tau);
  s.transit.v_veh = cfg.get_double("transit.v_veh", s.transit.v_veh);

  s.workers = cfg.get_int("run.workers", s.workers);

  s.validate();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  return parse_scenario(in, path);
}

Scenario reference_scenario() {
  Scenario s;
  s.provider.kind = ProviderSpec::Kind::Jet;
  s.grid = {0.0, 12.0, -4.0, 4.0, 61, 41, 16};
  s.starts = {{0.5, -3.0}, {0.5, 0.0}, {0.5, 3.0}, {3.0, -3.0}, {6.0, -3.0}};
  s.goal = {11.0, 3.0};
  s.t0 = 0.0;
  s.variances_pct = {5.0};
  s.algorithms = {Algorithm::RTVE, Algorithm::RAStarTVE, Algorithm::RZTVE,
                  Algorithm::RZAStarTVE};
  s.transit = TransitConfig{};
  s.delta_phi_max = kPi / 4.0;
  s.validate();
  return s;
}

}  // namespace tvroute
