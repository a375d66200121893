#include "tvroute/uncertainty.hpp"

#include <sstream>

namespace tvroute {

namespace {

void check_fraction(double f, const char* name) {
  if (!(f >= 0.0 && f < 1.0)) {
    std::ostringstream msg;
    msg << "uncertainty: " << name << " = " << f << " outside [0, 1)";
    throw ConfigError(msg.str());
  }
}

}  // namespace

std::vector<ParameterSet> corner_sets(const UncertaintyDomain& domain) {
  check_fraction(domain.rel_var_u, "rel_var_u");
  check_fraction(domain.rel_var_v, "rel_var_v");
  check_fraction(domain.rel_var_speed, "rel_var_speed");

  // Degenerate axes contribute only the sign 0; live axes contribute -1, +1.
  auto signs_for = [](double fraction) {
    return fraction > 0.0 ? std::vector<int>{-1, +1} : std::vector<int>{0};
  };
  const std::vector<int> su = signs_for(domain.rel_var_u);
  const std::vector<int> sv = signs_for(domain.rel_var_v);
  const std::vector<int> ss = signs_for(domain.rel_var_speed);

  std::vector<ParameterSet> sets;
  sets.reserve(su.size() * sv.size() * ss.size());
  for (int a : su)
    for (int b : sv)
      for (int c : ss)
        sets.push_back({a, b, c, domain.rel_var_u, domain.rel_var_v, domain.rel_var_speed});
  return sets;
}

double perturb_speed(double v_veh, const ParameterSet& set) {
  const double v = v_veh * (1.0 + set.sign_speed * set.var_speed);
  if (!(v > 0.0)) {
    std::ostringstream msg;
    msg << "perturbed vehicle speed " << v << " is not positive (nominal " << v_veh
        << ", sign " << set.sign_speed << ", variance " << set.var_speed << ")";
    throw ConfigError(msg.str());
  }
  return v;
}

}  // namespace tvroute
