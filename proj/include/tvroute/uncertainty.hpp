#pragma once

#include <vector>

#include "tvroute/errors.hpp"
#include "tvroute/flow_field.hpp"

namespace tvroute {

/// Relative error variances (fractions, e.g. 0.05 for 5%) bounding the
/// uncertain parameters: current components u, v and the vehicle speed through
/// water. Each must lie in [0, 1).
struct UncertaintyDomain {
  double rel_var_u = 0.0;
  double rel_var_v = 0.0;
  double rel_var_speed = 0.0;

  bool nominal() const { return rel_var_u == 0.0 && rel_var_v == 0.0 && rel_var_speed == 0.0; }
};

/// Uniform variance on all three axes, the configuration the experiments use.
inline UncertaintyDomain uniform_domain(double fraction) {
  return {fraction, fraction, fraction};
}

/// One vertex of the uncertainty hyper-rectangle. A sign of 0 marks a
/// degenerate (zero-variance) axis; the nominal set is all zeros.
struct ParameterSet {
  int sign_u = 0;
  int sign_v = 0;
  int sign_speed = 0;
  double var_u = 0.0;
  double var_v = 0.0;
  double var_speed = 0.0;

  bool operator==(const ParameterSet&) const = default;
};

/// All corner parameter sets of the domain, in lexicographic (sign_u, sign_v,
/// sign_speed) order. 2^m sets for m non-degenerate axes; the single nominal
/// set when every variance is zero.
std::vector<ParameterSet> corner_sets(const UncertaintyDomain& domain);

inline FlowSample perturb_flow(FlowSample s, const ParameterSet& set) {
  return {s.u * (1.0 + set.sign_u * set.var_u), s.v * (1.0 + set.sign_v * set.var_v)};
}

/// Perturbed vehicle speed; throws ConfigError if the result is not positive.
double perturb_speed(double v_veh, const ParameterSet& set);

}  // namespace tvroute
