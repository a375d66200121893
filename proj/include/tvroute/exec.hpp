#pragma once

namespace tvroute {

/// Thread budget for the data-parallel kernels. threads <= 1 selects the
/// serial reference path; anything above runs the OpenMP variant. Both paths
/// are required to produce bit-identical results and counters.
struct ExecPolicy {
  int threads = 1;

  bool parallel() const { return threads > 1; }
};

}  // namespace tvroute
