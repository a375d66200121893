#pragma once

#include <atomic>
#include <cstdint>
#include <memory>

namespace tvroute {

/// Plain snapshot of the evaluation-effort counters.
///   rcfc: robust edge-cost calls, cfc: weight-function calls, cmc: flow samples.
struct CallCounters {
  std::int64_t rcfc = 0;
  std::int64_t cfc = 0;
  std::int64_t cmc = 0;

  bool operator==(const CallCounters&) const = default;
  CallCounters operator-(const CallCounters& o) const {
    return {rcfc - o.rcfc, cfc - o.cfc, cmc - o.cmc};
  }
};

/// Shared tally. Increments are atomic so concurrent evaluators may share one
/// block; totals depend only on the set of calls made, not on scheduling.
class CounterBlock {
 public:
  void add_rcfc(std::int64_t n = 1) { rcfc_.fetch_add(n, std::memory_order_relaxed); }
  void add_cfc(std::int64_t n = 1) { cfc_.fetch_add(n, std::memory_order_relaxed); }
  void add_cmc(std::int64_t n = 1) { cmc_.fetch_add(n, std::memory_order_relaxed); }

  CallCounters snapshot() const {
    return {rcfc_.load(std::memory_order_relaxed), cfc_.load(std::memory_order_relaxed),
            cmc_.load(std::memory_order_relaxed)};
  }

  void reset() {
    rcfc_.store(0, std::memory_order_relaxed);
    cfc_.store(0, std::memory_order_relaxed);
    cmc_.store(0, std::memory_order_relaxed);
  }

 private:
  std::atomic<std::int64_t> rcfc_{0};
  std::atomic<std::int64_t> cfc_{0};
  std::atomic<std::int64_t> cmc_{0};
};

using CounterBlockPtr = std::shared_ptr<CounterBlock>;

inline CounterBlockPtr make_counter_block() { return std::make_shared<CounterBlock>(); }

}  // namespace tvroute
