#pragma once

#include <cstddef>
#include <functional>

namespace ascent {

// Fork-join helper for per-agent phases. Items are partitioned by stride, so
// a call with any worker count produces identical results as long as fn(i)
// touches only state owned by item i.
class WorkerPool {
 public:
  explicit WorkerPool(unsigned workers = 1) : workers_(workers == 0 ? 1 : workers) {}

  unsigned workers() const { return workers_; }

  void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) const;

 private:
  unsigned workers_ = 1;
};

}  // namespace ascent
