#pragma once

#include <cstddef>
#include <functional>

namespace dlat {

/// Worker count: DIRAC_LATTICE_THREADS when set to a positive integer,
/// otherwise std::thread::hardware_concurrency() (at least 1).
int worker_count();

/// Calls body(begin, end) on disjoint chunks covering [0, n). Chunks are
/// fixed by n and the worker count, so results written per index are
/// deterministic. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

struct MaxResult {
  double value = 0.0;
  std::size_t index = 0;
};

/// Max of f(i) over [0, n) with the lowest index winning ties. NaN values
/// propagate as +infinity so they are never hidden by the reduction.
MaxResult parallel_max(std::size_t n, const std::function<double(std::size_t)>& f);

}  // namespace dlat
