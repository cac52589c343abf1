#include "dlat/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace dlat {

int worker_count() {
  if (const char* env = std::getenv("DIRAC_LATTICE_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
  if (workers <= 1 || n < 64) {
    body(0, n);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    threads.emplace_back([&, w, b, e] {
      try {
        body(b, e);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

MaxResult parallel_max(std::size_t n, const std::function<double(std::size_t)>& f) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(worker_count(), n));
  const std::size_t chunk = n == 0 ? 1 : (n + workers - 1) / workers;
  std::vector<MaxResult> partial(workers, MaxResult{-std::numeric_limits<double>::infinity(), 0});
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    MaxResult best{-std::numeric_limits<double>::infinity(), b};
    for (std::size_t i = b; i < e; ++i) {
      double v = f(i);
      if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
      if (v > best.value) best = {v, i};
    }
    // Chunks from parallel_for may differ from ours when it runs serially;
    // key the partial by its first index.
    const std::size_t slot = std::min(b / chunk, workers - 1);
    MaxResult& p = partial[slot];
    if (best.value > p.value || (best.value == p.value && best.index < p.index)) p = best;
  });
  MaxResult out{-std::numeric_limits<double>::infinity(), 0};
  for (const auto& p : partial)
    if (p.value > out.value || (p.value == out.value && p.index < out.index)) out = p;
  if (n == 0) out = {0.0, 0};
  return out;
}

}  // namespace dlat
