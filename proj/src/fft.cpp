#include "dlat/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "dlat/errors.hpp"

namespace dlat {

namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan get_plan(int d, int n, int nu, int sign) {
  static std::map<std::tuple<int, int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  const auto key = std::make_tuple(d, n, nu, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::size_t total = static_cast<std::size_t>(nu);
  for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(n);
  std::vector<cplx> scratch(total);
  std::vector<int> dims(d, n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan p = fftw_plan_many_dft(d, dims.data(), nu, buf, nullptr, nu, 1, buf, nullptr, nu, 1, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw ArgumentError("fft: could not create plan");
  cache.emplace(key, p);
  return p;
}

void transform(int d, int n, int nu, cplx* data, int sign) {
  if (d < 1 || d > 3 || n < 1 || nu < 1) throw ArgumentError("fft: invalid shape");
  fftw_plan p = get_plan(d, n, nu, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, buf, buf);
  double total = 1.0;
  for (int j = 0; j < d; ++j) total *= n;
  const double s = 1.0 / std::sqrt(total);
  const std::size_t len = static_cast<std::size_t>(total) * nu;
  for (std::size_t i = 0; i < len; ++i) data[i] *= s;
}

}  // namespace

void fft_forward(int d, int n, int nu, cplx* data) { transform(d, n, nu, data, FFTW_FORWARD); }
void fft_inverse(int d, int n, int nu, cplx* data) { transform(d, n, nu, data, FFTW_BACKWARD); }

}  // namespace dlat
