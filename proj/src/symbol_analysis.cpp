#include "dlat/symbol_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "dlat/errors.hpp"
#include "dlat/parallel.hpp"

namespace dlat {

namespace {

constexpr double kPi = std::numbers::pi;

struct Grid {
  int d = 1;
  std::vector<double> axis;
  std::size_t size() const {
    std::size_t s = 1;
    for (int j = 0; j < d; ++j) s *= axis.size();
    return s;
  }
  Momentum point(std::size_t idx) const {
    Momentum xi(d);
    const std::size_t n = axis.size();
    for (int j = d - 1; j >= 0; --j) {
      xi[j] = axis[idx % n];
      idx /= n;
    }
    return xi;
  }
};

double torus_h(const ModelId& a, const ModelId& b) {
  if (a.d != b.d) throw ArgumentError("models have different dimensions");
  if (a.discrete() && b.discrete() && a.h != b.h) throw ArgumentError("discrete models have different mesh sizes");
  if (a.discrete()) return a.h;
  if (b.discrete()) return b.h;
  throw ArgumentError("at least one model must be discrete to fix the torus");
}

SweepRecord grid_max(int d, double h, double half_width, int grid_n,
                     const std::function<double(const Momentum&)>& f, double core_width = 0.0) {
  if (grid_n < 16) throw ArgumentError("grid_n must be >= 16");
  Grid g{d, axis_samples(h, half_width, grid_n, core_width)};
  const MaxResult best = parallel_max(g.size(), [&](std::size_t i) { return f(g.point(i)); });
  SweepRecord rec;
  rec.h = h;
  rec.value = best.value;
  rec.xi_argmax = g.point(best.index);
  rec.grid_n = static_cast<int>(g.axis.size());
  return rec;
}

double resolvent_difference(const ModelId& a, const ModelId& b, cplx z, const Momentum& xi) {
  const SymbolMatrix diff = resolvent_at(symbol(a, xi), z) - resolvent_at(symbol(b, xi), z);
  return matrix_norm(diff);
}

enum class WitnessPair { fb_s_1d, s_smod_2d, fb_fbmod_2d, fb_fbmod_3d };

WitnessPair classify(const ModelId& a, const ModelId& b) {
  if (a.d != b.d || a.m != b.m || a.h != b.h || !a.discrete() || !b.discrete())
    throw UnsupportedModelError("witness pair must share d, m and h and both be discrete");
  auto is = [&](ModelKind x, ModelKind y) {
    return (a.kind == x && b.kind == y) || (a.kind == y && b.kind == x);
  };
  if (a.d == 1 && is(ModelKind::fb, ModelKind::s)) return WitnessPair::fb_s_1d;
  if (a.d == 2 && is(ModelKind::s, ModelKind::s_mod)) return WitnessPair::s_smod_2d;
  if (a.d == 2 && is(ModelKind::fb, ModelKind::fb_mod)) return WitnessPair::fb_fbmod_2d;
  if (a.d == 3 && is(ModelKind::fb, ModelKind::fb_mod)) return WitnessPair::fb_fbmod_3d;
  throw UnsupportedModelError("no closed-form witness for the pair " + a.label() + ", " + b.label());
}

double lsq(const std::vector<double>& x, const std::vector<double>& y, RateFit& fit) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw DegenerateDataError("fit_rate: all h values coincide");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.points = static_cast<int>(n);
  return fit.r_squared;
}

}  // namespace

int default_grid_n(int d) { return d <= 2 ? 129 : 33; }

int aligned_grid_n(int grid_n) {
  if (grid_n < 2) throw ArgumentError("grid_n must be >= 2");
  int n = 3;
  while (n < grid_n) n = 2 * n - 1;
  return n;
}

std::vector<double> axis_samples(double h, double half_width, int grid_n, double core_width) {
  if (!(h > 0.0) || !(half_width > 0.0)) throw ArgumentError("axis_samples: h and width must be > 0");
  if (core_width < 0.0) throw ArgumentError("axis_samples: core width must be >= 0");
  const int n = aligned_grid_n(grid_n);
  std::vector<double> pts;
  pts.reserve(2 * n + 5);
  for (double w : {half_width, core_width}) {
    if (w == 0.0 || w > half_width) continue;
    for (int i = 0; i < n; ++i) {
      // Symmetric construction keeps +-x exactly opposite.
      const int k = i - (n - 1) / 2;
      pts.push_back(w * (2.0 * k) / (n - 1));
    }
  }
  for (double s : {0.0, kPi / (2 * h), -kPi / (2 * h), kPi / h, -kPi / h})
    if (std::abs(s) <= half_width * (1 + 1e-15)) pts.push_back(s);
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double p : pts) {
    if (!out.empty() && std::abs(p - out.back()) <= 1e-12 * half_width) {
      // Prefer the exactly computed special value when both are present.
      for (double s : {0.0, kPi / (2 * h), -kPi / (2 * h), kPi / h, -kPi / h})
        if (p == s) out.back() = s;
      continue;
    }
    out.push_back(p);
  }
  return out;
}

SweepRecord sup_resolvent_difference(const ModelId& a, const ModelId& b, cplx z, int grid_n) {
  a.validate();
  b.validate();
  const double h = torus_h(a, b);
  const bool against_continuum = !a.discrete() || !b.discrete();
  const double core = against_continuum ? 4.0 * std::max({1.0, a.m, std::abs(z)}) : 0.0;
  return grid_max(
      a.d, h, kPi / h, grid_n, [&](const Momentum& xi) { return resolvent_difference(a, b, z, xi); }, core);
}

std::vector<SweepRecord> convergence_sweep(ModelKind kind, int d, double m, cplx z,
                                           const std::vector<double>& h_list, int grid_n) {
  if (h_list.empty()) throw ArgumentError("convergence_sweep: empty h list");
  if (kind == ModelKind::continuous) throw ArgumentError("convergence_sweep: model must be discrete");
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    if (!(h_list[i] > 0.0 && h_list[i] <= 1.0)) throw ArgumentError("convergence_sweep: h must lie in (0, 1]");
    if (i > 0 && !(h_list[i] < h_list[i - 1])) throw ArgumentError("convergence_sweep: h list must decrease");
  }
  std::vector<SweepRecord> out;
  for (double h : h_list) {
    const ModelId disc{kind, d, m, h};
    const ModelId cont{ModelKind::continuous, d, m, h};
    out.push_back(sup_resolvent_difference(disc, cont, z, grid_n));
  }
  return out;
}

RateFit fit_rate(const std::vector<double>& h, const std::vector<double>& value) {
  if (h.size() != value.size()) throw ArgumentError("fit_rate: size mismatch");
  if (h.size() < 2) throw DegenerateDataError("fit_rate: need at least two points");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(value[i] > 0.0) || !std::isfinite(value[i])) throw DegenerateDataError("fit_rate: values must be positive");
    if (!(h[i] > 0.0)) throw DegenerateDataError("fit_rate: h must be positive");
    x.push_back(std::log(h[i]));
    y.push_back(std::log(value[i]));
  }
  RateFit fit;
  if (lsq(x, y, fit) < 0.99 && x.size() > 3) {
    const auto imax = std::max_element(x.begin(), x.end()) - x.begin();
    x.erase(x.begin() + imax);
    y.erase(y.begin() + imax);
    lsq(x, y, fit);
    fit.dropped_largest_h = true;
  }
  return fit;
}

RateFit fit_rate(const std::vector<SweepRecord>& records) {
  std::vector<double> h, v;
  for (const auto& r : records) {
    h.push_back(r.h);
    v.push_back(r.value);
  }
  return fit_rate(h, v);
}

double witness_closed_form(const ModelId& a, const ModelId& b) {
  const double m = a.m, h = a.h, mm = 1.0 + m * m;
  switch (classify(a, b)) {
    case WitnessPair::fb_s_1d: return 2.0 / (std::sqrt(mm * h * h + 4.0) * std::sqrt(mm));
    case WitnessPair::s_smod_2d: return 8.0 / (std::sqrt(mm) * std::sqrt(h * h + (8.0 + h * m) * (8.0 + h * m)));
    case WitnessPair::fb_fbmod_2d: return 4.0 / (std::sqrt(mm) * std::sqrt(h * h + (4.0 + h * m) * (4.0 + h * m)));
    case WitnessPair::fb_fbmod_3d:
      return std::abs(1.0 / std::sqrt(mm) - h / std::sqrt(h * h + (m * h + 4.0) * (m * h + 4.0)));
  }
  return 0.0;
}

Momentum witness_point(const ModelId& a, const ModelId& b) {
  const double h = a.h;
  switch (classify(a, b)) {
    case WitnessPair::fb_s_1d: return {kPi / h};
    case WitnessPair::s_smod_2d: return {kPi / h, kPi / h};
    case WitnessPair::fb_fbmod_2d: return {kPi / (2 * h), -kPi / (2 * h)};
    case WitnessPair::fb_fbmod_3d: return {kPi / (2 * h), -kPi / (2 * h), 0.0};
  }
  return {};
}

WitnessReport nonconvergence_witness(const ModelId& a0, const ModelId& b0, double h, int grid_n) {
  ModelId a = a0, b = b0;
  a.h = h;
  b.h = h;
  a.validate();
  b.validate();
  const cplx z{0.0, 1.0};
  WitnessReport rep;
  rep.a = a;
  rep.b = b;
  rep.h = h;
  rep.closed_form = witness_closed_form(a, b);
  rep.xi_witness = witness_point(a, b);
  rep.at_witness = resolvent_difference(a, b, z, rep.xi_witness);
  const SweepRecord rec = sup_resolvent_difference(a, b, z, grid_n > 0 ? grid_n : default_grid_n(a.d));
  rep.measured = rec.value;
  rep.grid_n = rec.grid_n;
  return rep;
}

SweepRecord sobolev_weighted_difference(const ModelId& model, cplx z, int grid_n) {
  model.validate();
  const double h = model.h;
  const ModelId cont{ModelKind::continuous, model.d, model.m, h};
  if (!model.discrete()) {
    SweepRecord rec;
    rec.h = h;
    rec.value = 0.0;
    rec.xi_argmax = Momentum(model.d, 0.0);
    rec.grid_n = aligned_grid_n(grid_n);
    return rec;
  }
  return grid_max(model.d, h, 1.5 * kPi / h, grid_n, [&](const Momentum& xi) {
    const SymbolMatrix r = resolvent_at(continuous_symbol(cont, xi), z);
    const SymbolMatrix rh = resolvent_at(discrete_symbol(model, xi), z);
    return matrix_norm((rh - r) * r);
  });
}

std::vector<Momentum> symbol_zero_census(const ModelId& model, int grid_n, double tol_rel) {
  model.validate();
  if (!model.discrete()) throw ArgumentError("symbol_zero_census: model must be discrete");
  if (model.m != 0.0) throw ArgumentError("symbol_zero_census: requires m = 0");
  if (!(tol_rel > 0.0)) throw ArgumentError("symbol_zero_census: tol must be > 0");
  const int d = model.d;
  const double h = model.h;
  const int n = aligned_grid_n(std::max(grid_n, 16)) - 1;
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= n;

  auto coords = [&](std::size_t idx) {
    std::vector<int> c(d);
    for (int j = d - 1; j >= 0; --j) {
      c[j] = static_cast<int>(idx % n);
      idx /= n;
    }
    return c;
  };
  auto momentum = [&](const std::vector<int>& c) {
    Momentum xi(d);
    for (int j = 0; j < d; ++j) {
      const int k = c[j] - n / 2;  // -n/2 .. n/2-1
      xi[j] = (k == 0) ? 0.0 : (2.0 * kPi * k) / (n * h);
    }
    return xi;
  };
  const bool use_eigs = d == 3 && (model.kind == ModelKind::fb || model.kind == ModelKind::fb_mod);
  std::vector<double> ind(total);
  parallel_for(total, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const Momentum xi = momentum(coords(i));
      ind[i] = use_eigs ? squared_symbol_eigs(model, xi).lambda_min - 1.0 : scalar_g(model, xi);
    }
  });

  const double thr = tol_rel / (h * h);
  std::vector<char> seen(total, 0);
  std::vector<Momentum> reps;
  for (std::size_t start = 0; start < total; ++start) {
    if (seen[start] || !(ind[start] < thr)) continue;
    std::queue<std::size_t> q;
    q.push(start);
    seen[start] = 1;
    std::size_t best = start;
    while (!q.empty()) {
      const std::size_t cur = q.front();
      q.pop();
      if (ind[cur] < ind[best]) best = cur;
      const auto c = coords(cur);
      int nb = 1;
      for (int j = 0; j < d; ++j) nb *= 3;
      for (int o = 0; o < nb; ++o) {
        int t = o;
        std::size_t idx = 0;
        bool self = true;
        for (int j = 0; j < d; ++j) {
          const int off = t % 3 - 1;
          t /= 3;
          if (off != 0) self = false;
          idx = idx * n + static_cast<std::size_t>(((c[j] + off) % n + n) % n);
        }
        if (self || seen[idx] || !(ind[idx] < thr)) continue;
        seen[idx] = 1;
        q.push(idx);
      }
    }
    reps.push_back(momentum(coords(best)));
  }
  return reps;
}

}  // namespace dlat
