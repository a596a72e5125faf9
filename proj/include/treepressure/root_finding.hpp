#pragma once

#include <cmath>
#include <optional>

namespace treepressure {

struct BracketOptions {
  double x_tolerance = 1e-15;
  double residual_tolerance = 1e-13;
  int max_iterations = 200;
};

// Safeguarded Newton on a bracket [lo, hi] where f(lo) and f(hi) differ in
// sign (or one of them vanishes). Newton steps that leave the bracket or fail
// to halve it fall back to bisection. Returns nullopt when the endpoints do not
// bracket a root.
template <class F, class DF>
std::optional<double> bracketed_newton(F&& f, DF&& df, double lo, double hi,
                                       const BracketOptions& opt = {}) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) return std::nullopt;
  // orient so that f(a) < 0 < f(b)
  double a = lo, b = hi;
  if (flo > 0) std::swap(a, b);

  double x = 0.5 * (lo + hi);
  double dx_old = std::abs(hi - lo);
  double dx = dx_old;
  double fx = f(x);
  double dfx = df(x);
  for (int it = 0; it < opt.max_iterations; ++it) {
    const bool newton_leaves = ((x - b) * dfx - fx) * ((x - a) * dfx - fx) > 0.0;
    const bool newton_slow = std::abs(2.0 * fx) > std::abs(dx_old * dfx);
    dx_old = dx;
    if (newton_leaves || newton_slow || dfx == 0.0) {
      dx = 0.5 * (b - a);
      x = a + dx;
    } else {
      dx = fx / dfx;
      x -= dx;
    }
    fx = f(x);
    if (std::abs(fx) <= opt.residual_tolerance && std::abs(dx) <= opt.x_tolerance * (1.0 + std::abs(x)))
      return x;
    if (fx == 0.0) return x;
    if (fx < 0)
      a = x;
    else
      b = x;
    if (std::abs(b - a) <= opt.x_tolerance * (1.0 + std::abs(x))) return x;
    dfx = df(x);
  }
  return x;
}

// Plain bisection for a continuous f with a sign change on [lo, hi].
template <class F>
std::optional<double> bisect(F&& f, double lo, double hi, double x_tolerance = 1e-16,
                             int max_iterations = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) return std::nullopt;
  for (int it = 0; it < max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= x_tolerance) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace treepressure
