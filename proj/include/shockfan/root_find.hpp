#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "shockfan/errors.hpp"

namespace shockfan {

// Newton iteration safeguarded by a bracket. The iterate is forced back into
// [lo, hi] by bisection whenever a Newton step leaves the bracket or the
// derivative is too small to trust. Requires f(lo) and f(hi) of opposite sign
// (or one of them zero); throws NoBracket otherwise, NoConvergence if the
// tolerance is not reached within max_iter steps.
template <class F, class DF>
double newton_bisect(F&& f, DF&& df, double lo, double hi, double x0,
                     double tol, int max_iter = 100) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi))
    throw NoBracket("root bracket [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "] has no sign change");

  double x = x0;
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const double fx = f(x);
    if (std::abs(fx) == 0.0) return x;
    if (std::signbit(fx) == std::signbit(flo)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    const double d = df(x);
    double next = x - fx / d;
    if (!std::isfinite(next) || next <= lo || next >= hi)
      next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= tol) return next;
    x = next;
  }
  throw NoConvergence("newton_bisect: no convergence after " +
                      std::to_string(max_iter) + " iterations");
}

// Plain bisection to absolute tolerance in x. Same bracketing contract.
template <class F>
double bisect(F&& f, double lo, double hi, double tol, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi))
    throw NoBracket("bisect: no sign change on [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0 || hi - lo <= tol) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section search for a local maximum of f on [lo, hi]. Used to polish
// extremum locations found on a coarse grid; f need not be differentiable.
template <class F>
double golden_max(F&& f, double lo, double hi, double tol, int max_iter = 200) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && b - a > tol; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

} // namespace shockfan
