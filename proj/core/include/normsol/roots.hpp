#pragma once

// Scalar root finding: bisection, safeguarded Newton and geometric bracket search.

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "normsol/error.hpp"

namespace normsol::roots {

struct Bracket {
  double lo;
  double hi;
};

/// Plain bisection. Requires f(lo) and f(hi) of opposite sign (or one of them zero).
template <class F>
double bisect(F&& f, double lo, double hi, double xtol = 1e-14, int max_iter = 400) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    throw BracketError("bisect: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= xtol * (1.0 + std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

/// Newton iteration kept inside a sign-change bracket; falls back to bisection whenever
/// the Newton step leaves the bracket or fails to halve the residual bracket width.
/// `fdf(x)` returns {f(x), f'(x)}.
template <class FDF>
double safeguarded_newton(FDF&& fdf, double lo, double hi, double x0, double xtol = 1e-15,
                          int max_iter = 200) {
  auto [flo, dlo] = fdf(lo);
  auto [fhi, dhi] = fdf(hi);
  (void)dlo;
  (void)dhi;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    throw BracketError("safeguarded_newton: no sign change on [" + std::to_string(lo) +
                       ", " + std::to_string(hi) + "]");
  }
  // orient so that f(lo) < 0
  if (flo > 0) std::swap(lo, hi);
  double x = (x0 > std::min(lo, hi) && x0 < std::max(lo, hi)) ? x0 : 0.5 * (lo + hi);
  double dx_old = std::abs(hi - lo);
  double dx = dx_old;
  auto [fx, dfx] = fdf(x);
  for (int it = 0; it < max_iter; ++it) {
    const bool out_of_bracket = ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) > 0.0;
    const bool slow = std::abs(2.0 * fx) > std::abs(dx_old * dfx);
    dx_old = dx;
    if (out_of_bracket || slow || dfx == 0.0) {
      dx = 0.5 * (hi - lo);
      x = lo + dx;
    } else {
      dx = fx / dfx;
      x -= dx;
    }
    if (std::abs(dx) <= xtol * (1.0 + std::abs(x))) return x;
    std::tie(fx, dfx) = fdf(x);
    if (fx == 0.0) return x;
    if (fx < 0)
      lo = x;
    else
      hi = x;
  }
  throw NumericalError("safeguarded_newton: no convergence after " +
                       std::to_string(max_iter) + " iterations");
}

/// Walks x0, x0*factor, x0*factor^2, ... (factor > 1 searches upward, factor < 1
/// downward) until f changes sign relative to f(x0). Returns the bracketing pair ordered
/// lo < hi. Throws BracketError once the walk leaves [x_min, x_max].
template <class F>
Bracket expand_geometric(F&& f, double x0, double factor, double x_min, double x_max) {
  const double f0 = f(x0);
  double prev = x0;
  double x = x0;
  for (;;) {
    x *= factor;
    if (x < x_min || x > x_max) {
      throw BracketError("expand_geometric: no sign change before leaving [" +
                         std::to_string(x_min) + ", " + std::to_string(x_max) + "]");
    }
    const double fx = f(x);
    if (fx == 0.0 || (fx > 0) != (f0 > 0)) {
      return prev < x ? Bracket{prev, x} : Bracket{x, prev};
    }
    prev = x;
  }
}

}  // namespace normsol::roots
