#pragma once

#include <cmath>
#include <concepts>
#include <limits>

namespace fbstrip {

/// Bisection for a sign change of `f` on [lo, hi]. Stops when the bracket is
/// below `rel_tol * max(|lo|, |hi|)` (or an absolute floor of tiny widths).
/// The caller guarantees f(lo) and f(hi) have opposite signs or one is zero.
template <std::invocable<double> F>
double bisect(F&& f, double lo, double hi, double rel_tol = 1e-12) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  double fhi = f(hi);
  if (fhi == 0.0) return hi;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi)) || mid == lo || mid == hi) {
      return mid;
    }
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Largest x in [lo, hi] with pred(x) true, for a predicate that is true on
/// an initial segment. Requires pred(lo).
template <std::predicate<double> P>
double bisect_last_true(P&& pred, double lo, double hi, double rel_tol = 1e-12) {
  if (pred(hi)) return hi;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi)) || mid == lo || mid == hi) break;
    if (pred(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace fbstrip
