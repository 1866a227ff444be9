#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>

namespace fbstrip {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_floor = 1e-14;
  int max_depth = 50;
};

namespace detail {

template <typename F>
double simpson_recurse(F& f, double a, double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of a smooth integrand on [a, b].
///
/// The tolerance is max(abs_floor, rel_tol * |coarse estimate|); a first pass
/// on 8 panels supplies the scale so the relative target is meaningful.
template <std::invocable<double> F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  if (a == b) return 0.0;
  constexpr int kPanels = 8;
  const double hstep = (b - a) / kPanels;
  double coarse = 0.0;
  double fvals[kPanels + 1];
  double fmid[kPanels];
  for (int k = 0; k <= kPanels; ++k) fvals[k] = f(a + k * hstep);
  for (int k = 0; k < kPanels; ++k) {
    fmid[k] = f(a + (k + 0.5) * hstep);
    coarse += hstep / 6.0 * (fvals[k] + 4.0 * fmid[k] + fvals[k + 1]);
  }
  const double tol = std::max(opt.abs_floor, opt.rel_tol * std::abs(coarse)) / kPanels;
  double total = 0.0;
  for (int k = 0; k < kPanels; ++k) {
    const double x0 = a + k * hstep;
    const double x1 = x0 + hstep;
    const double whole = hstep / 6.0 * (fvals[k] + 4.0 * fmid[k] + fvals[k + 1]);
    total += detail::simpson_recurse(f, x0, x1, fvals[k], fmid[k], fvals[k + 1], whole, tol,
                                     opt.max_depth);
  }
  return total;
}

}  // namespace fbstrip
