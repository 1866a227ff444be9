#pragma once

// Critical height, its bounds and scaling, monotonicity in h and lateral
// symmetry, all driven through the grid solver.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fbstrip/discrete_energy.hpp"
#include "fbstrip/error.hpp"
#include "fbstrip/minimize.hpp"
#include "fbstrip/oned.hpp"
#include "fbstrip/parallel.hpp"
#include "fbstrip/roots.hpp"
#include "fbstrip/support.hpp"
#include "fbstrip/theta.hpp"

namespace fbstrip {

// ---------------------------------------------------------------- support

enum class SupportVerdict { Below, Indeterminate, Crosses };

inline std::string_view to_string(SupportVerdict v) {
  switch (v) {
    case SupportVerdict::Below: return "Below";
    case SupportVerdict::Indeterminate: return "Indeterminate";
    case SupportVerdict::Crosses: return "Crosses";
  }
  return "?";
}

/// Below when every column top is under h - dy; Crosses when some node at
/// height >= h is positive; Indeterminate in between.
inline SupportVerdict support_below(const ScalarField& u, double dy, double h) {
  bool any = false;
  double top = 0.0;
  for (int i = 0; i < u.nx(); ++i) {
    for (int j = u.rows() - 1; j >= 0; --j) {
      if (u(i, j) > 0.0) {
        if (j * dy >= h) return SupportVerdict::Crosses;
        double t = j * dy;
        if (j + 1 < u.rows()) t += dy * std::clamp(u(i, j) / (u(i, j) - u(i, j + 1)), 0.0, 1.0);
        top = any ? std::max(top, t) : t;
        any = true;
        break;
      }
    }
  }
  return top < h - dy ? SupportVerdict::Below : SupportVerdict::Indeterminate;
}

inline SupportVerdict support_below(const MinimizeResult& r, double h) {
  return support_below(r.field, r.grid.dy(), h);
}

// ---------------------------------------------------------------- bounds

struct HcritBounds {
  std::optional<double> lower;
  double upper;
};

/// upper = h*; lower = h*/(2b+2) when theta(h*/(2b+2)) >= h*/(2b+2).
inline HcritBounds hcrit_bounds(double b, double m, const ThetaSchedule& theta) {
  const OneDParams p{b, m, 1.0};
  p.validate();
  const double hs = thresholds(p).h_star;
  const double t_star = hs / (2.0 * b + 2.0);
  HcritBounds out{std::nullopt, hs};
  if (theta(t_star) >= t_star) out.lower = std::pow(m, 1.0 / (b + 1.0)) / std::pow(2.0 * b + 1.0, b / (b + 1.0));
  return out;
}

inline double rearrangement_constant(double b) {
  return std::pow(2.0 * b + 2.0, 2.0 * b + 2.0) / std::pow(2.0 * b + 1.0, 2.0 * b + 1.0);
}

struct LowerCertificate {
  double a_best;
  double c_best;
  double h_lower;  ///< a_best * h*
};

/// Largest a in (0, (2B)^{-1/(2b+2)}] with theta(a h*) >= c(a) h*, where
/// c(a) = a / (1 - B a^{2b+2}). Then h_cri >= a h*.
inline std::optional<LowerCertificate> hcrit_lower_certificate(double b, double m, const ThetaSchedule& theta) {
  const OneDParams p{b, m, 1.0};
  p.validate();
  const double hs = thresholds(p).h_star;
  const double B = rearrangement_constant(b);
  const double a_max = std::pow(2.0 * B, -1.0 / (2.0 * b + 2.0));
  auto c_of = [&](double a) { return a / (1.0 - B * std::pow(a, 2.0 * b + 2.0)); };
  auto ok = [&](double a) { return theta(a * hs) >= c_of(a) * hs; };
  const double a_min = 1e-12 * a_max;
  if (!ok(a_min)) return std::nullopt;
  const double a = bisect_last_true(ok, a_min, a_max, kRootRelTol);
  return LowerCertificate{a, c_of(a), a * hs};
}

// ---------------------------------------------------------------- critical height

struct GridPolicy {
  int nx = 96;
  int ny = 192;
  int ladder = 4;                 ///< interior probes before bisection
  bool refine_indeterminate = true;
  double grad_tol = 1e-4;
};

struct HcritProbe {
  double h = 0.0;
  double gamma = 0.0;
  SupportVerdict verdict = SupportVerdict::Indeterminate;
  SupportVerdict verdict_flat = SupportVerdict::Indeterminate;
  SupportVerdict verdict_full = SupportVerdict::Indeterminate;
  double energy = 0.0;
  double energy_flat = 0.0;
  double energy_full = 0.0;
  bool refined = false;          ///< re-solved at doubled resolution
  bool forced_below = false;     ///< still Indeterminate after refinement
  bool converged = false;
  GridSpec grid{};
  MinimizeResult chosen;

  bool below() const { return verdict == SupportVerdict::Below; }
};

struct HcritResult {
  double b = 0.0;
  double m = 0.0;
  double lambda = 0.0;
  double h_lo = 0.0;  ///< highest probe whose support crosses
  double h_hi = 0.0;  ///< lowest probe whose support stays below
  double initial_lo = 0.0;
  double initial_hi = 0.0;
  bool bounds_used = false;
  double stop_width = 0.0;
  GridSpec grid{};
  std::vector<HcritProbe> probes;  ///< sorted by h
  bool single_switch = false;
  bool all_converged = true;
  std::string diagnostic;

  double h_cri() const { return 0.5 * (h_lo + h_hi); }
};

class BracketInvalidError : public Error {
 public:
  explicit BracketInvalidError(HcritResult r)
      : Error(ErrorCode::BracketInvalid, r.diagnostic), result_(std::move(r)) {}
  const HcritResult& result() const { return result_; }

 private:
  HcritResult result_;
};

namespace detail {

inline SupportVerdict combine_verdicts(const MinimizeResult& flat, SupportVerdict vf, const MinimizeResult& full,
                                       SupportVerdict vu, const MinimizeResult** chosen) {
  const double ef = flat.energy.total;
  const double eu = full.energy.total;
  const double tie = 1e-6 * std::max(1.0, std::max(std::abs(ef), std::abs(eu)));
  if (std::abs(ef - eu) <= tie) {
    // Equal energies: both are minimizers, and existence of one with bounded
    // support is what decides the predicate.
    if (vf == SupportVerdict::Below || vu == SupportVerdict::Below) {
      *chosen = vf == SupportVerdict::Below ? &flat : &full;
      return SupportVerdict::Below;
    }
    if (vf == SupportVerdict::Indeterminate || vu == SupportVerdict::Indeterminate) {
      *chosen = vf == SupportVerdict::Indeterminate ? &flat : &full;
      return SupportVerdict::Indeterminate;
    }
    *chosen = &full;
    return SupportVerdict::Crosses;
  }
  if (ef < eu) {
    *chosen = &flat;
    return vf;
  }
  *chosen = &full;
  return vu;
}

inline HcritProbe probe_once(double b, double m, double lambda, double h, double gamma, const GridSpec& grid,
                             double grad_tol) {
  const StripParams p{b, m, h, gamma, lambda};
  SolveConfig cfg = SolveConfig::defaults(p, grid);
  cfg.grad_tol = grad_tol;
  cfg.max_extensions = 0;
  const auto two = minimize_two_starts(p, grid, cfg);
  HcritProbe pr;
  pr.h = h;
  pr.gamma = gamma;
  pr.grid = grid;
  pr.verdict_flat = support_below(two.flat, h);
  pr.verdict_full = support_below(two.full, h);
  pr.energy_flat = two.flat.energy.total;
  pr.energy_full = two.full.energy.total;
  const MinimizeResult* chosen = nullptr;
  pr.verdict = combine_verdicts(two.flat, pr.verdict_flat, two.full, pr.verdict_full, &chosen);
  pr.chosen = *chosen;
  pr.energy = chosen->energy.total;
  pr.converged = two.flat.converged && two.full.converged;
  return pr;
}

inline HcritProbe probe(double b, double m, double lambda, const ThetaSchedule& theta, double h,
                        const GridSpec& grid, const GridPolicy& pol) {
  const double gamma = theta(h);
  HcritProbe pr = probe_once(b, m, lambda, h, gamma, grid, pol.grad_tol);
  if (pr.verdict == SupportVerdict::Indeterminate && pol.refine_indeterminate) {
    pr = probe_once(b, m, lambda, h, gamma, grid.refined(), pol.grad_tol);
    pr.refined = true;
  }
  if (pr.verdict == SupportVerdict::Indeterminate) {
    // A crossing support is unbounded, so a top within a cell of h can only
    // come from the bounded side.
    pr.verdict = SupportVerdict::Below;
    pr.forced_below = true;
  }
  return pr;
}

inline void sort_probes(std::vector<HcritProbe>& v) {
  std::sort(v.begin(), v.end(), [](const HcritProbe& a, const HcritProbe& c) { return a.h < c.h; });
}

/// Number of verdict changes along h; the expected pattern is crosses ... below.
inline int switch_count(const std::vector<HcritProbe>& v) {
  int n = 0;
  for (std::size_t k = 1; k < v.size(); ++k) n += v[k].below() != v[k - 1].below();
  return n;
}

}  // namespace detail

inline HcritResult critical_height(double b, double m, double lambda, const ThetaSchedule& theta,
                                   const GridPolicy& pol = {}) {
  const OneDParams p1{b, m, 1.0};
  p1.validate();
  require(lambda > 0.0, ErrorCode::InvalidArgument, "lambda must be positive");
  require(pol.ladder >= 0, ErrorCode::InvalidArgument, "ladder must be nonnegative");
  const double hs = thresholds(p1).h_star;
  const HcritBounds bounds = hcrit_bounds(b, m, theta);

  HcritResult res;
  res.b = b;
  res.m = m;
  res.lambda = lambda;
  res.bounds_used = bounds.lower.has_value();
  res.initial_lo = bounds.lower ? *bounds.lower : 0.1 * hs;
  res.initial_hi = bounds.lower ? bounds.upper : 2.0 * hs;
  // One strip for the whole run so that every probe sees the same truncation.
  res.grid = GridSpec{pol.nx, pol.ny, lambda, std::max(theta(res.initial_lo), res.initial_hi) + lambda};
  res.grid.validate();
  res.stop_width = std::max(2.0 * res.grid.dy(), 1e-3 * hs);

  std::vector<double> hs_ladder;
  const int n = pol.ladder + 2;
  for (int k = 0; k < n; ++k) {
    hs_ladder.push_back(res.initial_lo + (res.initial_hi - res.initial_lo) * k / (n - 1));
  }
  res.probes.resize(hs_ladder.size());
  parallel_for(hs_ladder.size(), [&](std::size_t k) {
    res.probes[k] = detail::probe(b, m, lambda, theta, hs_ladder[k], res.grid, pol);
  });

  auto fail = [&](const std::string& why) {
    detail::sort_probes(res.probes);
    res.single_switch = detail::switch_count(res.probes) == 1 && !res.probes.front().below();
    for (const auto& pr : res.probes) res.all_converged = res.all_converged && pr.converged;
    res.diagnostic = why;
    throw BracketInvalidError(res);
  };

  if (res.probes.front().below()) fail("support already below at the lower end of the bracket");
  if (!res.probes.back().below()) fail("support still crosses at the upper end of the bracket");
  if (detail::switch_count(res.probes) != 1) fail("support predicate is not monotone in h across the ladder");

  std::size_t first_below = 0;
  while (!res.probes[first_below].below()) ++first_below;
  double lo = res.probes[first_below - 1].h;
  double hi = res.probes[first_below].h;
  while (hi - lo >= res.stop_width) {
    const double mid = 0.5 * (lo + hi);
    HcritProbe pr = detail::probe(b, m, lambda, theta, mid, res.grid, pol);
    (pr.below() ? hi : lo) = mid;
    res.probes.push_back(std::move(pr));
  }
  detail::sort_probes(res.probes);
  res.h_lo = lo;
  res.h_hi = hi;
  res.single_switch = detail::switch_count(res.probes) == 1;
  for (const auto& pr : res.probes) res.all_converged = res.all_converged && pr.converged;
  if (!res.single_switch) fail("support predicate is not monotone in h across the bisection probes");
  return res;
}

// ---------------------------------------------------------------- scaling

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

/// Least squares fit of log y against log x.
inline ScalingFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 3, ErrorCode::InvalidArgument, "fit needs at least 3 points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    require(x[k] > 0.0 && y[k] > 0.0, ErrorCode::InvalidArgument, "fit needs positive data");
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  require(den > 0.0, ErrorCode::Degenerate, "fit abscissae coincide");
  ScalingFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  for (std::size_t k = 0; k < x.size(); ++k) {
    f.max_residual = std::max(f.max_residual, std::abs(std::log(y[k]) - f.intercept - f.slope * std::log(x[k])));
  }
  return f;
}

struct ScalingPoint {
  double m = 0.0;
  ThetaSchedule theta;
  HcritBounds bounds{};
  HcritResult hcrit;
  bool within_bounds = false;
};

struct ScalingResult {
  double b = 0.0;
  double lambda = 0.0;
  std::vector<ScalingPoint> points;
  ScalingFit fit;
};

/// theta_m = theta_1 scaled by m^{1/(b+1)}, which keeps the lower-bound
/// hypothesis valid for every m once it holds at m = 1.
inline ScalingResult scaling_sweep(double b, const std::vector<double>& m_list, double lambda,
                                   const ThetaSchedule& theta_unit, const GridPolicy& pol = {}) {
  require(m_list.size() >= 3, ErrorCode::InvalidArgument, "scaling needs at least 3 values of m");
  ScalingResult out;
  out.b = b;
  out.lambda = lambda;
  std::vector<double> ms, hc;
  for (double m : m_list) {
    ScalingPoint pt;
    pt.m = m;
    pt.theta = theta_unit.scaled(std::pow(m, 1.0 / (b + 1.0)));
    pt.bounds = hcrit_bounds(b, m, pt.theta);
    pt.hcrit = critical_height(b, m, lambda, pt.theta, pol);
    const double lo = pt.bounds.lower.value_or(0.0);
    pt.within_bounds = pt.hcrit.h_lo >= lo && pt.hcrit.h_hi <= pt.bounds.upper;
    ms.push_back(m);
    hc.push_back(pt.hcrit.h_cri());
    out.points.push_back(std::move(pt));
  }
  out.fit = loglog_fit(ms, hc);
  return out;
}

// ---------------------------------------------------------------- monotonicity

struct MonotonicityReport {
  double d = 0.0;
  double h = 0.0;
  GridSpec grid{};
  MinimizeResult lower;   ///< solve at d
  MinimizeResult upper;   ///< solve at h
  long support_nodes = 0;  ///< nodes with u_h > 0
  long inclusion_violations = 0;
  double violation_fraction = 0.0;
  double max_excess = 0.0;  ///< max over nodes of u_h - u_d
  double ordering_tol = 0.0;
  bool inclusion_ok = false;
  bool ordering_ok = false;
  bool ok() const { return inclusion_ok && ordering_ok; }
};

inline constexpr double kViolationFraction = 0.005;

/// Compares the lower-energy solves at heights d <= h on one shared grid.
inline MonotonicityReport monotonicity_check(double b, double m, double lambda, double d, double h,
                                             const ThetaSchedule& theta, int nx, int ny, double grad_tol = 1e-4) {
  require(d > 0.0 && d <= h, ErrorCode::InvalidArgument, "need 0 < d <= h");
  MonotonicityReport r;
  r.d = d;
  r.h = h;
  r.grid = GridSpec{nx, ny, lambda, std::max({theta(d), theta(h), h}) + lambda};
  const StripParams pd{b, m, d, theta(d), lambda};
  const StripParams ph{b, m, h, theta(h), lambda};
  SolveConfig cd = SolveConfig::defaults(pd, r.grid);
  SolveConfig ch = SolveConfig::defaults(ph, r.grid);
  cd.grad_tol = ch.grad_tol = grad_tol;
  cd.max_extensions = ch.max_extensions = 0;
  MinimizeResult res[2];
  parallel_for(2, [&](std::size_t k) {
    res[k] = k == 0 ? minimize_two_starts(pd, r.grid, cd).best() : minimize_two_starts(ph, r.grid, ch).best();
  });
  r.lower = std::move(res[0]);
  r.upper = std::move(res[1]);
  const auto& ud = r.lower.field;
  const auto& uh = r.upper.field;
  r.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < uh.size(); ++k) {
    if (uh[k] > 0.0) {
      ++r.support_nodes;
      if (!(ud[k] > 0.0)) ++r.inclusion_violations;
    }
    r.max_excess = std::max(r.max_excess, uh[k] - ud[k]);
  }
  r.violation_fraction = r.support_nodes ? double(r.inclusion_violations) / r.support_nodes : 0.0;
  r.ordering_tol = 10.0 * grad_tol;
  r.inclusion_ok = r.violation_fraction <= kViolationFraction;
  r.ordering_ok = r.max_excess <= r.ordering_tol;
  return r;
}

// ---------------------------------------------------------------- symmetry

/// Reflection x -> -x of a field on the period cell; the seam is fixed.
inline ScalarField mirror(const ScalarField& u) {
  const int nx = u.nx();
  ScalarField out(nx, u.rows());
  for (int j = 0; j < u.rows(); ++j) {
    for (int i = 0; i < nx; ++i) out(i, j) = u((nx - i) % nx, j);
  }
  return out;
}

/// Column order by increasing distance to the centre column nx/2:
/// nx/2, nx/2+1, nx/2-1, nx/2+2, ..., ending at the seam.
inline std::vector<int> centre_out_order(int nx) {
  std::vector<int> order{nx / 2};
  for (int k = 1; static_cast<int>(order.size()) < nx; ++k) {
    order.push_back((nx / 2 + k) % nx);
    if (static_cast<int>(order.size()) < nx) order.push_back(nx / 2 - k);
  }
  return order;
}

/// Row-wise symmetric decreasing rearrangement.
inline ScalarField rearrange(const ScalarField& u) {
  const int nx = u.nx();
  const auto order = centre_out_order(nx);
  ScalarField out(nx, u.rows());
  std::vector<double> row(nx);
  for (int j = 0; j < u.rows(); ++j) {
    for (int i = 0; i < nx; ++i) row[i] = u(i, j);
    std::sort(row.begin(), row.end(), std::greater<>());
    for (int k = 0; k < nx; ++k) out(order[k], j) = row[k];
  }
  return out;
}

/// Nodes where u grows when moving one column away from the centre by more
/// than tol, counted on both halves.
inline long monotone_violations(const ScalarField& u, double tol) {
  const int nx = u.nx();
  const int c = nx / 2;
  long n = 0;
  for (int j = 0; j < u.rows(); ++j) {
    for (int k = 1; k <= nx - c; ++k) {
      const int outer = (c + k) % nx;
      if (u(outer, j) > u(c + k - 1, j) + tol) ++n;
    }
    for (int k = 1; k <= c; ++k) {
      if (u(c - k, j) > u(c - k + 1, j) + tol) ++n;
    }
  }
  return n;
}

struct SymmetryReport {
  double energy = 0.0;
  double mirror_energy = 0.0;
  double mirror_diff = 0.0;
  bool mirror_ok = false;
  double rearranged_energy = 0.0;
  double energy_tol = 0.0;
  bool rearranged_ok = false;
  bool bulk_equal = false;
  bool row_counts_equal = false;
  long monotone_violations = 0;
  double violation_fraction = 0.0;
  bool monotone_ok = false;
  bool ok() const { return mirror_ok && rearranged_ok && bulk_equal && row_counts_equal && monotone_ok; }
};

inline constexpr double kMirrorTol = 1e-10;

inline SymmetryReport symmetry_check(const ScalarField& u, const StripProblem& pb, double grad_tol) {
  SymmetryReport r;
  const auto e0 = discrete_energy(u, pb, 0.0);
  r.energy = e0.total;
  const ScalarField mu = mirror(u);
  r.mirror_energy = discrete_energy(mu, pb, 0.0).total;
  r.mirror_diff = std::abs(r.mirror_energy - r.energy);
  r.mirror_ok = r.mirror_diff <= kMirrorTol;

  const ScalarField ru = rearrange(u);
  const auto er = discrete_energy(ru, pb, 0.0);
  r.rearranged_energy = er.total;
  r.energy_tol = 10.0 * grad_tol;
  r.rearranged_ok = er.total <= e0.total + r.energy_tol;
  r.bulk_equal = er.bulk == e0.bulk;
  r.row_counts_equal = true;
  for (int j = 0; j < u.rows(); ++j) {
    int a = 0, c = 0;
    for (int i = 0; i < u.nx(); ++i) {
      a += u(i, j) > 0.0;
      c += ru(i, j) > 0.0;
    }
    r.row_counts_equal = r.row_counts_equal && a == c;
  }
  r.monotone_violations = monotone_violations(u, 10.0 * grad_tol);
  r.violation_fraction = double(r.monotone_violations) / double(u.size());
  r.monotone_ok = r.violation_fraction <= kViolationFraction;
  return r;
}

inline SymmetryReport symmetry_check(const MinimizeResult& res) {
  return symmetry_check(res.field, StripProblem(res.params, res.grid), res.grad_tol);
}

}  // namespace fbstrip
