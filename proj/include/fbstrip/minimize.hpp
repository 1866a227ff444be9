#pragma once

// Grid minimization of the strip energy.
//
// The indicator of {u > 0} is replaced by the ramp min(u/eps, 1) and the
// relaxed energy is minimized by projected accelerated gradient descent
// (projection = clamp at 0 and re-impose the boundary data), with eps
// halved from eps0 down to eps_floor. The last iterate is polished: its
// support is frozen, u is replaced by the discrete harmonic function on it,
// and the energy is reported with the strict indicator.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string_view>
#include <vector>

#include "fbstrip/discrete_energy.hpp"
#include "fbstrip/error.hpp"
#include "fbstrip/grid.hpp"
#include "fbstrip/harmonic.hpp"
#include "fbstrip/oned.hpp"
#include "fbstrip/support.hpp"

namespace fbstrip {

enum class InitKind { FlatProfile, FullSupport };

inline std::string_view to_string(InitKind k) {
  return k == InitKind::FlatProfile ? "FlatProfile" : "FullSupport";
}

struct SolveConfig {
  double eps0 = 0.0;
  double eps_floor = 0.0;
  double anneal_factor = 0.5;
  int max_outer = 64;       ///< cap on annealing stages
  int max_inner = 200000;   ///< cap on descent iterations per stage
  double grad_tol = 1e-4;   ///< projected-gradient norm, per unit area
  InitKind init = InitKind::FlatProfile;
  double init_t = 0.0;      ///< FlatProfile height; 0 selects the 1-D optimum
  int max_extensions = 1;   ///< L_top doublings allowed when the support reaches the top

  /// eps0 = m/2 and eps_floor = m dy / gamma.
  static SolveConfig defaults(const StripParams& p, const GridSpec& g) {
    SolveConfig c;
    c.eps0 = 0.5 * p.m;
    c.eps_floor = std::min(p.m * g.dy() / p.gamma, 0.25 * c.eps0);
    return c;
  }

  SolveConfig with_init(InitKind k) const {
    SolveConfig c = *this;
    c.init = k;
    return c;
  }

  void validate() const {
    require(eps_floor > 0.0 && eps_floor < eps0, ErrorCode::InvalidArgument, "need 0 < eps_floor < eps0");
    require(anneal_factor > 0.0 && anneal_factor < 1.0, ErrorCode::InvalidArgument,
            "anneal_factor must lie in (0, 1)");
    require(max_outer >= 1 && max_inner >= 1, ErrorCode::InvalidArgument, "iteration caps must be positive");
    require(grad_tol > 0.0, ErrorCode::InvalidArgument, "grad_tol must be positive");
    require(init_t >= 0.0, ErrorCode::InvalidArgument, "init_t must be nonnegative");
    require(max_extensions >= 0, ErrorCode::InvalidArgument, "max_extensions must be nonnegative");
  }
};

struct SolveFlags {
  bool non_convergence = false;
  bool support_touches_top = false;
};

struct MinimizeResult {
  StripParams params;
  GridSpec grid;
  InitKind init = InitKind::FlatProfile;
  ScalarField field;
  EnergyBreakdown energy;
  double flatness = 0.0;
  std::vector<double> support_top;  ///< per column, NaN when empty
  double max_top = 0.0;
  bool converged = false;
  long iterations = 0;
  int stages = 0;
  int extensions = 0;
  SolveFlags flags;
  bool descent_monotone = true;        ///< accepted relaxed energies never increased
  std::vector<double> stage_energy;    ///< relaxed energy at the end of each stage
  double polish_residual = 0.0;        ///< relative CG residual of the polish
  bool kept_start = false;             ///< the initial field beat the polished one
  double snap_distance = 0.0;
  double eps_floor = 0.0;
  double grad_tol = 0.0;
};

namespace detail {

inline double projected_grad_norm(const ScalarField& x, const ScalarField& g, const StripProblem& pb) {
  const double area = pb.dx() * pb.dy();
  const auto& fixed = pb.fixed();
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (fixed[k]) continue;
    double gg = g[k] / area;
    if (x[k] <= 0.0 && gg > 0.0) gg = 0.0;
    s += gg * gg * area;
  }
  return std::sqrt(s);
}

struct StageOutcome {
  long iterations = 0;
  bool converged = false;
  bool monotone = true;
  double energy = 0.0;
};

// Accelerated projected gradient with backtracking and restart on increase.
inline StageOutcome descend(ScalarField& x, const StripProblem& pb, double eps, const SolveConfig& cfg) {
  const std::size_t n = x.size();
  const auto& fixed = pb.fixed();
  const auto& fval = pb.fixed_value();
  const double lip = 2.0 * (4.0 * pb.dy() / pb.dx() + 4.0 * pb.dx() / pb.dy());
  const double step0 = 1.0 / lip;

  StageOutcome out;
  ScalarField y = x;
  ScalarField xn = x;
  ScalarField g(pb.nx(), pb.rows(), 0.0);
  double ex = energy_raw(x, pb, eps).total;
  double tk = 1.0;

  energy_gradient(x, pb, eps, g);
  if (projected_grad_norm(x, g, pb) < cfg.grad_tol) {
    out.converged = true;
    out.energy = ex;
    return out;
  }

  for (long it = 0; it < cfg.max_inner; ++it) {
    out.iterations = it + 1;
    energy_gradient(y, pb, eps, g);
    const double ey = energy_raw(y, pb, eps).total;
    double st = step0;
    double en = 0.0;
    while (true) {
      double lin = 0.0;
      double quad = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        xn[k] = fixed[k] ? fval[k] : std::max(0.0, y[k] - st * g[k]);
        const double d = xn[k] - y[k];
        lin += g[k] * d;
        quad += d * d;
      }
      en = energy_raw(xn, pb, eps).total;
      if (en <= ey + lin + quad / (2.0 * st) + 1e-14 || st < 1e-12 * step0) break;
      st *= 0.5;
    }
    if (en > ex) {
      // Momentum overshoot: restart from the last accepted iterate.
      tk = 1.0;
      y = x;
      continue;
    }
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    const double mom = (tk - 1.0) / tn;
    for (std::size_t k = 0; k < n; ++k) {
      const double v = xn[k] + mom * (xn[k] - x[k]);
      y[k] = fixed[k] ? fval[k] : std::max(0.0, v);
    }
    if (en > ex) out.monotone = false;
    x.values().swap(xn.values());
    ex = en;
    tk = tn;
    energy_gradient(x, pb, eps, g);
    if (projected_grad_norm(x, g, pb) < cfg.grad_tol) {
      out.converged = true;
      break;
    }
  }
  out.energy = ex;
  return out;
}

inline double default_flat_height(const StripParams& p) {
  const auto cls = classify_oned(p.oned(), p.gamma);
  return cls.minimizer_ts.front();
}

inline MinimizeResult minimize_once(const StripParams& p, const GridSpec& grid, const SolveConfig& cfg) {
  const StripProblem pb(p, grid);
  MinimizeResult res;
  res.params = p;
  res.grid = grid;
  res.init = cfg.init;
  res.snap_distance = pb.snap_distance();
  res.eps_floor = cfg.eps_floor;
  res.grad_tol = cfg.grad_tol;

  const double t0 = cfg.init_t > 0.0 ? cfg.init_t : default_flat_height(p);
  ScalarField x = pb.flat_profile(t0);
  if (cfg.init == InitKind::FullSupport) {
    x = harmonic_solve(Mask(pb.nx(), pb.rows(), 1), x, pb);
  }
  const ScalarField start = x;

  double eps = cfg.eps0;
  bool all_converged = true;
  for (int stage = 0; stage < cfg.max_outer; ++stage) {
    const auto so = descend(x, pb, eps, cfg);
    res.iterations += so.iterations;
    res.stages = stage + 1;
    res.stage_energy.push_back(so.energy);
    res.descent_monotone = res.descent_monotone && so.monotone;
    all_converged = so.converged;
    if (eps <= cfg.eps_floor) break;
    eps = std::max(cfg.eps_floor, eps * cfg.anneal_factor);
    if (stage + 1 == cfg.max_outer) all_converged = false;
  }
  res.converged = all_converged;
  res.flags.non_convergence = !all_converged;

  // Polish on the bottom-connected part of the relaxed support.
  Mask mask(pb.nx(), pb.rows(), 0);
  for (int j = 0; j < pb.rows(); ++j) {
    const double thr = pb.y(j) < p.h ? cfg.eps_floor : 0.0;
    for (int i = 0; i < pb.nx(); ++i) mask(i, j) = x(i, j) > thr;
  }
  for (int i = 0; i < pb.nx(); ++i) mask(i, 0) = 1;
  mask = bottom_connected(mask, pb);
  HarmonicStats hs;
  res.field = harmonic_solve(mask, x, pb, &hs);
  res.polish_residual = hs.rel_residual;
  res.energy = discrete_energy(res.field, pb, 0.0);
  // The relaxed descent can end above an admissible start.
  const EnergyBreakdown e_start = discrete_energy(start, pb, 0.0);
  if (e_start.total < res.energy.total) {
    res.field = start;
    res.energy = e_start;
    res.kept_start = true;
  }
  res.flatness = flatness_metric(res.field);
  const Support sup = extract_support(res.field, pb, 0.0);
  res.support_top = sup.top;
  res.max_top = sup.max_top;
  for (int j = std::max(0, pb.ny() - 2); j < pb.rows() && !res.flags.support_touches_top; ++j) {
    for (int i = 0; i < pb.nx(); ++i) {
      if (res.field(i, j) > 0.0) {
        res.flags.support_touches_top = true;
        break;
      }
    }
  }
  return res;
}

}  // namespace detail

/// Minimizes from one initialization. When the support reaches the top two
/// rows the strip is doubled in height (same dy) up to max_extensions times;
/// the flag stays set if it still touches.
inline MinimizeResult minimize(const StripParams& p, const GridSpec& grid, const SolveConfig& cfg) {
  p.validate();
  grid.validate();
  cfg.validate();
  GridSpec g = grid;
  MinimizeResult res = detail::minimize_once(p, g, cfg);
  int ext = 0;
  while (res.flags.support_touches_top && ext < cfg.max_extensions) {
    g = g.doubled_height();
    ++ext;
    res = detail::minimize_once(p, g, cfg);
  }
  res.extensions = ext;
  return res;
}

inline MinimizeResult minimize(const StripParams& p, const GridSpec& grid) {
  return minimize(p, grid, SolveConfig::defaults(p, grid));
}

struct TwoStartResult {
  MinimizeResult flat;
  MinimizeResult full;

  const MinimizeResult& best() const { return full.energy.total < flat.energy.total ? full : flat; }
};

inline TwoStartResult minimize_two_starts(const StripParams& p, const GridSpec& grid, const SolveConfig& cfg) {
  return {minimize(p, grid, cfg.with_init(InitKind::FlatProfile)),
          minimize(p, grid, cfg.with_init(InitKind::FullSupport))};
}

struct BoundsVerdict {
  double jensen_bound = 0.0;      ///< lambda m^2 / k, k = highest column top
  bool jensen_ok = false;
  double truncation_bound = 0.0;  ///< lambda m^2 / L_top
  bool truncation_ok = false;
  double harmonic_residual = 0.0; ///< max |discrete Laplacian| on free support nodes
  double harmonic_limit = 0.0;    ///< 1e-6 m / dy^2
  bool harmonic_ok = false;
  bool ok() const { return jensen_ok && truncation_ok && harmonic_ok; }
};

inline BoundsVerdict check_bounds(const MinimizeResult& r) {
  const StripProblem pb(r.params, r.grid);
  const double m = r.params.m;
  const double lam = r.params.lambda;
  BoundsVerdict v;
  v.jensen_bound = r.max_top > 0.0 ? lam * m * m / r.max_top : std::numeric_limits<double>::infinity();
  v.jensen_ok = r.energy.total > v.jensen_bound;
  v.truncation_bound = lam * m * m / r.grid.L_top;
  v.truncation_ok = r.energy.total >= v.truncation_bound;

  const int nx = pb.nx();
  const double idx2 = 1.0 / (pb.dx() * pb.dx());
  const double idy2 = 1.0 / (pb.dy() * pb.dy());
  const auto& u = r.field;
  double worst = 0.0;
  for (int j = 1; j + 1 < pb.rows(); ++j) {
    for (int i = 0; i < nx; ++i) {
      if (pb.fixed()(i, j) || u(i, j) <= 0.0) continue;
      const int ip = i + 1 == nx ? 0 : i + 1;
      const int im = i == 0 ? nx - 1 : i - 1;
      const double lap = (u(ip, j) + u(im, j) - 2.0 * u(i, j)) * idx2 +
                         (u(i, j + 1) + u(i, j - 1) - 2.0 * u(i, j)) * idy2;
      worst = std::max(worst, std::abs(lap));
    }
  }
  v.harmonic_residual = worst;
  v.harmonic_limit = 1e-6 * m * idy2;
  v.harmonic_ok = worst < v.harmonic_limit;
  return v;
}

}  // namespace fbstrip
