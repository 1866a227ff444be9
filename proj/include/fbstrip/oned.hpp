#pragma once

// One-dimensional reduction of the strip energy.
//
// For profiles depending only on the height s, the energy per unit of cross
// section is minimized by the ramps v_t(s) = m (1 - s/t)_+, whose energy is
//
//   g(t) = m^2 / t + (h^{2b+1} - (h - min(h, t))^{2b+1}) / (2b + 1).
//
// Everything in this header is a closed form or a bracketed root of g' = 0
// (equivalently psi(t) = t^2 (h - t)^{2b} - m^2 = 0). All functions are pure.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fbstrip/error.hpp"
#include "fbstrip/roots.hpp"

namespace fbstrip {

/// Relative tolerance used to decide that two regime-defining numbers coincide.
inline constexpr double kBoundaryRelTol = 1e-9;
/// Relative tolerance of every bisection in this module.
inline constexpr double kRootRelTol = 1e-12;

struct OneDParams {
  double b;  ///< exponent of the weight (h - s)_+^b
  double m;  ///< Dirichlet datum at s = 0
  double h;  ///< height where the weight vanishes

  void validate() const {
    require(b > 0.0 && std::isfinite(b), ErrorCode::InvalidArgument, "b must be positive");
    require(m > 0.0 && std::isfinite(m), ErrorCode::InvalidArgument, "m must be positive");
    require(h > 0.0 && std::isfinite(h), ErrorCode::InvalidArgument, "h must be positive");
  }

  OneDParams with_h(double new_h) const { return {b, m, new_h}; }
};

struct Thresholds {
  double h_sharp;  ///< below it g is monotone
  double h_star;   ///< from it on the interior minimum beats the tail limit
};

struct CriticalPoints {
  double t;  ///< local minimum of g
  double T;  ///< local maximum of g
};

enum class Regime { SubSharp, AtSharp, TwoCritical, SuperStar };

/// Tags for parameter values that sit on a regime boundary within
/// kBoundaryRelTol. They are surfaced rather than silently assigned.
enum class BoundaryTag { None, AtSharp, AtStar, GammaAtT, GammaAtTau };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::SubSharp: return "SubSharp";
    case Regime::AtSharp: return "AtSharp";
    case Regime::TwoCritical: return "TwoCritical";
    case Regime::SuperStar: return "SuperStar";
  }
  return "?";
}

inline std::string_view to_string(BoundaryTag t) {
  switch (t) {
    case BoundaryTag::None: return "None";
    case BoundaryTag::AtSharp: return "AtSharp";
    case BoundaryTag::AtStar: return "AtStar";
    case BoundaryTag::GammaAtT: return "GammaAtT";
    case BoundaryTag::GammaAtTau: return "GammaAtTau";
  }
  return "?";
}

struct OneDClassification {
  Regime regime;
  BoundaryTag boundary = BoundaryTag::None;
  std::optional<CriticalPoints> critical;
  std::optional<double> tau;
  std::vector<double> minimizer_ts;  ///< abscissae t of the global minimizers v_t
  double inf_value;                  ///< inf of the 1-D energy, equal to g at each minimizer
  double gamma;
};

namespace detail {

inline bool near(double a, double b, double rel = kBoundaryRelTol) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace detail

inline Thresholds thresholds(const OneDParams& p) {
  p.validate();
  const double e = 1.0 / (p.b + 1.0);
  const double scale = std::pow(p.m, e);
  return {(p.b + 1.0) * std::pow(p.b, -p.b * e) * scale,
          (2.0 * p.b + 2.0) * std::pow(2.0 * p.b + 1.0, -p.b * e) * scale};
}

/// Energy of the ramp v_t.
inline double g_eval(const OneDParams& p, double t) {
  require(t > 0.0, ErrorCode::InvalidArgument, "g_eval needs t > 0");
  const double k = 2.0 * p.b + 1.0;
  const double gap = p.h - std::min(p.h, t);
  return p.m * p.m / t + (std::pow(p.h, k) - std::pow(gap, k)) / k;
}

/// g'(t); continuous across t = h.
inline double g_derivative(const OneDParams& p, double t) {
  require(t > 0.0, ErrorCode::InvalidArgument, "g_derivative needs t > 0");
  const double tail = t < p.h ? std::pow(p.h - t, 2.0 * p.b) : 0.0;
  return -p.m * p.m / (t * t) + tail;
}

/// psi(t) = t^2 (h - t)^{2b} - m^2 on (0, h); g'(t) = psi(t) / t^2 there.
inline double psi_eval(const OneDParams& p, double t) {
  require(t > 0.0 && t < p.h, ErrorCode::InvalidArgument, "psi_eval needs 0 < t < h");
  return t * t * std::pow(p.h - t, 2.0 * p.b) - p.m * p.m;
}

inline Regime regime_of(const OneDParams& p, BoundaryTag* tag = nullptr) {
  const auto th = thresholds(p);
  BoundaryTag local = BoundaryTag::None;
  Regime r;
  if (detail::near(p.h, th.h_sharp)) {
    local = BoundaryTag::AtSharp;
    r = Regime::AtSharp;
  } else if (p.h < th.h_sharp) {
    r = Regime::SubSharp;
  } else if (detail::near(p.h, th.h_star)) {
    local = BoundaryTag::AtStar;
    r = Regime::SuperStar;
  } else if (p.h < th.h_star) {
    r = Regime::TwoCritical;
  } else {
    r = Regime::SuperStar;
  }
  if (tag) *tag = local;
  return r;
}

/// Roots of psi by bisection on the two monotone branches (0, h/(b+1)) and
/// (h/(b+1), h). Requires h above the sharp threshold.
inline CriticalPoints critical_points_bisection(const OneDParams& p) {
  const double apex = p.h / (p.b + 1.0);
  auto psi = [&](double t) { return t * t * std::pow(p.h - t, 2.0 * p.b) - p.m * p.m; };
  require(psi(apex) > 0.0, ErrorCode::Degenerate, "no interior critical points at this h");
  return {bisect(psi, 0.0, apex, kRootRelTol), bisect(psi, apex, p.h, kRootRelTol)};
}

/// Trigonometric solution of t^3 - h t^2 + m^2 = 0 (the b = 1/2 case).
inline CriticalPoints critical_points_cubic(double m, double h) {
  const double arg = std::clamp(1.0 - 13.5 * m * m / (h * h * h), -1.0, 1.0);
  const double theta = std::acos(arg);
  const double pi = std::numbers::pi;
  return {2.0 * h / 3.0 * std::cos((theta + 4.0 * pi) / 3.0) + h / 3.0,
          2.0 * h / 3.0 * std::cos(theta / 3.0) + h / 3.0};
}

inline std::optional<CriticalPoints> critical_points(const OneDParams& p) {
  BoundaryTag tag;
  const Regime r = regime_of(p, &tag);
  if (r == Regime::SubSharp) return std::nullopt;
  if (r == Regime::AtSharp) {
    const double apex = p.h / (p.b + 1.0);
    return CriticalPoints{apex, apex};
  }
  const auto bis = critical_points_bisection(p);
  if (p.b == 0.5) {
    const auto cf = critical_points_cubic(p.m, p.h);
    // The arccos form loses digits only when h approaches the sharp threshold.
    const double tol = 1e-7 * p.h;
    if (std::abs(cf.t - bis.t) > tol || std::abs(cf.T - bis.T) > tol) {
      throw std::logic_error("cubic closed form disagrees with bisection");
    }
    return cf;
  }
  return bis;
}

/// The unique tau > T with g(tau) = g(t), defined for h in [h_sharp, h_star).
inline std::optional<double> tau(const OneDParams& p) {
  BoundaryTag tag;
  const Regime r = regime_of(p, &tag);
  if (r == Regime::SubSharp || r == Regime::SuperStar) return std::nullopt;
  if (r == Regime::AtSharp) return p.h / (p.b + 1.0);

  const auto cp = *critical_points(p);
  const double target = g_eval(p, cp.t);
  auto diff = [&](double s) { return g_eval(p, s) - target; };

  // g decreases on (T, inf). Grow the bracket geometrically; once it would pass
  // h, the tail g = m^2/s + h^{2b+1}/(2b+1) is inverted exactly.
  double lo = cp.T;
  double hi = cp.T;
  while (true) {
    const double next = std::min(2.0 * hi, p.h);
    if (diff(next) <= 0.0) {
      hi = next;
      break;
    }
    if (next == p.h) {
      const double k = 2.0 * p.b + 1.0;
      return p.m * p.m / (target - std::pow(p.h, k) / k);
    }
    lo = next;
    hi = next;
  }
  return bisect(diff, lo, hi, kRootRelTol);
}

inline OneDClassification classify_oned(const OneDParams& p, double gamma) {
  p.validate();
  require(gamma > 0.0 && std::isfinite(gamma), ErrorCode::InvalidArgument, "gamma must be positive");
  OneDClassification out{};
  out.gamma = gamma;
  out.regime = regime_of(p, &out.boundary);
  out.critical = critical_points(p);
  out.tau = tau(p);

  auto set = [&](std::vector<double> ts) {
    out.minimizer_ts = std::move(ts);
    out.inf_value = g_eval(p, out.minimizer_ts.front());
  };

  switch (out.regime) {
    case Regime::SubSharp:
    case Regime::AtSharp:
      set({gamma});
      break;
    case Regime::TwoCritical: {
      const double t = out.critical->t;
      const double ta = *out.tau;
      if (detail::near(gamma, t)) {
        out.boundary = BoundaryTag::GammaAtT;
        set({gamma});
      } else if (gamma < t) {
        set({gamma});
      } else if (detail::near(gamma, ta)) {
        out.boundary = BoundaryTag::GammaAtTau;
        set({t, gamma});
      } else if (gamma < ta) {
        set({t});
      } else {
        set({gamma});
      }
      break;
    }
    case Regime::SuperStar: {
      const double t = out.critical->t;
      if (detail::near(gamma, t)) {
        if (out.boundary == BoundaryTag::None) out.boundary = BoundaryTag::GammaAtT;
        set({gamma});
      } else {
        set({std::min(gamma, t)});
      }
      break;
    }
  }
  return out;
}

enum class AdmissibleReason {
  SubSharpAll,   ///< h below the sharp threshold: every gamma
  BelowT,        ///< gamma < t_h
  AboveTau,      ///< gamma > tau_h
  BetweenTTau,   ///< t_h < gamma < tau_h: flat profiles may win
  AboveTSuper,   ///< h >= h_star and gamma > t_h
  Boundary,      ///< gamma equals t_h or tau_h within tolerance
};

inline std::string_view to_string(AdmissibleReason r) {
  switch (r) {
    case AdmissibleReason::SubSharpAll: return "SubSharpAll";
    case AdmissibleReason::BelowT: return "BelowT";
    case AdmissibleReason::AboveTau: return "AboveTau";
    case AdmissibleReason::BetweenTTau: return "BetweenTTau";
    case AdmissibleReason::AboveTSuper: return "AboveTSuper";
    case AdmissibleReason::Boundary: return "Boundary";
  }
  return "?";
}

struct Admissibility {
  bool admissible;
  AdmissibleReason reason;
};

/// True when g'(gamma) < 0 and the flat infimum is attained at t = gamma:
/// then every global minimizer with lateral Dirichlet height gamma is non-flat.
inline Admissibility gamma_admissible(const OneDParams& p, double gamma) {
  const auto c = classify_oned(p, gamma);
  if (c.regime == Regime::SubSharp) return {true, AdmissibleReason::SubSharpAll};
  const double t = c.critical->t;
  if (detail::near(gamma, t)) return {false, AdmissibleReason::Boundary};
  if (gamma < t) return {true, AdmissibleReason::BelowT};
  if (c.tau) {
    if (detail::near(gamma, *c.tau)) return {false, AdmissibleReason::Boundary};
    if (gamma > *c.tau) return {true, AdmissibleReason::AboveTau};
    return {false, AdmissibleReason::BetweenTTau};
  }
  return {false, AdmissibleReason::AboveTSuper};
}

struct Sensitivity {
  double t_prime;    ///< d t_h / dh, negative
  double T_prime;    ///< d T_h / dh, positive
  int tau_monotone;  ///< sign of d tau_h / dh
};

inline Sensitivity sensitivity(const OneDParams& p) {
  BoundaryTag tag;
  const Regime r = regime_of(p, &tag);
  require(r == Regime::TwoCritical || r == Regime::SuperStar, ErrorCode::Degenerate,
          "derivatives of t_h, T_h need h above the sharp threshold");
  const auto cp = *critical_points(p);
  const double b = p.b;
  return {-b * cp.t / (p.h - (b + 1.0) * cp.t), -b * cp.T / (p.h - (b + 1.0) * cp.T), +1};
}

struct BruteForceMin {
  double t_best;
  double value;
};

/// Minimum of g over the uniform grid gamma k / n, k = 1..n. Independent of
/// the case analysis above; used as its cross-check.
inline BruteForceMin oned_energy_bruteforce(const OneDParams& p, double gamma, int grid_points) {
  p.validate();
  require(gamma > 0.0 && std::isfinite(gamma), ErrorCode::InvalidArgument, "gamma must be positive");
  require(grid_points >= 1000, ErrorCode::InvalidArgument, "grid_points must be at least 1000");
  BruteForceMin best{gamma, g_eval(p, gamma)};
  for (int k = 1; k < grid_points; ++k) {
    const double t = gamma * k / grid_points;
    const double v = g_eval(p, t);
    if (v < best.value) best = {t, v};
  }
  return best;
}

}  // namespace fbstrip
