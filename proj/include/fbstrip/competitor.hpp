#pragma once

// Pyramid competitor.
//
// Over the period cell R = (-lambda/2, lambda/2)^{N-1} put the pyramid with
// base R x {gamma} and apex (0, gamma + delta); f(x') is its height. The test
// function w(x', s) = m (1 - s / f(x'))_+ lies in the admissible class, and
// for admissible gamma its energy drops below lambda^{N-1} g(gamma) at first
// order in delta. Energies are evaluated exactly (1-D quadrature after using
// the 2^{N-1}(N-1)-fold symmetry of the pyramid), not from the expansion.

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

#include "fbstrip/energy_breakdown.hpp"
#include "fbstrip/error.hpp"
#include "fbstrip/oned.hpp"
#include "fbstrip/quadrature.hpp"

namespace fbstrip {

struct CompetitorParams {
  OneDParams oned;
  double gamma;
  double lambda;
  int dims = 2;
  double delta = 0.0;  ///< apex elevation; ignored by the delta-free operations

  void validate_base() const {
    oned.validate();
    require(gamma > 0.0 && std::isfinite(gamma), ErrorCode::InvalidArgument, "gamma must be positive");
    require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::InvalidArgument,
            "lambda must be positive");
    require(dims >= 2, ErrorCode::InvalidArgument, "dims must be at least 2");
  }

  void validate() const {
    validate_base();
    require(delta > 0.0 && std::isfinite(delta), ErrorCode::InvalidArgument, "delta must be positive");
    if (gamma < oned.h) {
      require(gamma + delta <= oned.h, ErrorCode::DeltaTooLarge,
              "gamma + delta must not exceed h when gamma < h");
    }
  }

  CompetitorParams with_delta(double d) const {
    CompetitorParams c = *this;
    c.delta = d;
    return c;
  }

  /// lambda^{N-1}, the measure of the period cell.
  double cell_measure() const { return std::pow(lambda, dims - 1); }
};

/// Height of the pyramid over x' (closed cube of side lambda).
inline double pyramid_height(const CompetitorParams& cp, std::span<const double> x_prime) {
  require(static_cast<int>(x_prime.size()) == cp.dims - 1, ErrorCode::InvalidArgument,
          "x' must have N-1 coordinates");
  double r = 0.0;
  for (double xi : x_prime) r = std::max(r, std::abs(xi));
  require(r <= 0.5 * cp.lambda * (1.0 + 1e-14), ErrorCode::InvalidArgument,
          "x' outside the period cell");
  return cp.gamma + cp.delta * (1.0 - 2.0 * std::min(r, 0.5 * cp.lambda) / cp.lambda);
}

/// w at a point of the strip; the first N-1 coordinates are wrapped into the
/// period cell, the last one is the height.
inline double competitor_eval(const CompetitorParams& cp, std::span<const double> x) {
  require(static_cast<int>(x.size()) == cp.dims, ErrorCode::InvalidArgument,
          "x must have N coordinates");
  require(x.back() >= 0.0, ErrorCode::InvalidArgument, "x_N must be nonnegative");
  double wrapped[16];
  require(cp.dims - 1 <= 16, ErrorCode::InvalidArgument, "dims too large");
  for (int i = 0; i + 1 < cp.dims; ++i) {
    const double l = cp.lambda;
    wrapped[i] = x[i] - l * std::floor(x[i] / l + 0.5);
  }
  const double f = pyramid_height(cp, std::span<const double>(wrapped, cp.dims - 1));
  return cp.oned.m * std::max(0.0, 1.0 - x.back() / f);
}

/// Dirichlet energy of w for N = 2 in closed form:
/// m^2 (4 delta^2 / (3 lambda) + lambda) (1/delta) log(1 + delta/gamma).
inline double competitor_dirichlet_2d(const CompetitorParams& cp) {
  const double m = cp.oned.m;
  const double d = cp.delta;
  return m * m * (4.0 * d * d / (3.0 * cp.lambda) + cp.lambda) * std::log1p(d / cp.gamma) / d;
}

inline EnergyBreakdown competitor_energy(const CompetitorParams& cp) {
  cp.validate();
  const double m = cp.oned.m;
  const double h = cp.oned.h;
  const double b = cp.oned.b;
  const double lam = cp.lambda;
  const double d = cp.delta;
  const double g = cp.gamma;
  const int n = cp.dims;
  const double sectors = std::pow(2.0, n - 1) * (n - 1);
  const double k = 2.0 * b + 1.0;
  QuadratureOptions opt;

  const double f_int = integrate(
      [&](double x) { return std::pow(x, n - 2) / ((g + d) * lam - 2.0 * d * x); }, 0.0,
      0.5 * lam, opt);
  double dirichlet = sectors * m * m * (4.0 * d * d / (3.0 * lam) + lam) * f_int;
  if (n == 2) {
    const double closed = competitor_dirichlet_2d(cp);
    if (std::abs(closed - dirichlet) > 1e-9 * std::abs(closed)) {
      throw std::logic_error("pyramid Dirichlet quadrature disagrees with closed form");
    }
    dirichlet = closed;
  }

  double bulk = cp.cell_measure() * std::pow(h, k) / k;
  if (g < h) {
    const double g_int = integrate(
        [&](double x) {
          return std::pow(x, n - 2) * std::pow(h - g - d + 2.0 * d * x / lam, k);
        },
        0.0, 0.5 * lam, opt);
    bulk -= sectors / k * g_int;
  }
  return EnergyBreakdown::of(dirichlet, bulk);
}

/// Zeroth and first order coefficients of delta -> energy(w_delta).
struct ExpansionCoeffs {
  double c0;
  double c1;
};

inline ExpansionCoeffs expansion_coeffs(const CompetitorParams& cp) {
  cp.validate_base();
  const double cell = cp.cell_measure();
  const auto& p = cp.oned;
  const double c0 = cell * g_eval(p, cp.gamma);
  if (cp.gamma < p.h) return {c0, cell * g_derivative(p, cp.gamma) / cp.dims};
  return {c0, -cell * p.m * p.m / (cp.dims * cp.gamma * cp.gamma)};
}

struct DeltaSearch {
  double delta_star;
  EnergyBreakdown energy;
  double target;  ///< lambda^{N-1} g(gamma), the flat-profile energy
};

inline constexpr double kDeltaFloor = 1e-8;

/// Default strict-improvement margin: 1e-6 of the flat energy.
inline double default_margin(const CompetitorParams& cp) {
  return 1e-6 * cp.cell_measure() * g_eval(cp.oned, cp.gamma);
}

/// First delta in delta0, delta0/2, ... (down to 1e-8) whose competitor
/// undercuts the flat energy by more than `margin`.
inline std::optional<DeltaSearch> find_delta(const CompetitorParams& cp, double margin) {
  cp.validate_base();
  require(margin >= 0.0, ErrorCode::InvalidArgument, "margin must be nonnegative");
  const double h = cp.oned.h;
  const double target = cp.cell_measure() * g_eval(cp.oned, cp.gamma);
  const double span = cp.gamma < h ? std::min(cp.gamma, h - cp.gamma) : cp.gamma;
  for (double d = 0.5 * span; d >= kDeltaFloor; d *= 0.5) {
    const auto e = competitor_energy(cp.with_delta(d));
    if (e.total < target - margin) return DeltaSearch{d, e, target};
  }
  return std::nullopt;
}

/// Lowest competitor energy over the geometric ladder delta0 / 2^k, k < levels.
inline DeltaSearch best_competitor(const CompetitorParams& cp, int levels = 40) {
  cp.validate_base();
  const double h = cp.oned.h;
  const double target = cp.cell_measure() * g_eval(cp.oned, cp.gamma);
  std::optional<DeltaSearch> best;
  // Finer ladder than find_delta: 8 steps per halving, from the largest valid delta.
  double d = cp.gamma < h ? h - cp.gamma : cp.gamma;
  const double ratio = std::pow(0.5, 1.0 / 8.0);
  for (int k = 0; k < 8 * levels && d >= kDeltaFloor; ++k, d *= ratio) {
    const auto e = competitor_energy(cp.with_delta(d));
    if (!best || e.total < best->energy.total) best = DeltaSearch{d, e, target};
  }
  return *best;
}

enum class CertificateStatus { Pass, NotAdmissible, Inconsistent };

inline std::string_view to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::Pass: return "PASS";
    case CertificateStatus::NotAdmissible: return "NotAdmissible";
    case CertificateStatus::Inconsistent: return "Inconsistent";
  }
  return "?";
}

struct NonflatCertificate {
  CertificateStatus status;
  Admissibility admissibility;
  double flat_energy;  ///< lambda^{N-1} g(gamma)
  double margin;
  std::optional<DeltaSearch> witness;
  double gap = 0.0;  ///< flat_energy - witness energy, when a witness exists
};

/// Machine check that a non-flat competitor strictly beats every flat profile.
inline NonflatCertificate verify_nonflat(const OneDParams& p, double gamma, double lambda, int dims,
                                         std::optional<double> margin = std::nullopt) {
  CompetitorParams cp{p, gamma, lambda, dims, 0.0};
  cp.validate_base();
  NonflatCertificate cert{};
  cert.admissibility = gamma_admissible(p, gamma);
  cert.flat_energy = cp.cell_measure() * g_eval(p, gamma);
  cert.margin = margin.value_or(default_margin(cp));
  if (!cert.admissibility.admissible) {
    cert.status = CertificateStatus::NotAdmissible;
    return cert;
  }
  cert.witness = find_delta(cp, cert.margin);
  if (!cert.witness) {
    cert.status = CertificateStatus::Inconsistent;
    return cert;
  }
  cert.gap = cert.flat_energy - cert.witness->energy.total;
  cert.status = CertificateStatus::Pass;
  return cert;
}

}  // namespace fbstrip
