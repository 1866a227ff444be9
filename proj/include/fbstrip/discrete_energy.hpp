#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "fbstrip/energy_breakdown.hpp"
#include "fbstrip/error.hpp"
#include "fbstrip/grid.hpp"

namespace fbstrip {

/// Smoothed indicator: min(s/eps, 1) for eps > 0, [s > 0] for eps = 0.
inline double indicator(double s, double eps) {
  if (eps > 0.0) return std::min(s / eps, 1.0);
  return s > 0.0 ? 1.0 : 0.0;
}

inline void check_boundary(const ScalarField& u, const StripProblem& pb) {
  require(u.nx() == pb.nx() && u.rows() == pb.rows(), ErrorCode::BoundaryViolation,
          "field shape does not match the grid");
  for (std::size_t k = 0; k < u.size(); ++k) {
    require(u[k] >= 0.0 && std::isfinite(u[k]), ErrorCode::BoundaryViolation,
            "field must be finite and nonnegative (node " + std::to_string(k) + ")");
    if (pb.fixed()[k]) {
      require(u[k] == pb.fixed_value()[k], ErrorCode::BoundaryViolation,
              "boundary value violated at node " + std::to_string(k));
    }
  }
}

namespace detail {

// Unchecked evaluation; row-major summation order.
inline EnergyBreakdown energy_raw(const ScalarField& u, const StripProblem& pb, double eps) {
  const int nx = pb.nx();
  const int rows = pb.rows();
  const double cx = pb.dy() / pb.dx();
  const double cy = pb.dx() / pb.dy();
  const auto& w = pb.row_weight();
  double dir = 0.0;
  double bulk = 0.0;
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double v = u(i, j);
      const int ip = i + 1 == nx ? 0 : i + 1;
      double d = u(ip, j) - v;
      dir += cx * d * d;
      if (j + 1 < rows) {
        d = u(i, j + 1) - v;
        dir += cy * d * d;
      }
      bulk += w[j] * indicator(v, eps);
    }
  }
  return EnergyBreakdown::of(dir, bulk);
}

}  // namespace detail

/// Discrete energy of a field satisfying the boundary data.
inline EnergyBreakdown discrete_energy(const ScalarField& u, const StripProblem& pb, double eps) {
  require(eps >= 0.0, ErrorCode::InvalidArgument, "eps must be nonnegative");
  check_boundary(u, pb);
  return detail::energy_raw(u, pb, eps);
}

/// Gradient of the eps-relaxed energy (eps > 0); zero on fixed nodes.
inline void energy_gradient(const ScalarField& u, const StripProblem& pb, double eps, ScalarField& g) {
  const int nx = pb.nx();
  const int rows = pb.rows();
  const double cx = pb.dy() / pb.dx();
  const double cy = pb.dx() / pb.dy();
  const auto& w = pb.row_weight();
  const auto& fixed = pb.fixed();
  if (g.nx() != nx || g.rows() != rows) g = ScalarField(nx, rows, 0.0);
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (fixed(i, j)) {
        g(i, j) = 0.0;
        continue;
      }
      const int ip = i + 1 == nx ? 0 : i + 1;
      const int im = i == 0 ? nx - 1 : i - 1;
      const double v = u(i, j);
      const double lap = cx * (2.0 * v - u(ip, j) - u(im, j)) + cy * (2.0 * v - u(i, j + 1) - u(i, j - 1));
      g(i, j) = 2.0 * lap + (v < eps ? w[j] / eps : 0.0);
    }
  }
}

}  // namespace fbstrip
