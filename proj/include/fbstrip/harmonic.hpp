#pragma once

// Discrete Laplace solve on a masked subset of the strip grid.

#include <cmath>
#include <vector>

#include "fbstrip/error.hpp"
#include "fbstrip/grid.hpp"

namespace fbstrip {

/// Nodes of `mask` reachable from the bottom row through masked free nodes
/// (4-neighbour, periodic in x). Fixed nodes are never traversed except the
/// bottom row, which seeds the search.
inline Mask bottom_connected(const Mask& mask, const StripProblem& pb) {
  const int nx = pb.nx();
  const int rows = pb.rows();
  Mask keep(nx, rows, 0);
  std::vector<std::size_t> stack;
  for (int i = 0; i < nx; ++i) {
    keep(i, 0) = 1;
    stack.push_back(pb.index(i, 0));
  }
  const auto& fixed = pb.fixed();
  while (!stack.empty()) {
    const std::size_t k = stack.back();
    stack.pop_back();
    const int i = static_cast<int>(k % nx);
    const int j = static_cast<int>(k / nx);
    const std::size_t nb[4] = {pb.index(i + 1 == nx ? 0 : i + 1, j), pb.index(i == 0 ? nx - 1 : i - 1, j),
                               j + 1 < rows ? pb.index(i, j + 1) : k, j > 0 ? pb.index(i, j - 1) : k};
    for (std::size_t q : nb) {
      if (!keep[q] && mask[q] && !fixed[q]) {
        keep[q] = 1;
        stack.push_back(q);
      }
    }
  }
  return keep;
}

struct HarmonicStats {
  int iterations = 0;
  double rel_residual = 0.0;
};

inline constexpr double kHarmonicRelTol = 1e-10;

/// Solves the 5-point Laplace equation on masked free nodes, with the fixed
/// nodes of `boundary` as Dirichlet data and zero on unmasked free nodes.
/// Returns the new field; `boundary` supplies only the fixed values.
inline ScalarField harmonic_solve(const Mask& mask, const ScalarField& boundary, const StripProblem& pb,
                                  HarmonicStats* stats = nullptr) {
  const int nx = pb.nx();
  const int rows = pb.rows();
  require(mask.nx() == nx && mask.rows() == rows, ErrorCode::InvalidArgument, "mask shape mismatch");
  require(boundary.nx() == nx && boundary.rows() == rows, ErrorCode::InvalidArgument,
          "boundary field shape mismatch");
  for (int i = 0; i < nx; ++i) {
    require(mask(i, 0) != 0, ErrorCode::SingularMask, "mask must contain the bottom row");
  }
  const auto& fixed = pb.fixed();
  const Mask reach = bottom_connected(mask, pb);
  for (std::size_t k = 0; k < mask.size(); ++k) {
    require(!(mask[k] && !fixed[k] && !reach[k]), ErrorCode::SingularMask,
            "masked region without connection to the bottom boundary");
  }

  const std::size_t n = mask.size();
  std::vector<char> free(n);
  for (std::size_t k = 0; k < n; ++k) free[k] = mask[k] && !fixed[k];

  ScalarField u(nx, rows, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (fixed[k]) u[k] = boundary[k];
  }

  const double cx = pb.dy() / pb.dx();
  const double cy = pb.dx() / pb.dy();
  const double diag = 2.0 * (cx + cy);

  // A acts on free nodes only; b collects the fixed-neighbour contributions.
  auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
    for (int j = 0; j < rows; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t k = pb.index(i, j);
        if (!free[k]) {
          out[k] = 0.0;
          continue;
        }
        const std::size_t nb[4] = {pb.index(i + 1 == nx ? 0 : i + 1, j), pb.index(i == 0 ? nx - 1 : i - 1, j),
                                   pb.index(i, j + 1), pb.index(i, j - 1)};
        const double c[4] = {cx, cx, cy, cy};
        double r = diag * v[k];
        for (int q = 0; q < 4; ++q) {
          if (free[nb[q]]) r -= c[q] * v[nb[q]];
        }
        out[k] = r;
      }
    }
  };

  std::vector<double> rhs(n, 0.0);
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = pb.index(i, j);
      if (!free[k]) continue;
      const std::size_t nb[4] = {pb.index(i + 1 == nx ? 0 : i + 1, j), pb.index(i == 0 ? nx - 1 : i - 1, j),
                                 pb.index(i, j + 1), pb.index(i, j - 1)};
      const double c[4] = {cx, cx, cy, cy};
      for (int q = 0; q < 4; ++q) {
        if (fixed[nb[q]]) rhs[k] += c[q] * u[nb[q]];
      }
    }
  }
  auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
    return s;
  };

  const double bnorm = std::sqrt(dot(rhs, rhs));
  HarmonicStats st;
  if (bnorm > 0.0) {
    std::vector<double> x(n, 0.0), r = rhs, p = rhs, ap(n);
    double rr = dot(r, r);
    const int max_it = static_cast<int>(10 * n) + 100;
    while (std::sqrt(rr) > kHarmonicRelTol * bnorm && st.iterations < max_it) {
      apply(p, ap);
      const double alpha = rr / dot(p, ap);
      for (std::size_t k = 0; k < n; ++k) {
        x[k] += alpha * p[k];
        r[k] -= alpha * ap[k];
      }
      const double rn = dot(r, r);
      const double beta = rn / rr;
      rr = rn;
      for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
      ++st.iterations;
    }
    // Report the true residual, not the recursively updated one.
    apply(x, ap);
    double res = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = rhs[k] - ap[k];
      res += d * d;
    }
    st.rel_residual = std::sqrt(res) / bnorm;
    for (std::size_t k = 0; k < n; ++k) {
      if (free[k]) u[k] = std::max(0.0, x[k]);
    }
  }
  if (stats) *stats = st;
  return u;
}

}  // namespace fbstrip
