#pragma once

// Truncated periodic strip (-lambda/2, lambda/2) x (0, L_top) and the
// boundary data of the admissible class.
//
// Node (i, j) sits at x_i = -lambda/2 + i dx, y_j = j dy, i = 0..nx-1 and
// j = 0..ny. Column i = 0 is the seam where the period cell is glued to its
// neighbour; above gamma the seam carries u = 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "fbstrip/error.hpp"
#include "fbstrip/oned.hpp"

namespace fbstrip {

template <typename T>
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(int nx, int rows, T fill = T{}) : nx_(nx), rows_(rows), data_(std::size_t(nx) * rows, fill) {}

  int nx() const { return nx_; }
  int rows() const { return rows_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(int i, int j) { return data_[std::size_t(j) * nx_ + i]; }
  const T& operator()(int i, int j) const { return data_[std::size_t(j) * nx_ + i]; }
  T& operator[](std::size_t k) { return data_[k]; }
  const T& operator[](std::size_t k) const { return data_[k]; }

  std::vector<T>& values() { return data_; }
  const std::vector<T>& values() const { return data_; }

  bool operator==(const Grid2D&) const = default;

 private:
  int nx_ = 0;
  int rows_ = 0;
  std::vector<T> data_;
};

/// Node values; rows() == ny + 1.
using ScalarField = Grid2D<double>;
using Mask = Grid2D<char>;

struct GridSpec {
  int nx;
  int ny;
  double lambda;
  double L_top;

  double dx() const { return lambda / nx; }
  double dy() const { return L_top / ny; }

  void validate() const {
    require(nx >= 8, ErrorCode::InvalidArgument, "nx must be at least 8");
    require(ny >= 16, ErrorCode::InvalidArgument, "ny must be at least 16");
    require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::InvalidArgument, "lambda must be positive");
    require(L_top > 0.0 && std::isfinite(L_top), ErrorCode::InvalidArgument, "L_top must be positive");
    const double ratio = dx() / dy();
    require(ratio >= 0.125 && ratio <= 8.0, ErrorCode::InvalidArgument,
            "cell aspect ratio dx/dy must lie in [1/8, 8]");
  }

  /// Same dy, twice the height.
  GridSpec doubled_height() const { return {nx, 2 * ny, lambda, 2.0 * L_top}; }
  GridSpec refined() const { return {2 * nx, 2 * ny, lambda, L_top}; }
};

struct StripParams {
  double b;
  double m;
  double h;
  double gamma;
  double lambda;

  OneDParams oned() const { return {b, m, h}; }

  void validate() const {
    oned().validate();
    require(gamma > 0.0 && std::isfinite(gamma), ErrorCode::InvalidArgument, "gamma must be positive");
    require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::InvalidArgument, "lambda must be positive");
  }

  StripParams with_h(double new_h) const { return {b, m, new_h, gamma, lambda}; }
  StripParams with_gamma(double g) const { return {b, m, h, g, lambda}; }
};

inline GridSpec default_grid(const StripParams& p, int nx, int ny) {
  return {nx, ny, p.lambda, std::max(p.gamma, p.h) + p.lambda};
}

/// Precomputed discretization of one problem instance.
class StripProblem {
 public:
  StripProblem(const StripParams& p, const GridSpec& g) : params_(p), grid_(g) {
    p.validate();
    g.validate();
    require(std::abs(g.lambda - p.lambda) <= 1e-12 * p.lambda, ErrorCode::InvalidArgument,
            "grid period differs from lambda");
    require(g.L_top > std::max(p.gamma, p.h), ErrorCode::InvalidArgument,
            "L_top must exceed max(gamma, h)");
    dx_ = g.dx();
    dy_ = g.dy();
    j_gamma_ = static_cast<int>(std::lround(p.gamma / dy_));
    snap_ = j_gamma_ * dy_ - p.gamma;

    const int nx = g.nx;
    const int rows = g.ny + 1;
    fixed_ = Mask(nx, rows, 0);
    fixed_value_ = ScalarField(nx, rows, 0.0);
    for (int i = 0; i < nx; ++i) {
      fixed_(i, 0) = 1;
      fixed_value_(i, 0) = p.m;
      fixed_(i, g.ny) = 1;
    }
    for (int j = j_gamma_ + 1; j < rows; ++j) fixed_(0, j) = 1;

    // Bulk weight: exact integral of (h - y)_+^{2b} over the dual cell of row j.
    const double k = 2.0 * p.b + 1.0;
    auto prim = [&](double y) {
      y = std::min(y, p.h);
      return (std::pow(p.h, k) - std::pow(p.h - y, k)) / k;
    };
    weight_.resize(rows);
    for (int j = 0; j < rows; ++j) {
      const double lo = std::max(0.0, (j - 0.5) * dy_);
      const double hi = std::min(g.L_top, (j + 0.5) * dy_);
      weight_[j] = dx_ * (prim(hi) - prim(lo));
    }
  }

  const StripParams& params() const { return params_; }
  const GridSpec& grid() const { return grid_; }
  int nx() const { return grid_.nx; }
  int ny() const { return grid_.ny; }
  int rows() const { return grid_.ny + 1; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double x(int i) const { return -0.5 * grid_.lambda + i * dx_; }
  double y(int j) const { return j * dy_; }
  std::size_t index(int i, int j) const { return std::size_t(j) * grid_.nx + i; }

  /// Last seam row that is free; gamma snapped to j_gamma * dy.
  int j_gamma() const { return j_gamma_; }
  double snapped_gamma() const { return j_gamma_ * dy_; }
  double snap_distance() const { return snap_; }

  const Mask& fixed() const { return fixed_; }
  const ScalarField& fixed_value() const { return fixed_value_; }
  const std::vector<double>& row_weight() const { return weight_; }

  ScalarField zero_field() const {
    ScalarField u(nx(), rows(), 0.0);
    impose(u);
    return u;
  }

  void impose(ScalarField& u) const {
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (fixed_[k]) u[k] = fixed_value_[k];
    }
  }

  /// v_t(y) = m (1 - y/t)_+ on every column, boundary data imposed.
  ScalarField flat_profile(double t) const {
    require(t > 0.0, ErrorCode::InvalidArgument, "profile height must be positive");
    ScalarField u(nx(), rows(), 0.0);
    for (int j = 0; j < rows(); ++j) {
      const double v = params_.m * std::max(0.0, 1.0 - y(j) / t);
      for (int i = 0; i < nx(); ++i) u(i, j) = v;
    }
    impose(u);
    return u;
  }

 private:
  StripParams params_;
  GridSpec grid_;
  double dx_ = 0.0;
  double dy_ = 0.0;
  int j_gamma_ = 0;
  double snap_ = 0.0;
  Mask fixed_;
  ScalarField fixed_value_;
  std::vector<double> weight_;
};

}  // namespace fbstrip
