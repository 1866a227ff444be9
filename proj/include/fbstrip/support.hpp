#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "fbstrip/error.hpp"
#include "fbstrip/grid.hpp"

namespace fbstrip {

struct Support {
  Mask mask;                                      ///< {u > threshold}
  std::vector<double> top;                        ///< per column; NaN when empty
  std::vector<std::pair<double, double>> polyline;  ///< (x, top) of nonempty columns
  double max_top = 0.0;                           ///< 0 when the mask is empty
  bool empty = true;
};

/// Support of a field. Column tops are the highest node above threshold,
/// moved up to where the linear interpolant towards the next node crosses
/// the threshold.
inline Support extract_support(const ScalarField& u, double dx, double dy, double lambda, double threshold) {
  require(threshold >= 0.0, ErrorCode::InvalidArgument, "threshold must be nonnegative");
  const int nx = u.nx();
  const int rows = u.rows();
  Support s;
  s.mask = Mask(nx, rows, 0);
  s.top.assign(nx, std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i < nx; ++i) {
    int jt = -1;
    for (int j = 0; j < rows; ++j) {
      if (u(i, j) > threshold) {
        s.mask(i, j) = 1;
        jt = j;
      }
    }
    if (jt < 0) continue;
    double t = jt * dy;
    if (jt + 1 < rows) {
      const double a = u(i, jt);
      const double b = u(i, jt + 1);
      t += dy * std::clamp((a - threshold) / (a - b), 0.0, 1.0);
    }
    s.top[i] = t;
    s.polyline.emplace_back(-0.5 * lambda + i * dx, t);
    s.max_top = s.empty ? t : std::max(s.max_top, t);
    s.empty = false;
  }
  return s;
}

inline Support extract_support(const ScalarField& u, const StripProblem& pb, double threshold) {
  return extract_support(u, pb.dx(), pb.dy(), pb.grid().lambda, threshold);
}

/// Largest lateral range max_i u - min_i u over the rows.
inline double flatness_metric(const ScalarField& u) {
  double worst = 0.0;
  for (int j = 0; j < u.rows(); ++j) {
    double lo = u(0, j);
    double hi = lo;
    for (int i = 1; i < u.nx(); ++i) {
      lo = std::min(lo, u(i, j));
      hi = std::max(hi, u(i, j));
    }
    worst = std::max(worst, hi - lo);
  }
  return worst;
}

}  // namespace fbstrip
