#pragma once

namespace fbstrip {

/// The two terms of the strip energy: gradient (Dirichlet) part and the
/// weighted area of the positivity set.
struct EnergyBreakdown {
  double dirichlet = 0.0;
  double bulk = 0.0;
  double total = 0.0;

  static EnergyBreakdown of(double dirichlet, double bulk) {
    return {dirichlet, bulk, dirichlet + bulk};
  }
};

}  // namespace fbstrip
