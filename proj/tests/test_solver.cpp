#include <cmath>

#include <gtest/gtest.h>

#include "fbstrip/competitor.hpp"
#include "fbstrip/discrete_energy.hpp"
#include "fbstrip/harmonic.hpp"
#include "fbstrip/minimize.hpp"

using namespace fbstrip;

namespace {

const StripParams kNonflat{0.5, 1.0, 2.0, 0.5, 1.0};

// Competitor sampled at the nodes; the seam data is re-imposed so the
// field is admissible for the discrete problem.
ScalarField sampled_competitor(const StripProblem& pb, double delta) {
  const auto& p = pb.params();
  const CompetitorParams cp{p.oned(), p.gamma, p.lambda, 2, delta};
  ScalarField u(pb.nx(), pb.rows());
  for (int j = 0; j < pb.rows(); ++j) {
    for (int i = 0; i < pb.nx(); ++i) {
      const double x[] = {pb.x(i), pb.y(j)};
      u(i, j) = competitor_eval(cp, x);
    }
  }
  pb.impose(u);
  return u;
}

double best_discrete_flat(const StripProblem& pb) {
  double best = 1e300;
  for (int j = 1; j <= pb.j_gamma(); ++j) {
    best = std::min(best, discrete_energy(pb.flat_profile(pb.y(j)), pb, 0.0).total);
  }
  return best;
}

struct NonflatRun {
  GridSpec grid;
  MinimizeResult res;
};

const NonflatRun& nonflat_run() {
  static const NonflatRun run = [] {
    const GridSpec g = default_grid(kNonflat, 32, 96);
    return NonflatRun{g, minimize(kNonflat, g)};
  }();
  return run;
}

}  // namespace

TEST(Minimize, NonflatExampleBeatsFlatAndCompetitor) {
  const auto& [g, r] = nonflat_run();
  const StripProblem pb(kNonflat, g);
  EXPECT_TRUE(r.converged);
  EXPECT_FALSE(r.flags.non_convergence);
  EXPECT_FALSE(r.flags.support_touches_top);
  EXPECT_LT(r.energy.total, 2.875);
  EXPECT_LT(r.energy.total, best_discrete_flat(pb));
  for (double delta : {0.05, 0.1, 0.1577, 0.2, 0.3, 0.45}) {
    EXPECT_LE(r.energy.total, discrete_energy(sampled_competitor(pb, delta), pb, 0.0).total) << delta;
  }
  EXPECT_GT(r.flatness, 0.05);
  EXPECT_NO_THROW(check_boundary(r.field, pb));
  EXPECT_DOUBLE_EQ(discrete_energy(r.field, pb, 0.0).total, r.energy.total);
}

TEST(Minimize, NonflatExampleBoundsAndDiagnostics) {
  const auto& [g, r] = nonflat_run();
  const auto v = check_bounds(r);
  EXPECT_TRUE(v.jensen_ok) << v.jensen_bound;
  EXPECT_TRUE(v.truncation_ok);
  EXPECT_TRUE(v.harmonic_ok) << v.harmonic_residual << " " << v.harmonic_limit;
  EXPECT_GE(r.energy.total, kNonflat.lambda * kNonflat.m * kNonflat.m / g.L_top);
  EXPECT_TRUE(r.descent_monotone);
  EXPECT_LT(r.polish_residual, 1e-10);
  ASSERT_GE(r.stage_energy.size(), 2u);
  for (std::size_t k = 0; k < r.field.size(); ++k) {
    EXPECT_GE(r.field[k], 0.0);
    EXPECT_LE(r.field[k], kNonflat.m * (1 + 1e-12));
  }
  // the seam pins the support below gamma there
  EXPECT_LE(r.support_top.front(), r.max_top);
  EXPECT_EQ(r.extensions, 0);
}

TEST(Minimize, TinyBulkIsNearlyHarmonic) {
  const StripParams p{0.5, 0.7, 1e-3, 1.98, 1.0};
  const GridSpec g{32, 64, 1.0, 2.0};
  const StripProblem pb(p, g);
  const double dirichlet = discrete_energy(harmonic_solve(Mask(32, 65, 1), pb.zero_field(), pb), pb, 0.0).dirichlet;
  const double bulk_max = p.lambda * std::pow(p.h, 2.0) / 2.0;
  auto cfg = SolveConfig::defaults(p, g);
  cfg.max_extensions = 0;
  const auto r = minimize(p, g, cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_GE(r.energy.total, dirichlet - 1e-6);
  EXPECT_LE(r.energy.total, dirichlet + bulk_max + 1e-6);
}

TEST(Minimize, TwoCriticalExampleStaysNearOneD) {
  const StripParams p{0.5, 1.0, 2.0, 1.5, 1.0};
  const GridSpec g = default_grid(p, 32, 96);
  const auto r = minimize(p, g);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.energy.total, 2.5, 0.05);
  EXPECT_LE(r.energy.total, best_discrete_flat(StripProblem(p, g)) + 1e-12);
}

TEST(Minimize, Deterministic) {
  const StripParams p{0.5, 1.0, 2.0, 0.7, 1.0};
  const GridSpec g = default_grid(p, 16, 48);
  const auto a = minimize(p, g);
  const auto b = minimize(p, g);
  EXPECT_TRUE(a.field == b.field);
  EXPECT_EQ(a.energy.total, b.energy.total);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Minimize, TwoStartsBestIsLower) {
  const StripParams p{0.5, 1.0, 2.0, 0.7, 1.0};
  const GridSpec g = default_grid(p, 16, 48);
  const auto two = minimize_two_starts(p, g, SolveConfig::defaults(p, g));
  EXPECT_EQ(two.flat.init, InitKind::FlatProfile);
  EXPECT_EQ(two.full.init, InitKind::FullSupport);
  EXPECT_LE(two.best().energy.total, two.flat.energy.total);
  EXPECT_LE(two.best().energy.total, two.full.energy.total);
}

TEST(Minimize, SupportTouchingTopIsFlaggedAndExtended) {
  // Above h the support costs nothing, so it fills the strip away from the
  // seam whatever the height.
  const StripParams p{0.5, 1.0, 0.5, 1.95, 1.0};
  const GridSpec g{16, 32, 1.0, 2.0};
  auto cfg = SolveConfig::defaults(p, g);
  cfg.max_extensions = 0;
  const auto r0 = minimize(p, g, cfg);
  EXPECT_TRUE(r0.flags.support_touches_top);
  EXPECT_EQ(r0.extensions, 0);

  cfg.max_extensions = 1;
  const auto r1 = minimize(p, g, cfg);
  EXPECT_EQ(r1.extensions, 1);
  EXPECT_DOUBLE_EQ(r1.grid.L_top, 4.0);
  EXPECT_DOUBLE_EQ(r1.grid.dy(), g.dy());
  EXPECT_TRUE(r1.flags.support_touches_top);
}

TEST(Minimize, IterationCapIsFlagged) {
  const GridSpec g = default_grid(kNonflat, 16, 48);
  auto cfg = SolveConfig::defaults(kNonflat, g);
  cfg.max_inner = 3;
  const auto r = minimize(kNonflat, g, cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_TRUE(r.flags.non_convergence);
  EXPECT_NO_THROW(check_boundary(r.field, StripProblem(kNonflat, g)));
}

TEST(SolveConfig, Validation) {
  const GridSpec g = default_grid(kNonflat, 16, 48);
  const auto d = SolveConfig::defaults(kNonflat, g);
  EXPECT_DOUBLE_EQ(d.eps0, 0.5);
  EXPECT_DOUBLE_EQ(d.eps_floor, std::min(g.dy() / 0.5, 0.125));
  EXPECT_NO_THROW(d.validate());
  auto c = d;
  c.eps_floor = c.eps0;
  EXPECT_THROW(c.validate(), Error);
  c = d;
  c.grad_tol = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = d;
  c.anneal_factor = 1.0;
  EXPECT_THROW(c.validate(), Error);
  EXPECT_THROW(minimize(kNonflat, GridSpec{4, 48, 1.0, 3.0}), Error);
}
