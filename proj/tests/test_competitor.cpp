#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fbstrip/competitor.hpp"

using namespace fbstrip;

namespace {

const OneDParams kHalf{0.5, 1.0, 2.0};

CompetitorParams cp2(double gamma, double delta, double lambda = 1.0) {
  return {kHalf, gamma, lambda, 2, delta};
}

// Brute-force energy of the pyramid competitor by midpoint rule over the
// period cell. For w = m (1 - s/f)_+ the s-integrals are exact:
//   int_0^f |grad w|^2 ds = m^2 (|grad f|^2 / (3 f) + 1 / f),
//   int_0^{min(f,h)} (h - s)^{2b} ds = (h^k - (h - min(f,h))^k) / k.
// The cell is sampled directly, without the sector reduction.
EnergyBreakdown oracle_energy(const CompetitorParams& cp, int n) {
  const double lam = cp.lambda;
  const double m = cp.oned.m;
  const double h = cp.oned.h;
  const double k = 2 * cp.oned.b + 1;
  const double slope2 = std::pow(2 * cp.delta / lam, 2);
  const double cell = lam / n;
  double dir = 0.0, bulk = 0.0;
  auto column = [&](double r, double weight) {
    const double f = cp.gamma + cp.delta * (1 - 2 * r / lam);
    dir += weight * m * m * (slope2 / (3 * f) + 1 / f);
    bulk += weight * (std::pow(h, k) - std::pow(h - std::min(f, h), k)) / k;
  };
  if (cp.dims == 2) {
    for (int i = 0; i < n; ++i) column(std::abs(-lam / 2 + (i + 0.5) * cell), cell);
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double x = -lam / 2 + (i + 0.5) * cell;
        const double y = -lam / 2 + (j + 0.5) * cell;
        column(std::max(std::abs(x), std::abs(y)), cell * cell);
      }
    }
  }
  return EnergyBreakdown::of(dir, bulk);
}

}  // namespace

TEST(Pyramid, Height) {
  const auto cp = cp2(0.5, 0.1);
  const double centre[] = {0.0};
  const double quarter[] = {0.25};
  const double face[] = {0.5};
  const double outside[] = {0.6};
  EXPECT_DOUBLE_EQ(pyramid_height(cp, centre), 0.6);
  EXPECT_NEAR(pyramid_height(cp, quarter), 0.55, 1e-15);
  EXPECT_DOUBLE_EQ(pyramid_height(cp, face), 0.5);
  EXPECT_THROW(pyramid_height(cp, outside), Error);
  const CompetitorParams c3{kHalf, 0.5, 1.0, 3, 0.2};
  const double face3[] = {0.1, -0.5};
  EXPECT_DOUBLE_EQ(pyramid_height(c3, face3), 0.5);
}

TEST(Pyramid, Eval) {
  const auto cp = cp2(0.5, 0.1);
  const double bottom[] = {0.37, 0.0};
  const double corner[] = {0.5, 0.5};
  const double mid[] = {0.0, 0.3};
  const double wrapped[] = {3.0, 0.3};
  EXPECT_DOUBLE_EQ(competitor_eval(cp, bottom), 1.0);
  EXPECT_DOUBLE_EQ(competitor_eval(cp, corner), 0.0);
  EXPECT_NEAR(competitor_eval(cp, mid), 0.5, 1e-15);
  EXPECT_NEAR(competitor_eval(cp, wrapped), 0.5, 1e-15);
}

TEST(CompetitorEnergy, DirichletClosedForm) {
  const auto e = competitor_energy(cp2(0.5, 0.1));
  const double expect = (4 * 0.01 / 3 + 1) * (1 / 0.1) * std::log(0.6 / 0.5);
  EXPECT_NEAR(e.dirichlet, expect, 1e-12);
  EXPECT_NEAR(e.dirichlet, 1.8475251, 1e-6);
  EXPECT_DOUBLE_EQ(e.total, e.dirichlet + e.bulk);
}

TEST(CompetitorEnergy, FirstOrderNearZero) {
  const auto e = competitor_energy(cp2(0.5, 1e-6));
  EXPECT_NEAR(e.total, 2.875 - 1.25e-6, 1e-9);
  const auto f = competitor_energy(cp2(0.5, 1e-9));
  EXPECT_NEAR(f.total, g_eval(kHalf, 0.5), 1e-8);
}

TEST(CompetitorEnergy, MatchesBruteForceOracle) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 20; ++k) {
    const int dims = k % 2 ? 3 : 2;
    const OneDParams p{0.2 + 1.8 * U(rng), 0.5 + 1.5 * U(rng), 0.5 + 2.5 * U(rng)};
    const double gamma = (k % 4 < 2) ? p.h * (0.1 + 0.7 * U(rng)) : p.h * (1.0 + U(rng));
    const double room = gamma < p.h ? p.h - gamma : gamma;
    const CompetitorParams cp{p, gamma, 0.5 + 1.5 * U(rng), dims, room * (0.05 + 0.9 * U(rng))};
    const auto a = competitor_energy(cp);
    const auto b = oracle_energy(cp, dims == 2 ? 200000 : 1500);
    const double tol = dims == 2 ? 1e-8 : 2e-6;
    EXPECT_NEAR(a.dirichlet, b.dirichlet, tol * b.dirichlet) << k;
    EXPECT_NEAR(a.bulk, b.bulk, tol * std::max(1.0, b.bulk)) << k;
  }
}

TEST(CompetitorEnergy, DeltaTooLarge) {
  try {
    competitor_energy(cp2(1.5, 0.6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DeltaTooLarge);
  }
  EXPECT_NO_THROW(competitor_energy(cp2(1.5, 0.5)));
  EXPECT_NO_THROW(competitor_energy(cp2(3.0, 5.0)));
  EXPECT_THROW(competitor_energy(cp2(0.5, 0.0)), Error);
}

TEST(CompetitorEnergy, JensenLowerBound) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 200; ++k) {
    const int dims = 2 + k % 2;
    const OneDParams p{0.2 + 1.8 * U(rng), 0.2 + 3 * U(rng), 0.3 + 3 * U(rng)};
    const double gamma = p.h * (0.05 + 2 * U(rng));
    const double room = gamma < p.h ? p.h - gamma : gamma;
    const double lam = 0.3 + 2 * U(rng);
    const CompetitorParams cp{p, gamma, lam, dims, room * (0.01 + 0.99 * U(rng))};
    const auto e = competitor_energy(cp);
    EXPECT_TRUE(std::isfinite(e.total));
    EXPECT_GE(e.total, std::pow(lam, dims - 1) * p.m * p.m / (gamma + cp.delta));
  }
}

TEST(CompetitorEnergy, QuadratureMatchesLogForm) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 100; ++k) {
    const CompetitorParams cp{{0.5, 0.5 + U(rng), 3.0}, 0.2 + U(rng), 0.3 + 2 * U(rng), 2, 0.01 + 1.5 * U(rng)};
    const double closed = competitor_dirichlet_2d(cp);
    const double sectors = 2.0;
    const double lam = cp.lambda, d = cp.delta, g = cp.gamma;
    const double quad = sectors * cp.oned.m * cp.oned.m * (4 * d * d / (3 * lam) + lam) *
                        integrate([&](double x) { return 1.0 / ((g + d) * lam - 2 * d * x); }, 0.0, lam / 2);
    EXPECT_NEAR(quad, closed, 1e-10 * closed);
  }
}

TEST(Expansion, Coefficients) {
  auto c = expansion_coeffs({kHalf, 0.5, 1.0, 2});
  EXPECT_DOUBLE_EQ(c.c0, 2.875);
  EXPECT_NEAR(c.c1, -1.25, 1e-14);
  c = expansion_coeffs({kHalf, 3.0, 1.0, 2});
  EXPECT_NEAR(c.c0, 7.0 / 3.0, 1e-14);
  EXPECT_NEAR(c.c1, -1.0 / 18.0, 1e-15);
  c = expansion_coeffs({kHalf, 1.0, 1.0, 2});
  EXPECT_NEAR(c.c1, 0.0, 1e-15);
  c = expansion_coeffs({kHalf, 0.5, 2.0, 3});
  EXPECT_DOUBLE_EQ(c.c0, 4 * 2.875);
  EXPECT_NEAR(c.c1, 4 * -2.5 / 3, 1e-13);
}

TEST(Expansion, SecantSlope) {
  for (auto [gamma, dims] : {std::pair{0.5, 2}, {0.5, 3}, {3.0, 2}, {3.0, 3}, {1.7, 2}}) {
    const CompetitorParams cp{kHalf, gamma, 1.3, dims};
    const auto c = expansion_coeffs(cp);
    const double d = 1e-4;
    auto slope = [&](double s) { return (competitor_energy(cp.with_delta(s)).total - c.c0) / s; };
    const double secant = 2 * slope(d / 2) - slope(d);
    EXPECT_NEAR(secant, c.c1, 1e-3 * std::abs(c.c1)) << gamma << " " << dims;
  }
}

TEST(FindDelta, Examples) {
  auto r = find_delta({kHalf, 0.5, 1.0, 2}, 1e-4);
  ASSERT_TRUE(r);
  EXPECT_LT(r->energy.total, 2.875 - 1e-4);
  EXPECT_DOUBLE_EQ(r->target, 2.875);
  r = find_delta({kHalf, 3.0, 1.0, 2}, 1e-6);
  ASSERT_TRUE(r);
  EXPECT_LT(r->energy.total, 7.0 / 3.0 - 1e-6);
  EXPECT_FALSE(find_delta({kHalf, 1.0, 1.0, 2}, default_margin({kHalf, 1.0, 1.0, 2})));
}

TEST(FindDelta, StartsAtHalfSpan) {
  const auto r = find_delta({kHalf, 0.5, 1.0, 2}, 0.0);
  ASSERT_TRUE(r);
  EXPECT_DOUBLE_EQ(r->delta_star, 0.25);
  const auto s = find_delta({kHalf, 1.8, 1.0, 2}, 0.0);
  if (s) EXPECT_LE(s->delta_star, 0.1);
}

TEST(BestCompetitor, BeatsFlatForAdmissibleGamma) {
  const auto b = best_competitor({kHalf, 0.5, 1.0, 2});
  EXPECT_LT(b.energy.total, 2.875);
  EXPECT_NEAR(b.energy.total, 2.7851, 1e-3);
  EXPECT_LE(b.delta_star, 1.5);
}

TEST(Certificate, Examples) {
  auto c = verify_nonflat(kHalf, 0.5, 1.0, 2);
  EXPECT_EQ(c.status, CertificateStatus::Pass);
  EXPECT_GT(c.gap, c.margin);
  c = verify_nonflat(kHalf, 1.5, 1.0, 2);
  EXPECT_EQ(c.status, CertificateStatus::NotAdmissible);
  EXPECT_FALSE(c.witness);
  c = verify_nonflat(kHalf, 0.5, 1.0, 3);
  EXPECT_EQ(c.status, CertificateStatus::Pass);
  c = verify_nonflat(kHalf, 3.0, 1.0, 2);
  EXPECT_EQ(c.status, CertificateStatus::Pass);
}

TEST(Certificate, RandomAdmissibleDraws) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> U(0, 1);
  int passes = 0;
  while (passes < 50) {
    const OneDParams p{0.2 + 1.8 * U(rng), 0.2 + 2 * U(rng), 0.0};
    const double hs = thresholds({p.b, p.m, 1.0}).h_star;
    const OneDParams q{p.b, p.m, hs * (0.3 + 1.7 * U(rng))};
    const double gamma = q.h * (0.05 + 2.5 * U(rng));
    if (!gamma_admissible(q, gamma).admissible) continue;
    const auto c = verify_nonflat(q, gamma, 0.5 + U(rng), 2 + passes % 2);
    ASSERT_EQ(c.status, CertificateStatus::Pass) << q.b << " " << q.m << " " << q.h << " " << gamma;
    EXPECT_GT(c.gap, c.margin);
    ++passes;
  }
}
