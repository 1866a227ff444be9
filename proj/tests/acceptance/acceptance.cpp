// Acceptance run: one PASS/FAIL line per criterion, INFO lines for context.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fbstrip/fbstrip.hpp"

using namespace fbstrip;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void verdict(int id, bool ok, const std::string& what, double secs) {
  std::printf("%s criterion %d: %s [%.1f s]\n", ok ? "PASS" : "FAIL", id, what.c_str(), secs);
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <typename... A>
void info(const char* fmt, A... a) {
  std::printf("INFO ");
  std::printf(fmt, a...);
  std::printf("\n");
  std::fflush(stdout);
}

// Shared parameter domain for the randomized criteria.
struct Draw {
  OneDParams p;
  double gamma;
  double lambda;
  int dims;
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Draw next() {
    const double b = uniform(0.1, 2.0);
    const double m = uniform(0.1, 5.0);
    const double hs = thresholds({b, m, 1.0}).h_sharp;
    const OneDParams p{b, m, hs * uniform(0.3, 3.0)};
    const double gamma = p.h * uniform(0.05, 2.0);
    const double lambda = uniform(0.5, 2.0);
    const int dims = std::uniform_int_distribution<int>(2, 3)(rng_);
    return {p, gamma, lambda, dims};
  }

 private:
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------

void oned_oracle() {
  const auto t0 = Clock::now();
  Sampler s(1001);
  const int n = 100000;
  int bad_inf = 0, bad_t = 0;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Draw d = s.next();
    const auto bf = oned_energy_bruteforce(d.p, d.gamma, n);
    const auto c = classify_oned(d.p, d.gamma);
    const double rel = std::abs(bf.value - c.inf_value) / c.inf_value;
    worst = std::max(worst, rel);
    bad_inf += rel > 1e-6;
    double dist = 1e300;
    for (double t : c.minimizer_ts) dist = std::min(dist, std::abs(t - bf.t_best));
    bad_t += dist > d.gamma / n * (1 + 1e-9);
  }
  const double secs = seconds_since(t0);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "1-D classification vs 1e5-point scan, 1000 draws: inf mismatches %d (worst rel %.2e), "
                "minimizer mismatches %d",
                bad_inf, worst, bad_t);
  verdict(1, bad_inf == 0 && bad_t == 0 && secs < 30, buf, secs);
}

void closed_form_anchor() {
  const auto t0 = Clock::now();
  const OneDParams p{0.5, 1.0, 2.0};
  const auto cp = critical_points(p);
  const auto th = tau(p);
  const double golden = 0.5 * (1 + std::sqrt(5.0));
  const double e_t = std::abs(cp->t - 1.0);
  const double e_T = std::abs(cp->T - golden);
  const double e_tau = th ? std::abs(*th - 2.0) : 1.0;
  bool ok = cp && e_t <= 1e-10 && e_T <= 1e-10 && e_tau <= 1e-10;

  const double hs = thresholds({0.5, 1.0, 1.0}).h_sharp;
  double worst_cubic = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double h = hs * (1.0 + 9.0 * k / 100.0);
    const auto a = critical_points_cubic(1.0, h);
    const auto b = critical_points_bisection({0.5, 1.0, h});
    worst_cubic = std::max({worst_cubic, std::abs(a.t - b.t), std::abs(a.T - b.T)});
  }
  ok = ok && worst_cubic <= 1e-10;

  Sampler s(2002);
  int sandwich_bad = 0;
  for (int k = 0; k < 100; ++k) {
    const double m = s.uniform(0.1, 10.0);
    const OneDParams q{0.5, m, thresholds({0.5, m, 1.0}).h_sharp * s.uniform(1.001, 5.0)};
    const auto c = critical_points(q);
    const double mid = std::cbrt(2.0) * std::pow(m, 2.0 / 3.0);
    sandwich_bad += !(c && c->t < mid && mid < c->T);
  }
  ok = ok && sandwich_bad == 0;
  const double secs = seconds_since(t0);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "t_h=1 (err %.1e), T_h=golden (err %.1e), tau_h=2 (err %.1e); cubic vs bisection max %.1e; "
                "sandwich failures %d/100",
                e_t, e_T, e_tau, worst_cubic, sandwich_bad);
  verdict(2, ok, buf, secs);
}

void expansion_check() {
  const auto t0 = Clock::now();
  Sampler s(3003);
  const double delta = 1e-4;
  int bad = 0, bad_richardson = 0;
  double worst = 0.0, worst_richardson = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Draw d = s.next();
    const CompetitorParams cp{d.p, d.gamma, d.lambda, d.dims};
    const auto c = expansion_coeffs(cp);
    auto secant = [&](double dl) { return (competitor_energy(cp.with_delta(dl)).total - c.c0) / dl; };
    const double s1 = secant(delta);
    const double rel = std::abs(s1 - c.c1) / std::abs(c.c1);
    worst = std::max(worst, rel);
    bad += rel > 1e-3;
    // Removes the O(delta) term of the secant.
    const double rich = 2 * secant(delta / 2) - s1;
    const double rel_r = std::abs(rich - c.c1) / std::abs(c.c1);
    worst_richardson = std::max(worst_richardson, rel_r);
    bad_richardson += rel_r > 1e-3;
  }
  const double secs = seconds_since(t0);
  char buf[256];
  std::snprintf(buf, sizeof buf, "secant slope at delta=1e-4 vs c1, 100 draws: %d beyond 1e-3 relative (worst %.2e)",
                bad, worst);
  verdict(3, bad == 0 && secs < 10, buf, secs);
  info("criterion 3: extrapolated slope 2S(delta/2)-S(delta) on the same draws: %d beyond 1e-3 (worst %.2e)",
       bad_richardson, worst_richardson);
}

void certificates() {
  const auto t0 = Clock::now();
  Sampler s(4004);
  int pass = 0, inconsistent = 0, thin = 0, draws = 0;
  while (draws < 200) {
    Draw d = s.next();
    int tries = 0;
    while (!gamma_admissible(d.p, d.gamma).admissible && tries++ < 50) d.gamma = d.p.h * s.uniform(0.05, 2.0);
    if (!gamma_admissible(d.p, d.gamma).admissible) continue;
    ++draws;
    const auto cert = verify_nonflat(d.p, d.gamma, d.lambda, d.dims);
    if (cert.status == CertificateStatus::Pass) {
      ++pass;
      thin += !(cert.gap > cert.margin);
    }
    inconsistent += cert.status == CertificateStatus::Inconsistent;
  }
  const double secs = seconds_since(t0);
  char buf[256];
  std::snprintf(buf, sizeof buf, "certificates on 200 admissible draws: PASS %d, Inconsistent %d, gap<=margin %d", pass,
                inconsistent, thin);
  verdict(4, pass == 200 && inconsistent == 0 && thin == 0 && secs < 30, buf, secs);
}

std::vector<MinimizeResult> solves;  // converged solves for the symmetry part of criterion 8

void keep_if_converged(const MinimizeResult& r) {
  if (r.converged) solves.push_back(r);
}

void solver_sandwich() {
  const auto t0 = Clock::now();
  const StripParams p{0.5, 1.0, 2.0, 0.5, 1.0};
  const GridSpec g = default_grid(p, 128, 256);
  const auto cfg = SolveConfig::defaults(p, g);
  const auto r = minimize_two_starts(p, g, cfg).best();
  const auto bounds = check_bounds(r);
  const auto best = best_competitor({p.oned(), p.gamma, p.lambda, 2});
  const GridSpec g2 = g.doubled_height();
  const auto r2 = minimize_two_starts(p, g2, SolveConfig::defaults(p, g2)).best();
  const double drift = std::abs(r2.energy.total - r.energy.total);
  keep_if_converged(r);
  keep_if_converged(r2);
  const double secs = seconds_since(t0);
  const bool ok = r.converged && r.energy.total < 2.875 - 1e-3 && r.energy.total <= best.energy.total + 1e-2 &&
                  r.flatness >= 0.02 * p.m && bounds.harmonic_ok && drift < 1e-6 && secs < 300;
  char buf[400];
  std::snprintf(buf, sizeof buf,
                "128x256 solve: E=%.6f (flat 2.875, competitor %.6f at delta %.4f), flatness %.3f, "
                "harmonic residual %.2e < %.2e, L_top doubling drift %.2e, converged %s",
                r.energy.total, best.energy.total, best.delta_star, r.flatness, bounds.harmonic_residual,
                bounds.harmonic_limit, drift, r.converged ? "yes" : "no");
  verdict(5, ok, buf, secs);
}

void keep_probes(const HcritResult& h) {
  for (const auto& pr : h.probes) keep_if_converged(pr.chosen);
}

void critical_height_check() {
  const auto t0 = Clock::now();
  const auto theta = ThetaSchedule::constant(0.9);
  HcritResult r;
  bool ran = true;
  std::string why;
  try {
    r = critical_height(0.5, 1.0, 1.0, theta, GridPolicy{});
  } catch (const BracketInvalidError& e) {
    r = e.result();
    ran = false;
    why = e.what();
  }
  keep_probes(r);
  const auto cert = hcrit_lower_certificate(0.5, 1.0, theta);
  const double secs = seconds_since(t0);
  const bool inside = r.h_lo >= 0.79370 && r.h_hi <= 2.38110 && r.h_lo < r.h_hi;
  const bool cert_ok = cert && cert->h_lower <= r.h_cri();
  const bool ok = ran && r.single_switch && inside && cert_ok && secs < 1800;
  char buf[400];
  if (ran) {
    std::snprintf(buf, sizeof buf,
                  "96x192 bisection: bracket [%.5f, %.5f] (h_cri %.5f) in [0.79370, 2.38110], %zu probes, single "
                  "switch %s, certificate %.5f <= h_cri",
                  r.h_lo, r.h_hi, r.h_cri(), r.probes.size(), r.single_switch ? "yes" : "no",
                  cert ? cert->h_lower : -1.0);
  } else {
    std::snprintf(buf, sizeof buf, "bracket invalid: %s", why.c_str());
  }
  verdict(6, ok, buf, secs);
}

struct SweepOutcome {
  bool ran = false;
  ScalingResult res;
  std::string why;
  double secs = 0.0;
};

SweepOutcome sweep(int nx, int ny, double lambda) {
  const auto t0 = Clock::now();
  SweepOutcome o;
  GridPolicy pol;
  pol.nx = nx;
  pol.ny = ny;
  try {
    o.res = scaling_sweep(0.5, {0.5, 1.0, 2.0, 4.0}, lambda, ThetaSchedule::constant(0.9), pol);
    o.ran = true;
  } catch (const Error& e) {
    o.why = e.what();
  }
  o.secs = seconds_since(t0);
  return o;
}

std::string describe(const SweepOutcome& o) {
  if (!o.ran) return "sweep failed: " + o.why;
  std::string s;
  char buf[160];
  for (const auto& pt : o.res.points) {
    std::snprintf(buf, sizeof buf, "m=%g h_cri=%.4f%s; ", pt.m, pt.hcrit.h_cri(), pt.within_bounds ? "" : " (outside bounds)");
    s += buf;
  }
  std::snprintf(buf, sizeof buf, "slope %.4f (target 0.6667)", o.res.fit.slope);
  return s + buf;
}

void scaling_check() {
  const double target = 2.0 / 3.0;
  auto within = [](const SweepOutcome& o) {
    bool all = o.ran;
    if (o.ran) {
      for (const auto& pt : o.res.points) all = all && pt.within_bounds;
    }
    return all;
  };

  const auto coarse = sweep(64, 128, 1.0);
  if (coarse.ran) {
    for (const auto& pt : coarse.res.points) keep_probes(pt.hcrit);
  }
  const bool coarse_ok =
      coarse.ran && std::abs(coarse.res.fit.slope - target) <= 0.15 && within(coarse) && coarse.secs < 1200;
  info("criterion 7 coarse 64x128, lambda=1: %s [%.1f s]", describe(coarse).c_str(), coarse.secs);

  const auto fine = sweep(96, 192, 1.0);
  if (fine.ran) {
    for (const auto& pt : fine.res.points) keep_probes(pt.hcrit);
  }
  const bool fine_ok = fine.ran && std::abs(fine.res.fit.slope - target) <= 0.1 && within(fine) && fine.secs < 7200;
  info("criterion 7 at 96x192, lambda=1: %s [%.1f s]", describe(fine).c_str(), fine.secs);

  char buf[300];
  std::snprintf(buf, sizeof buf,
                "log-log slope of h_cri over m in {0.5,1,2,4}, lambda=1: 96x192 %.4f (need 0.6667+-0.1), "
                "coarse 64x128 %.4f (need +-0.15)",
                fine.ran ? fine.res.fit.slope : NAN, coarse.ran ? coarse.res.fit.slope : NAN);
  verdict(7, coarse_ok && fine_ok, buf, coarse.secs + fine.secs);

  // The period enters as lambda/m^{1/(b+1)}; a wide cell shows the asymptotic exponent.
  const auto wide = sweep(64, 128, 8.0);
  info("criterion 7 context, coarse 64x128 with lambda=8: %s [%.1f s]", describe(wide).c_str(), wide.secs);
}

void structure_check() {
  const auto t0 = Clock::now();
  const auto mono =
      monotonicity_check(0.5, 1.0, 1.0, 1.0, 1.5, ThetaSchedule::constant(0.9), 96, 192, GridPolicy{}.grad_tol);
  int sym_fail = 0;
  double worst_mirror = 0.0;
  for (const auto& r : solves) {
    const auto rep = symmetry_check(r);
    worst_mirror = std::max(worst_mirror, rep.mirror_diff);
    if (!rep.ok()) {
      ++sym_fail;
      info("symmetry failure: h=%g gamma=%g mirror %.2e rearranged %.8f vs %.8f bulk_equal %d counts %d "
           "violations %.4f",
           r.params.h, r.params.gamma, rep.mirror_diff, rep.rearranged_energy, rep.energy, rep.bulk_equal,
           rep.row_counts_equal, rep.violation_fraction);
    }
  }
  const double secs = seconds_since(t0);
  char buf[300];
  std::snprintf(buf, sizeof buf,
                "monotonicity d=1, h=1.5: inclusion violations %.4f%% of %ld nodes, max(u_h-u_d) %.2e <= %.1e; "
                "symmetry on %zu converged solves: %d failures (worst mirror diff %.1e)",
                100 * mono.violation_fraction, mono.support_nodes, mono.max_excess, mono.ordering_tol, solves.size(),
                sym_fail, worst_mirror);
  verdict(8, mono.ok() && sym_fail == 0 && !solves.empty(), buf, secs);
}

}  // namespace

int main() {
  info("worker threads: %u", worker_count());
  oned_oracle();
  closed_form_anchor();
  expansion_check();
  certificates();
  solver_sandwich();
  critical_height_check();
  scaling_check();
  structure_check();
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
