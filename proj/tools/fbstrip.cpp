// fbstrip: command-line front end.
//
// Exit codes: 0 success, 1 failed run or failed check (report still
// written), 2 invalid arguments.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fbstrip/fbstrip.hpp"

namespace fs = std::filesystem;
using namespace fbstrip;

namespace {

struct Physics {
  double b = 0.5;
  double m = 1.0;
  double h = 2.0;
  double gamma = 0.5;
  double lambda = 1.0;
};

struct Output {
  std::string dir = "fbstrip-out";
  bool plot = false;
  bool quiet = false;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

void add_output(CLI::App* sub, Output& out) {
  sub->add_option("--out", out.dir, "output directory")->capture_default_str();
  sub->add_flag("--plot", out.plot, "also write an SVG of the field");
  sub->add_flag("--quiet", out.quiet, "do not echo the JSON report");
}

fs::path prepare(const Output& out) {
  fs::path p(out.dir);
  fs::create_directories(p);
  return p;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::InvalidArgument, "cannot write " + path.string());
  os << j.dump(2) << '\n';
}

void emit(const Output& out, const json& report) {
  if (!out.quiet) std::cout << report.dump(2) << '\n';
}

std::string fmt(double v) { return format_real(v); }

void write_field_artifacts(const fs::path& dir, const std::string& stem, const MinimizeResult& r, bool plot) {
  const FieldDump d{r.params, r.grid, r.field};
  write_field_file((dir / (stem + "_field.txt")).string(), d);
  {
    std::ofstream os(dir / (stem + "_support.csv"));
    CsvWriter csv(os, {"i", "x", "top"});
    const StripProblem pb(r.params, r.grid);
    for (int i = 0; i < pb.nx(); ++i) {
      csv.row({std::to_string(i), fmt(pb.x(i)),
               std::isfinite(r.support_top[i]) ? fmt(r.support_top[i]) : std::string("nan")});
    }
  }
  if (plot) write_svg_file((dir / (stem + ".svg")).string(), d, std::min(r.grid.L_top, 2.0 * r.max_top + r.grid.lambda));
}

void write_probe_csv(const fs::path& path, const HcritResult& r) {
  std::ofstream os(path);
  CsvWriter csv(os, {"h", "gamma", "verdict", "energy", "energy_flat", "energy_full", "max_top", "refined",
                     "forced_below", "converged"});
  for (const auto& p : r.probes) {
    csv.row({fmt(p.h), fmt(p.gamma), std::string(to_string(p.verdict)), fmt(p.energy), fmt(p.energy_flat),
             fmt(p.energy_full), fmt(p.chosen.max_top), p.refined ? "1" : "0", p.forced_below ? "1" : "0",
             p.converged ? "1" : "0"});
  }
}

// ---------------------------------------------------------------- commands

int cmd_classify(const Physics& ph, const Output& out, bool write) {
  Clock clk;
  const OneDParams p{ph.b, ph.m, ph.h};
  const auto c = classify_oned(p, ph.gamma);
  const auto a = gamma_admissible(p, ph.gamma);
  json res = to_json(c, p);
  res["admissibility"] = to_json(a);
  std::cout << "regime " << to_string(c.regime) << '\n';
  if (c.critical) std::cout << "t_h " << fmt(c.critical->t) << "\nT_h " << fmt(c.critical->T) << '\n';
  if (c.tau) std::cout << "tau_h " << fmt(*c.tau) << '\n';
  std::cout << "minimizer_ts";
  for (double t : c.minimizer_ts) std::cout << ' ' << fmt(t);
  std::cout << "\ninf " << fmt(c.inf_value) << "\nadmissible " << (a.admissible ? "true" : "false") << " ("
            << to_string(a.reason) << ")\n";
  const json rep = make_report("classify", {{"b", ph.b}, {"m", ph.m}, {"h", ph.h}, {"gamma", ph.gamma}}, res,
                               clk.seconds());
  if (write) write_json(prepare(out) / "classify.json", rep);
  return 0;
}

int cmd_certify(const Physics& ph, int dims, std::optional<double> margin, const Output& out, bool write) {
  Clock clk;
  const OneDParams p{ph.b, ph.m, ph.h};
  const auto cert = verify_nonflat(p, ph.gamma, ph.lambda, dims, margin);
  std::cout << "certificate " << to_string(cert.status) << '\n';
  if (cert.witness) {
    std::cout << "delta_star " << fmt(cert.witness->delta_star) << "\nflat_energy " << fmt(cert.flat_energy)
              << "\ncompetitor_energy " << fmt(cert.witness->energy.total) << "\ngap " << fmt(cert.gap) << '\n';
  }
  const json rep = make_report(
      "certify",
      {{"b", ph.b}, {"m", ph.m}, {"h", ph.h}, {"gamma", ph.gamma}, {"lambda", ph.lambda}, {"dims", dims},
       {"margin", cert.margin}},
      to_json(cert), clk.seconds());
  if (write) write_json(prepare(out) / "certify.json", rep);
  return cert.status == CertificateStatus::Inconsistent ? 1 : 0;
}

int cmd_bruteforce(const Physics& ph, int points) {
  const OneDParams p{ph.b, ph.m, ph.h};
  const auto r = oned_energy_bruteforce(p, ph.gamma, points);
  std::cout << "t_best " << fmt(r.t_best) << "\nvalue " << fmt(r.value) << '\n';
  return 0;
}

struct GridArgs {
  int nx = 128;
  int ny = 256;
  double L_top = 0.0;  // 0: max(gamma, h) + lambda
  double grad_tol = 1e-4;
};

int cmd_minimize(const Physics& ph, const GridArgs& ga, const std::string& init, const Output& out) {
  Clock clk;
  const StripParams p{ph.b, ph.m, ph.h, ph.gamma, ph.lambda};
  GridSpec g = default_grid(p, ga.nx, ga.ny);
  if (ga.L_top > 0.0) g.L_top = ga.L_top;
  SolveConfig cfg = SolveConfig::defaults(p, g);
  cfg.grad_tol = ga.grad_tol;

  json runs = json::array();
  MinimizeResult best;
  if (init == "both") {
    const auto two = minimize_two_starts(p, g, cfg);
    runs.push_back(to_json(two.flat));
    runs.push_back(to_json(two.full));
    best = two.best();
  } else {
    best = minimize(p, g, cfg.with_init(init == "flat" ? InitKind::FlatProfile : InitKind::FullSupport));
    runs.push_back(to_json(best));
  }
  const auto bounds = check_bounds(best);
  const auto oned = classify_oned(p.oned(), p.gamma);
  json res{{"best", to_json(best)},
           {"runs", runs},
           {"bounds", to_json(bounds)},
           {"flat_infimum", p.lambda * oned.inf_value},
           {"symmetry", to_json(symmetry_check(best))}};
  const json rep = make_report("minimize",
                               {{"physics", to_json(p)}, {"grid", to_json(g)}, {"init", init},
                                {"grad_tol", ga.grad_tol}},
                               res, clk.seconds());
  const auto dir = prepare(out);
  write_json(dir / "minimize.json", rep);
  write_field_artifacts(dir, "minimize", best, out.plot);
  std::cout << "energy " << fmt(best.energy.total) << "\nflatness " << fmt(best.flatness) << "\nconverged "
            << (best.converged ? "true" : "false") << "\nsupport_touches_top "
            << (best.flags.support_touches_top ? "true" : "false") << '\n';
  emit(out, rep);
  return best.flags.non_convergence ? 1 : 0;
}

GridPolicy policy_from(const GridArgs& ga, int ladder) {
  GridPolicy pol;
  pol.nx = ga.nx;
  pol.ny = ga.ny;
  pol.ladder = ladder;
  pol.grad_tol = ga.grad_tol;
  return pol;
}

int cmd_hcrit(const Physics& ph, const std::string& theta_spec, const GridArgs& ga, int ladder, const Output& out) {
  Clock clk;
  const auto theta = ThetaSchedule::parse(theta_spec);
  const auto bounds = hcrit_bounds(ph.b, ph.m, theta);
  const auto cert = hcrit_lower_certificate(ph.b, ph.m, theta);
  const json params{{"b", ph.b}, {"m", ph.m}, {"lambda", ph.lambda}, {"theta", theta_spec},
                    {"nx", ga.nx}, {"ny", ga.ny}, {"ladder", ladder}, {"grad_tol", ga.grad_tol}};
  const auto dir = prepare(out);
  HcritResult r;
  int code = 0;
  try {
    r = critical_height(ph.b, ph.m, ph.lambda, theta, policy_from(ga, ladder));
  } catch (const BracketInvalidError& e) {
    r = e.result();
    code = 1;
    std::cerr << "fbstrip: " << e.what() << '\n';
  }
  json res{{"status", code == 0 ? "OK" : "BracketInvalid"},
           {"bounds", to_json(bounds)},
           {"lower_certificate", to_json(cert)},
           {"hcrit", to_json(r)}};
  const json rep = make_report("hcrit", params, res, clk.seconds());
  write_json(dir / "hcrit.json", rep);
  write_probe_csv(dir / "hcrit_probes.csv", r);
  for (const auto& p : r.probes) {
    if (code == 0 && p.h == r.h_hi) write_field_artifacts(dir, "hcrit_below", p.chosen, out.plot);
    if (code == 0 && p.h == r.h_lo) write_field_artifacts(dir, "hcrit_crosses", p.chosen, out.plot);
  }
  if (code == 0) {
    std::cout << "bracket " << fmt(r.h_lo) << ' ' << fmt(r.h_hi) << "\nh_cri " << fmt(r.h_cri()) << '\n';
  }
  emit(out, rep);
  return code;
}

int cmd_scaling(const Physics& ph, const std::vector<double>& ms, const std::string& theta_spec, const GridArgs& ga,
                int ladder, const Output& out) {
  Clock clk;
  const auto theta = ThetaSchedule::parse(theta_spec);
  const json params{{"b", ph.b}, {"m", ms}, {"lambda", ph.lambda}, {"theta_at_unit_m", theta_spec},
                    {"nx", ga.nx}, {"ny", ga.ny}, {"ladder", ladder}, {"grad_tol", ga.grad_tol}};
  const auto dir = prepare(out);
  int code = 0;
  json res;
  try {
    const auto s = scaling_sweep(ph.b, ms, ph.lambda, theta, policy_from(ga, ladder));
    res = to_json(s);
    res["status"] = "OK";
    std::ofstream os(dir / "scaling_sweep.csv");
    CsvWriter csv(os, {"m", "h_lo", "h_hi", "h_cri", "lower", "upper", "within_bounds"});
    for (const auto& p : s.points) {
      csv.row({fmt(p.m), fmt(p.hcrit.h_lo), fmt(p.hcrit.h_hi), fmt(p.hcrit.h_cri()),
               p.bounds.lower ? fmt(*p.bounds.lower) : std::string("nan"), fmt(p.bounds.upper),
               p.within_bounds ? "1" : "0"});
    }
    std::cout << "slope " << fmt(s.fit.slope) << "\ntarget " << fmt(1.0 / (ph.b + 1.0)) << '\n';
  } catch (const BracketInvalidError& e) {
    code = 1;
    res = {{"status", "BracketInvalid"}, {"failed_point", to_json(e.result())}, {"m", e.result().m}};
    std::cerr << "fbstrip: " << e.what() << '\n';
  }
  const json rep = make_report("scaling", params, res, clk.seconds());
  write_json(dir / "scaling.json", rep);
  emit(out, rep);
  return code;
}

int cmd_monotonicity(const Physics& ph, double d, const std::string& theta_spec, const GridArgs& ga,
                     const Output& out) {
  Clock clk;
  const auto theta = ThetaSchedule::parse(theta_spec);
  const auto r = monotonicity_check(ph.b, ph.m, ph.lambda, d, ph.h, theta, ga.nx, ga.ny, ga.grad_tol);
  const json rep = make_report("monotonicity",
                               {{"b", ph.b}, {"m", ph.m}, {"lambda", ph.lambda}, {"d", d}, {"h", ph.h},
                                {"theta", theta_spec}, {"nx", ga.nx}, {"ny", ga.ny}, {"grad_tol", ga.grad_tol}},
                               to_json(r), clk.seconds());
  write_json(prepare(out) / "monotonicity.json", rep);
  std::cout << "monotonicity " << (r.ok() ? "PASS" : "FAIL") << "\nviolation_fraction " << fmt(r.violation_fraction)
            << "\nmax_excess " << fmt(r.max_excess) << '\n';
  emit(out, rep);
  return r.ok() ? 0 : 1;
}

int cmd_symmetry(const Physics& ph, const std::string& field_path, const GridArgs& ga, const Output& out) {
  Clock clk;
  SymmetryReport s;
  json params;
  if (!field_path.empty()) {
    const auto d = read_field_file(field_path);
    s = symmetry_check(d.field, StripProblem(d.params, d.grid), ga.grad_tol);
    params = {{"field", field_path}, {"physics", to_json(d.params)}, {"grid", to_json(d.grid)}};
  } else {
    const StripParams p{ph.b, ph.m, ph.h, ph.gamma, ph.lambda};
    GridSpec g = default_grid(p, ga.nx, ga.ny);
    if (ga.L_top > 0.0) g.L_top = ga.L_top;
    SolveConfig cfg = SolveConfig::defaults(p, g);
    cfg.grad_tol = ga.grad_tol;
    const auto best = minimize_two_starts(p, g, cfg).best();
    s = symmetry_check(best);
    params = {{"physics", to_json(p)}, {"grid", to_json(g)}};
  }
  const json rep = make_report("symmetry", params, to_json(s), clk.seconds());
  write_json(prepare(out) / "symmetry.json", rep);
  std::cout << "symmetry " << (s.ok() ? "PASS" : "FAIL") << '\n';
  emit(out, rep);
  return s.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic-strip free boundary laboratory"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  Physics ph;
  Output out;
  bool write = false;
  int dims = 2;
  std::optional<double> margin;
  int points = 100000;
  std::string init = "both";
  std::string theta = "const:0.9";
  int ladder = 4;
  std::vector<double> ms;
  double d = 1.0;
  std::string field_path;

  auto physics = [&](CLI::App* s, bool need_h, bool need_gamma, bool need_lambda) {
    s->add_option("--b", ph.b, "weight exponent")->required();
    s->add_option("--m", ph.m, "Dirichlet datum")->required();
    if (need_h) s->add_option("--h", ph.h, "height where the weight vanishes")->required();
    if (need_gamma) s->add_option("--gamma", ph.gamma, "lateral Dirichlet height")->required();
    if (need_lambda) s->add_option("--lambda", ph.lambda, "period")->required();
  };
  GridArgs ga_min{128, 256}, ga_hcrit{96, 192}, ga_scaling{64, 128}, ga_mono{96, 192}, ga_sym{128, 256};
  auto grid = [&](CLI::App* s, GridArgs& g) {
    s->add_option("--nx", g.nx, "lateral cells")->capture_default_str();
    s->add_option("--ny", g.ny, "vertical cells")->capture_default_str();
    s->add_option("--grad-tol", g.grad_tol, "projected-gradient tolerance")->capture_default_str();
  };

  auto* classify = app.add_subcommand("classify", "1-D classification and admissibility");
  physics(classify, true, true, false);
  classify->add_flag("--write", write, "write classify.json to --out");
  classify->add_option("--out", out.dir, "output directory");

  auto* certify = app.add_subcommand("certify", "non-flatness certificate by the pyramid competitor");
  physics(certify, true, true, true);
  certify->add_option("--dims", dims, "space dimension N")->required();
  certify->add_option("--margin", margin, "strict-improvement margin");
  certify->add_flag("--write", write, "write certify.json to --out");
  certify->add_option("--out", out.dir, "output directory");

  auto* brute = app.add_subcommand("oned-bruteforce", "grid minimum of the 1-D energy");
  physics(brute, true, true, false);
  brute->add_option("--points", points, "grid points")->capture_default_str();

  auto* mini = app.add_subcommand("minimize", "grid minimization on the strip");
  physics(mini, true, true, true);
  grid(mini, ga_min);
  mini->add_option("--Ltop", ga_min.L_top, "truncation height (default max(gamma, h) + lambda)");
  mini->add_option("--init", init, "flat, full or both")
      ->check(CLI::IsMember({"flat", "full", "both"}))
      ->capture_default_str();
  add_output(mini, out);

  auto* hcrit = app.add_subcommand("hcrit", "critical height by bisection");
  physics(hcrit, false, false, true);
  hcrit->add_option("--theta", theta, "const:<v> or table:<file>")->capture_default_str();
  hcrit->add_option("--ladder", ladder, "interior probes before bisection")->capture_default_str();
  add_output(hcrit, out);

  auto* scaling = app.add_subcommand("scaling", "critical height against m");
  scaling->add_option("--b", ph.b, "weight exponent")->required();
  scaling->add_option("--m", ms, "comma-separated values of m")->required()->delimiter(',');
  scaling->add_option("--lambda", ph.lambda, "period")->capture_default_str();
  scaling->add_option("--theta", theta, "theta at m = 1, rescaled by m^{1/(b+1)}")->capture_default_str();
  scaling->add_option("--ladder", ladder, "interior probes before bisection")->capture_default_str();
  add_output(scaling, out);

  auto* mono = app.add_subcommand("monotonicity", "support inclusion and ordering for d < h");
  physics(mono, true, false, true);
  mono->add_option("--d", d, "lower height")->required();
  mono->add_option("--theta", theta, "const:<v> or table:<file>")->capture_default_str();
  add_output(mono, out);

  auto* sym = app.add_subcommand("symmetry", "mirror and rearrangement checks");
  sym->add_option("--field", field_path, "field dump to check instead of solving");
  sym->add_option("--b", ph.b, "weight exponent");
  sym->add_option("--m", ph.m, "Dirichlet datum");
  sym->add_option("--h", ph.h, "height where the weight vanishes");
  sym->add_option("--gamma", ph.gamma, "lateral Dirichlet height");
  sym->add_option("--lambda", ph.lambda, "period");
  sym->add_option("--Ltop", ga_sym.L_top, "truncation height");
  add_output(sym, out);

  grid(hcrit, ga_hcrit);
  grid(scaling, ga_scaling);
  grid(mono, ga_mono);
  grid(sym, ga_sym);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*classify) return cmd_classify(ph, out, write);
    if (*certify) return cmd_certify(ph, dims, margin, out, write);
    if (*brute) return cmd_bruteforce(ph, points);
    if (*mini) return cmd_minimize(ph, ga_min, init, out);
    if (*hcrit) return cmd_hcrit(ph, theta, ga_hcrit, ladder, out);
    if (*scaling) return cmd_scaling(ph, ms, theta, ga_scaling, ladder, out);
    if (*mono) return cmd_monotonicity(ph, d, theta, ga_mono, out);
    if (*sym) return cmd_symmetry(ph, field_path, ga_sym, out);
  } catch (const Error& e) {
    std::cerr << "fbstrip: " << e.what() << '\n';
    const bool bad_input = e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::ParseError ||
                           e.code() == ErrorCode::DeltaTooLarge;
    return bad_input ? 2 : 1;
  }
  return 2;
}
