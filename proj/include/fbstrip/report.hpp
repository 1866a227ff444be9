#pragma once

// JSON views of results. Reals are emitted as shortest round-trip decimals;
// NaN becomes null.

#include <cmath>
#include <string>

#include <json.hpp>

#include "fbstrip/competitor.hpp"
#include "fbstrip/experiments.hpp"
#include "fbstrip/minimize.hpp"
#include "fbstrip/oned.hpp"

namespace fbstrip {

using json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "fbstrip-report v1";
inline constexpr const char* kToolVersion = "fbstrip 0.1.0";

inline json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const EnergyBreakdown& e) {
  return {{"dirichlet", e.dirichlet}, {"bulk", e.bulk}, {"total", e.total}};
}

inline json to_json(const OneDClassification& c, const OneDParams& p) {
  const auto th = thresholds(p);
  json j{{"regime", to_string(c.regime)},
         {"boundary", to_string(c.boundary)},
         {"h_sharp", th.h_sharp},
         {"h_star", th.h_star},
         {"t_h", c.critical ? json(c.critical->t) : json(nullptr)},
         {"T_h", c.critical ? json(c.critical->T) : json(nullptr)},
         {"tau_h", c.tau ? json(*c.tau) : json(nullptr)},
         {"minimizer_ts", c.minimizer_ts},
         {"inf_value", c.inf_value},
         {"gamma", c.gamma}};
  return j;
}

inline json to_json(const Admissibility& a) {
  return {{"admissible", a.admissible}, {"reason", to_string(a.reason)}};
}

inline json to_json(const NonflatCertificate& c) {
  json j{{"status", to_string(c.status)},
         {"admissibility", to_json(c.admissibility)},
         {"flat_energy", c.flat_energy},
         {"margin", c.margin}};
  if (c.witness) {
    j["delta_star"] = c.witness->delta_star;
    j["competitor_energy"] = to_json(c.witness->energy);
    j["gap"] = c.gap;
  } else {
    j["delta_star"] = nullptr;
    j["competitor_energy"] = nullptr;
    j["gap"] = nullptr;
  }
  return j;
}

inline json to_json(const GridSpec& g) {
  return {{"nx", g.nx}, {"ny", g.ny}, {"lambda", g.lambda}, {"L_top", g.L_top}, {"dx", g.dx()}, {"dy", g.dy()}};
}

inline json to_json(const StripParams& p) {
  return {{"b", p.b}, {"m", p.m}, {"h", p.h}, {"gamma", p.gamma}, {"lambda", p.lambda}};
}

inline json to_json(const MinimizeResult& r) {
  json tops = json::array();
  for (double t : r.support_top) tops.push_back(real_or_null(t));
  return {{"init", to_string(r.init)},
          {"grid", to_json(r.grid)},
          {"energy", to_json(r.energy)},
          {"flatness", r.flatness},
          {"max_support_top", r.max_top},
          {"converged", r.converged},
          {"iterations", r.iterations},
          {"stages", r.stages},
          {"extensions", r.extensions},
          {"flags",
           {{"NonConvergence", r.flags.non_convergence}, {"SupportTouchesTop", r.flags.support_touches_top}}},
          {"descent_monotone", r.descent_monotone},
          {"polish_residual", r.polish_residual},
          {"kept_start", r.kept_start},
          {"gamma_snap_distance", r.snap_distance},
          {"eps_floor", r.eps_floor},
          {"support_top", tops}};
}

inline json to_json(const BoundsVerdict& v) {
  return {{"jensen_bound", real_or_null(v.jensen_bound)},
          {"jensen_ok", v.jensen_ok},
          {"truncation_bound", v.truncation_bound},
          {"truncation_ok", v.truncation_ok},
          {"harmonic_residual", v.harmonic_residual},
          {"harmonic_limit", v.harmonic_limit},
          {"harmonic_ok", v.harmonic_ok}};
}

inline json to_json(const SymmetryReport& s) {
  return {{"ok", s.ok()},
          {"energy", s.energy},
          {"mirror_energy", s.mirror_energy},
          {"mirror_diff", s.mirror_diff},
          {"mirror_ok", s.mirror_ok},
          {"rearranged_energy", s.rearranged_energy},
          {"energy_tol", s.energy_tol},
          {"rearranged_ok", s.rearranged_ok},
          {"bulk_equal", s.bulk_equal},
          {"row_counts_equal", s.row_counts_equal},
          {"monotone_violations", s.monotone_violations},
          {"violation_fraction", s.violation_fraction},
          {"monotone_ok", s.monotone_ok}};
}

inline json to_json(const HcritProbe& p) {
  return {{"h", p.h},
          {"gamma", p.gamma},
          {"verdict", to_string(p.verdict)},
          {"below", p.below()},
          {"verdict_flat", to_string(p.verdict_flat)},
          {"verdict_full", to_string(p.verdict_full)},
          {"energy", p.energy},
          {"energy_flat", p.energy_flat},
          {"energy_full", p.energy_full},
          {"max_support_top", p.chosen.max_top},
          {"refined", p.refined},
          {"forced_below", p.forced_below},
          {"converged", p.converged},
          {"grid", to_json(p.grid)}};
}

inline json to_json(const HcritResult& r) {
  json probes = json::array();
  for (const auto& p : r.probes) probes.push_back(to_json(p));
  return {{"h_lo", r.h_lo},
          {"h_hi", r.h_hi},
          {"h_cri", r.h_cri()},
          {"initial_bracket", {r.initial_lo, r.initial_hi}},
          {"bounds_used", r.bounds_used},
          {"stop_width", r.stop_width},
          {"grid", to_json(r.grid)},
          {"single_switch", r.single_switch},
          {"all_converged", r.all_converged},
          {"diagnostic", r.diagnostic},
          {"probes", probes}};
}

inline json to_json(const HcritBounds& b) {
  return {{"lower", b.lower ? json(*b.lower) : json(nullptr)}, {"upper", b.upper}};
}

inline json to_json(const std::optional<LowerCertificate>& c) {
  if (!c) return nullptr;
  return {{"a_best", c->a_best}, {"c_best", c->c_best}, {"h_lower", c->h_lower}};
}

inline json to_json(const ScalingResult& s) {
  json pts = json::array();
  for (const auto& p : s.points) {
    pts.push_back({{"m", p.m},
                   {"theta", p.theta.describe()},
                   {"bounds", to_json(p.bounds)},
                   {"within_bounds", p.within_bounds},
                   {"hcrit", to_json(p.hcrit)}});
  }
  return {{"slope", s.fit.slope},
          {"intercept", s.fit.intercept},
          {"max_residual", s.fit.max_residual},
          {"target_slope", 1.0 / (s.b + 1.0)},
          {"points", pts}};
}

inline json to_json(const MonotonicityReport& r) {
  return {{"d", r.d},
          {"h", r.h},
          {"grid", to_json(r.grid)},
          {"energy_d", to_json(r.lower.energy)},
          {"energy_h", to_json(r.upper.energy)},
          {"support_nodes_h", r.support_nodes},
          {"inclusion_violations", r.inclusion_violations},
          {"violation_fraction", r.violation_fraction},
          {"inclusion_ok", r.inclusion_ok},
          {"max_excess", r.max_excess},
          {"ordering_tol", r.ordering_tol},
          {"ordering_ok", r.ordering_ok},
          {"ok", r.ok()}};
}

/// Envelope shared by every command.
inline json make_report(const std::string& command, json params, json results, double wall_seconds) {
  return {{"schema", kReportSchema},
          {"command", command},
          {"params", std::move(params)},
          {"results", std::move(results)},
          {"meta", {{"version", kToolVersion}, {"wall_time_s", wall_seconds}}}};
}

}  // namespace fbstrip
