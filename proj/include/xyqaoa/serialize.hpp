#pragma once

// JSON views of results. Doubles are written in shortest round-trip form.

#include <json.hpp>

#include <cmath>
#include <vector>

#include "xyqaoa/fit.hpp"
#include "xyqaoa/optimizer.hpp"
#include "xyqaoa/pontryagin.hpp"
#include "xyqaoa/spectral.hpp"

namespace xyqaoa {

namespace detail {

// JSON has no inf/nan; write them as null.
inline nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace detail

inline nlohmann::json to_json(const Schedule& s) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& d : s.pairs()) pairs.push_back({{"hop", d.hop}, {"phase", d.phase}});
  return {{"depth", s.depth()}, {"total_time", s.total_time()}, {"pairs", pairs}, {"flat", s.flat()}};
}

/// Optimization output; wall time is left out when `include_timing` is false.
inline nlohmann::json to_json(const OptimizationResult& r, std::size_t n_sites, std::size_t depth,
                              const OptimizerConfig& cfg, bool include_timing = true) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : r.restart_records)
    records.push_back({{"restart", rec.seed_index},
                       {"fidelity", rec.final_fidelity},
                       {"iterations", rec.iterations},
                       {"converged", rec.converged}});
  nlohmann::json j = {
      {"n_sites", n_sites},
      {"depth", depth},
      {"mode", cfg.fixed_total_time ? "fixed_tf" : "free"},
      {"tf", cfg.fixed_total_time ? nlohmann::json(*cfg.fixed_total_time) : nlohmann::json("free")},
      {"restarts", cfg.restarts},
      {"seed", cfg.rng_seed},
      {"best_fidelity", r.best_fidelity},
      {"best_restart", r.best_restart},
      {"converged", r.converged_count()},
      {"best_schedule", to_json(r.best_schedule)},
      {"restart_records", records},
  };
  if (include_timing) j["wall_time_s"] = r.wall_time;
  return j;
}

inline nlohmann::json to_json(const PontryaginReport& r) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : r.segment_sign_violations) violations.push_back({{"segment", v.segment}, {"fraction", v.fraction}});
  return {{"verdict", to_string(r.verdict)},
          {"tolerance", r.tolerance},
          {"final_overlap", r.final_overlap},
          {"switch_times", r.switch_times},
          {"switching_values", r.switching_values},
          {"segment_sign_violations", violations}};
}

inline nlohmann::json to_json(const FitResult& f) {
  return {{"model", to_string(f.model)}, {"params", f.params}, {"r2", f.r_squared}, {"n_points", f.n_points}};
}

/// Closed-form coefficients next to the exact-simulation quantities they are meant to approximate.
inline nlohmann::json spectral_discrepancy_report(const std::vector<std::size_t>& sizes) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t n : sizes) {
    const auto c = closed_form_coefficients(n);
    nlohmann::json row = {
        {"N", n},
        {"closed_form_transfer", detail::finite_or_null(c.transfer)},
        {"closed_form_transfer_singular", c.transfer_singular},
        {"closed_form_retention", detail::finite_or_null(c.retention)},
        {"closed_form_retention_singular", c.retention_singular},
        {"measured_transfer_slope", measured_transfer_slope(n)},
        {"sine_mode_residual", eigenstate_residual(n, 1, EigenFormula::sine_modes)},
    };
    if (n % 2 == 0) row["half_lattice_residual"] = eigenstate_residual(n, 1, EigenFormula::half_lattice);
    const auto peak = first_grover_peak_depth(n, 0.1, 4000);
    row["grover_first_peak_depth_delta_0.1"] = peak ? nlohmann::json(*peak) : nlohmann::json();
    rows.push_back(row);
  }
  return {{"rows", rows},
          {"notes",
           "closed_form_transfer divides by the sine of an argument equal to pi for every N; the value is "
           "reported as evaluated and flagged singular"}};
}

}  // namespace xyqaoa
