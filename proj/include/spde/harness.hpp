#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "spde/config.hpp"

namespace spde {

/// Dyadic refinement study: error and sampling noise per resolution, plus
/// observed orders between adjacent resolutions when all errors are positive.
struct ErrorTable {
  std::string axis;  // "M" (mode counts) or "tau" (step sizes)
  std::vector<double> resolution;
  std::vector<double> error;         // RMS difference to the next refinement
  std::vector<double> error_stderr;  // Monte Carlo standard error of `error`
  std::vector<double> order;         // log2(e_i / e_(i+1)); empty if any error is 0
  std::vector<double> order_stderr;
  double mean_order = std::numeric_limits<double>::quiet_NaN();
  double mean_order_stderr = std::numeric_limits<double>::quiet_NaN();
  int samples = 0;
};

/// Observed orders log2(e_i / e_(i+1)) between adjacent resolutions.
/// Requires at least two strictly positive errors.
std::vector<double> estimate_order(std::span<const double> errors);

/// E_1(M): RMS L2 gap between the M-mode and 2M-mode solutions on a common
/// reference-time mesh, driven by the same Gaussians (mode-prefix coupling).
ErrorTable run_spatial_convergence(const ExperimentConfig& cfg);

/// E_2(tau): RMS L2 gap between the N = 1/tau and 2N solutions with M = N,
/// the coarse runs driven by the finest mesh's Gaussians through the
/// aggregation identity (temporal coupling).
ErrorTable run_temporal_convergence(const ExperimentConfig& cfg);

/// CSV: "resolution,error,stderr,samples" rows, then an orders footer.
/// All doubles are printed with %.17g, so equal tables render equal bytes.
std::string render_table_csv(const ErrorTable& table);

/// Inverse of render_table_csv (tooling and round-trip tests).
ErrorTable parse_table_csv(const std::string& text);

/// Deterministic JSON sidecar (full config, seed, code version, axis).
std::string render_sidecar_json(const ErrorTable& table, const ExperimentConfig& cfg);

/// Write the CSV to `csv_path` and the sidecar to `csv_path + ".meta.json"`.
void emit_report(const ErrorTable& table, const ExperimentConfig& cfg,
                 const std::string& csv_path);

/// Run fn(sample) for samples 0..count-1 on `workers` threads. Results must
/// be written to per-sample slots; the caller reduces in sample order, so the
/// outcome is byte-identical for every worker count.
void for_each_sample(int count, int workers, const std::function<void(int)>& fn);

inline const char* kCodeVersion = "spde-heat 1.0.0";

}  // namespace spde
