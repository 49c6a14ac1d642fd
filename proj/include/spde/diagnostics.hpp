#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spde/field.hpp"
#include "spde/noise.hpp"

namespace spde {

struct DiagnosticReport {
  std::string name;
  std::vector<double> grid;      // probe points (times, mode counts, ...)
  std::vector<double> observed;  // one value per probe point
  std::string bound_form;        // human-readable description of the bound
  double sup_ratio = 0.0;        // worst observed / bound
  bool pass = false;
  std::vector<std::pair<std::string, double>> stats;  // named scalars
};

struct Assumption3Options {
  double T = 0.5;
  int t_levels = 16;  // probe grid t = T * 2^-j, j = 0..t_levels
  int K = 1 << 18;    // series truncation for the t^alpha envelope
  int J = 14;         // dyadic blocks 1..J
  /// A sup is "stable" when refining the probe (midpoint t-grid over the same
  /// range, doubled K, doubled J) moves it by less than this fraction.
  double drift_tol = 0.02;
};

/// Checks the noise regularity classification: the L2 convolution series
/// stays below C t^alpha and the dyadic block norms in H^alpha stay bounded.
/// Pass requires both sups finite and stable under probe refinement; an alpha
/// above the spectrum's true regularity makes the block sup grow without
/// bound and fails the stability check.
DiagnosticReport verify_assumption3(const NoiseSpectrum& q, double alpha,
                                    const Assumption3Options& opts = {});

/// Spectral inverse inequality || v ||_(H^s) <= (M pi)^(s - s0) || v ||_(H^s0)
/// for v with M modes and s >= s0, audited on Gaussian random fields over an
/// (s, s0) grid. Reports the worst observed/bound ratio per mode count.
DiagnosticReport inverse_inequality_check(std::span<const int> M_list, int trials,
                                          std::uint64_t seed);

/// Moment growth of a solution ensemble at one time t against the regularity
/// envelopes: || u(t) ||_(Lp(Omega;L2)) vs 1 + t^(beta/2) and the ensemble
/// block norm in H^alpha vs t^(-(alpha-beta)/2).
DiagnosticReport empirical_regularity(const EnsembleField& e, double t, double beta, double alpha,
                                      double p);

/// Band check across a time grid: both empirical_regularity ratios must stay
/// within a factor `band` of their minimum over the grid.
DiagnosticReport empirical_regularity_scan(std::span<const double> times,
                                           std::span<const EnsembleField> ensembles, double beta,
                                           double alpha, double p, double band);

/// Deterministic CSV rendering: probe rows, stat rows, pass row per report.
std::string render_report_csv(std::span<const DiagnosticReport> reports);

}  // namespace spde
