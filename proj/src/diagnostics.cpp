#include "spde/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "spde/operators.hpp"
#include "spde/rng.hpp"

namespace spde {
namespace {

struct SupPair {
  double envelope = 0.0;  // sup_t series(t) / t^alpha
  double block = 0.0;     // sup_(t,j) block bound
};

// Probe grid t = T * 2^(-j/den), j = 0..levels*den: den = 1 is the base grid,
// den = 2 inserts midpoints without extending the range.
std::vector<double> probe_times(double T, int levels, int den) {
  std::vector<double> ts;
  for (int j = 0; j <= levels * den; ++j)
    ts.push_back(T * std::pow(2.0, -static_cast<double>(j) / den));
  return ts;
}

SupPair scan(const NoiseSpectrum& q, double alpha, const std::vector<double>& ts, int K, int J,
             std::vector<double>* envelope_out = nullptr) {
  SupPair sup;
  for (double t : ts) {
    double ratio = convolution_l2_sq_exact(t, q, K).value / std::pow(t, alpha);
    if (envelope_out) envelope_out->push_back(ratio);
    sup.envelope = std::max(sup.envelope, ratio);
    for (int j = 1; j <= J; ++j)
      sup.block = std::max(sup.block, besov_block_bound_exact(t, alpha, q, j));
  }
  return sup;
}

double rel_drift(double refined, double base) {
  if (base == 0.0) return refined == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(refined - base) / base;
}

}  // namespace

DiagnosticReport verify_assumption3(const NoiseSpectrum& q, double alpha,
                                    const Assumption3Options& opts) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw ValidationError("verify_assumption3: alpha must lie in (0, 2]");
  if (opts.t_levels < 1 || opts.K < 1 || opts.J < 1 || opts.J > 15)
    throw ValidationError("verify_assumption3: bad probe options (need J in [1, 15])");

  DiagnosticReport rep;
  rep.name = "assumption3";
  rep.bound_form = "series(t) <= C t^alpha; dyadic H^alpha block norms <= C";
  rep.grid = probe_times(opts.T, opts.t_levels, 1);

  SupPair base = scan(q, alpha, rep.grid, opts.K, opts.J, &rep.observed);
  SupPair fine = scan(q, alpha, probe_times(opts.T, opts.t_levels, 2), 2 * opts.K, 2 * opts.J);

  double env_drift = rel_drift(fine.envelope, base.envelope);
  double blk_drift = rel_drift(fine.block, base.block);
  rep.sup_ratio = base.envelope;
  bool finite = std::isfinite(base.envelope) && std::isfinite(base.block) &&
                std::isfinite(fine.envelope) && std::isfinite(fine.block);
  rep.pass = finite && env_drift < opts.drift_tol && blk_drift < opts.drift_tol;
  rep.stats = {{"alpha", alpha},
               {"envelope_sup", base.envelope},
               {"envelope_sup_refined", fine.envelope},
               {"envelope_drift", env_drift},
               {"block_sup", base.block},
               {"block_sup_refined", fine.block},
               {"block_drift", blk_drift}};
  return rep;
}

DiagnosticReport inverse_inequality_check(std::span<const int> M_list, int trials,
                                          std::uint64_t seed) {
  if (M_list.empty() || trials < 1)
    throw ValidationError("inverse_inequality_check: need mode counts and trials >= 1");
  static constexpr double orders[] = {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0};

  DiagnosticReport rep;
  rep.name = "inverse_inequality";
  rep.bound_form = "||v||_(H^s) <= (M pi)^(s-s0) ||v||_(H^s0), s >= s0";
  rep.sup_ratio = 0.0;
  for (int M : M_list) {
    if (M < 1) throw ValidationError("inverse_inequality_check: mode counts must be >= 1");
    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      SpectralField v = SpectralField::zeros(M);
      for (int k = 1; k <= M; ++k)
        v.coeff[k - 1] = gaussian_entry(seed, static_cast<std::uint64_t>(trial),
                                        static_cast<std::uint32_t>(M), static_cast<std::uint32_t>(k));
      for (double s : orders)
        for (double s0 : orders) {
          if (s0 > s) continue;
          double bound = std::pow(M * std::numbers::pi, s - s0) * sobolev_norm(v, s0);
          worst = std::max(worst, sobolev_norm(v, s) / bound);
        }
    }
    rep.grid.push_back(static_cast<double>(M));
    rep.observed.push_back(worst);
    rep.sup_ratio = std::max(rep.sup_ratio, worst);
  }
  rep.pass = rep.sup_ratio <= 1.0 + 1e-12;
  rep.stats = {{"trials", static_cast<double>(trials)}};
  return rep;
}

DiagnosticReport empirical_regularity(const EnsembleField& e, double t, double beta, double alpha,
                                      double p) {
  if (!(t > 0.0)) throw ValidationError("empirical_regularity: need t > 0");
  if (!(p >= 1.0)) throw ValidationError("empirical_regularity: moment order p must be >= 1");
  if (e.size() == 0) throw ValidationError("empirical_regularity: empty ensemble");

  double moment = 0.0;
  for (const auto& v : e.sample) moment += std::pow(l2_norm(v), p);
  double lp_l2 = std::pow(moment / e.size(), 1.0 / p);
  double besov = besov_norm_ensemble(e, alpha, p, std::numeric_limits<double>::infinity());

  double env_l2 = 1.0 + std::pow(t, 0.5 * beta);
  double env_besov = std::pow(t, -0.5 * (alpha - beta));

  DiagnosticReport rep;
  rep.name = "regularity";
  rep.bound_form = "Lp(L2) <= C (1 + t^(beta/2)); block norm in H^alpha <= C t^(-(alpha-beta)/2)";
  rep.grid = {t};
  rep.observed = {lp_l2 / env_l2};
  rep.sup_ratio = std::max(lp_l2 / env_l2, besov / env_besov);
  rep.pass = std::isfinite(rep.sup_ratio);
  rep.stats = {{"lp_l2", lp_l2},
               {"lp_l2_ratio", lp_l2 / env_l2},
               {"besov", besov},
               {"besov_ratio", besov / env_besov},
               {"beta", beta},
               {"alpha", alpha}};
  return rep;
}

DiagnosticReport empirical_regularity_scan(std::span<const double> times,
                                           std::span<const EnsembleField> ensembles, double beta,
                                           double alpha, double p, double band) {
  if (times.size() != ensembles.size() || times.empty())
    throw ValidationError("empirical_regularity_scan: need matching times and ensembles");
  if (!(band >= 1.0)) throw ValidationError("empirical_regularity_scan: band factor must be >= 1");

  DiagnosticReport rep;
  rep.name = "regularity_scan";
  rep.bound_form = "per-time envelope ratios within a factor " + std::to_string(band);
  double l2_lo = std::numeric_limits<double>::infinity(), l2_hi = 0.0;
  double bes_lo = std::numeric_limits<double>::infinity(), bes_hi = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    DiagnosticReport one = empirical_regularity(ensembles[i], times[i], beta, alpha, p);
    double rl2 = one.stats[1].second, rbes = one.stats[3].second;
    rep.grid.push_back(times[i]);
    rep.observed.push_back(rl2);
    l2_lo = std::min(l2_lo, rl2);
    l2_hi = std::max(l2_hi, rl2);
    bes_lo = std::min(bes_lo, rbes);
    bes_hi = std::max(bes_hi, rbes);
  }
  rep.sup_ratio = std::max(l2_hi / l2_lo, bes_hi / bes_lo);
  rep.pass = l2_lo > 0.0 && bes_lo > 0.0 && rep.sup_ratio <= band;
  rep.stats = {{"l2_ratio_spread", l2_hi / l2_lo}, {"besov_ratio_spread", bes_hi / bes_lo}};
  return rep;
}

std::string render_report_csv(std::span<const DiagnosticReport> reports) {
  std::string out = "report,entry,value\n";
  char buf[64];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& rep : reports) {
    for (std::size_t i = 0; i < rep.grid.size() && i < rep.observed.size(); ++i)
      out += rep.name + ",probe:" + fmt(rep.grid[i]) + "," + fmt(rep.observed[i]) + "\n";
    for (const auto& [key, value] : rep.stats) out += rep.name + "," + key + "," + fmt(value) + "\n";
    out += rep.name + ",sup_ratio," + fmt(rep.sup_ratio) + "\n";
    out += rep.name + ",pass," + std::string(rep.pass ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace spde
