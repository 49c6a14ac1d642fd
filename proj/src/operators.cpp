#include "spde/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace spde {

double eigenvalue(int k) {
  if (k < 1) throw ValidationError("eigenvalue: mode index must be >= 1, got " + std::to_string(k));
  double kpi = static_cast<double>(k) * std::numbers::pi;
  return kpi * kpi;
}

double sobolev_norm(const SpectralField& v, double s) {
  if (!(s >= -2.0 && s <= 2.0))
    throw ValidationError("sobolev_norm: order s must lie in [-2, 2], got " + std::to_string(s));
  double acc = 0.0;
  for (int k = 1; k <= v.modes(); ++k) {
    double c = v.coeff[k - 1];
    acc += std::pow(eigenvalue(k), s) * c * c;
  }
  return std::sqrt(acc);
}

std::pair<int, int> dyadic_block(int j) {
  if (j < 1 || j > 30)
    throw ValidationError("dyadic_block: block index must lie in [1, 30], got " + std::to_string(j));
  int lo = 1 << (j - 1);
  int hi = (1 << j) - 1;
  return {lo, hi};
}

SpectralField block_restrict(const SpectralField& v, int j) {
  auto [lo, hi] = dyadic_block(j);
  SpectralField out = SpectralField::zeros(v.modes());
  for (int k = std::max(lo, 1); k <= std::min(hi, v.modes()); ++k)
    out.coeff[k - 1] = v.coeff[k - 1];
  return out;
}

SpectralField project_truncate(const SpectralField& v, int target) {
  if (target < 0) throw ValidationError("project_truncate: target mode count must be >= 0");
  SpectralField out = SpectralField::zeros(target);
  int n = std::min(target, v.modes());
  std::copy_n(v.coeff.begin(), n, out.coeff.begin());
  return out;
}

SpectralField semigroup_apply(const SpectralField& v, double t) {
  if (!(t >= 0.0)) throw ValidationError("semigroup_apply: time must be >= 0, got " + std::to_string(t));
  SpectralField out = v;
  for (int k = 1; k <= v.modes(); ++k) out.coeff[k - 1] *= std::exp(-t * eigenvalue(k));
  return out;
}

double phi_filter_factor(double tau, double lambda) {
  // -expm1(-x)/lambda is cancellation-free for every x = tau*lambda >= 0.
  return -std::expm1(-tau * lambda) / lambda;
}

SpectralField phi_filter_apply(const SpectralField& v, double tau) {
  if (!(tau >= 0.0))
    throw ValidationError("phi_filter_apply: step size must be >= 0, got " + std::to_string(tau));
  SpectralField out = v;
  for (int k = 1; k <= v.modes(); ++k) out.coeff[k - 1] *= phi_filter_factor(tau, eigenvalue(k));
  return out;
}

SpectralField constant_one_projection(int M) {
  if (M < 1) throw ValidationError("constant_one_projection: mode count must be >= 1");
  SpectralField out = SpectralField::zeros(M);
  for (int k = 1; k <= M; k += 2)
    out.coeff[k - 1] = 2.0 * std::numbers::sqrt2 / (static_cast<double>(k) * std::numbers::pi);
  return out;
}

double besov_norm_ensemble(const EnsembleField& e, double s, double p, double q) {
  if (e.size() == 0) throw ValidationError("besov_norm_ensemble: empty ensemble");
  if (!(s >= -2.0 && s <= 2.0))
    throw ValidationError("besov_norm_ensemble: order s must lie in [-2, 2]");
  if (!(p >= 1.0)) throw ValidationError("besov_norm_ensemble: moment order p must be >= 1");
  if (!(q >= 1.0)) throw ValidationError("besov_norm_ensemble: block exponent q must be >= 1");
  int M = e.sample.front().modes();
  for (const auto& v : e.sample)
    if (v.modes() != M)
      throw ValidationError("besov_norm_ensemble: ensemble fields must share one mode count");
  if (M == 0) return 0.0;

  // Blocks intersecting [1, M].
  int J = 1;
  while ((1 << J) - 1 < M) ++J;

  double inf = std::numeric_limits<double>::infinity();
  double qsum = 0.0, qmax = 0.0;
  for (int j = 1; j <= J; ++j) {
    auto [lo, hi] = dyadic_block(j);
    hi = std::min(hi, M);
    double moment = 0.0;
    for (const auto& v : e.sample) {
      double blk = 0.0;
      for (int k = lo; k <= hi; ++k) {
        double c = v.coeff[k - 1];
        blk += std::pow(eigenvalue(k), s) * c * c;
      }
      moment += std::pow(std::sqrt(blk), p);
    }
    double bj = std::pow(moment / e.size(), 1.0 / p);
    qmax = std::max(qmax, bj);
    if (q != inf) qsum += std::pow(bj, q);
  }
  return q == inf ? qmax : std::pow(qsum, 1.0 / q);
}

}  // namespace spde
