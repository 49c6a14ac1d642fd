#include "spde/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spde/operators.hpp"
#include "spde/rng.hpp"

namespace spde {
namespace {

constexpr double kPi = std::numbers::pi;
// Beyond x = 40, 1 - e^-x rounds to 1 in double precision.
constexpr double kSaturated = 40.0;

// First k with 2 t lambda_k > kSaturated; beyond `hi` means "none".
std::int64_t saturation_index(double t, std::int64_t hi) {
  if (!(t > 0.0)) return hi + 1;
  double boundary = std::sqrt(kSaturated / (2.0 * t)) / kPi;
  if (boundary >= static_cast<double>(hi)) return hi + 1;
  return static_cast<std::int64_t>(boundary) + 1;
}

// sum_(k=a)^(b) k^p. Direct below the Euler-Maclaurin threshold; closed form
// (trapezoid + B2 + B4 corrections) above it, where the truncation error is
// below double rounding for a >= 2048 and |p| <= 3.
double power_sum(std::int64_t a, std::int64_t b, double p) {
  if (a > b) return 0.0;
  constexpr std::int64_t kDirect = 2048;
  double acc = 0.0;
  if (a < kDirect) {
    std::int64_t stop = std::min(b, kDirect - 1);
    for (std::int64_t k = a; k <= stop; ++k) acc += std::pow(static_cast<double>(k), p);
    a = stop + 1;
    if (a > b) return acc;
  }
  if (b - a < kDirect) {
    for (std::int64_t k = a; k <= b; ++k) acc += std::pow(static_cast<double>(k), p);
    return acc;
  }
  double ad = static_cast<double>(a), bd = static_cast<double>(b);
  double integral = p == -1.0 ? std::log(bd / ad)
                              : std::pow(ad, p + 1.0) * std::expm1((p + 1.0) * std::log(bd / ad)) /
                                    (p + 1.0);
  double s = integral + 0.5 * (std::pow(ad, p) + std::pow(bd, p));
  s += p * (std::pow(bd, p - 1.0) - std::pow(ad, p - 1.0)) / 12.0;
  s -= p * (p - 1.0) * (p - 2.0) * (std::pow(bd, p - 3.0) - std::pow(ad, p - 3.0)) / 720.0;
  return acc + s;
}

// sum_(k=lo)^(hi) mu_k lambda_k^(alpha-1) (1 - e^(-2 t lambda_k)) / 2.
// alpha = 0 gives the L2 convolution series. Saturated power-form ranges go
// through power_sum; everything else is summed directly.
double weighted_series(double t, double alpha, const NoiseSpectrum& q, std::int64_t lo,
                       std::int64_t hi) {
  if (!(t >= 0.0)) throw ValidationError("noise series: time must be >= 0");
  if (lo < 1 || hi < lo) throw ValidationError("noise series: bad mode range");
  if (t == 0.0) return 0.0;
  std::int64_t split = std::max(saturation_index(t, hi), lo);
  double acc = 0.0;
  std::int64_t direct_hi = hi;
  if (q.power_form() && split <= hi) {
    direct_hi = split - 1;
    acc += 0.5 * std::pow(kPi, 2.0 * (alpha - 1.0)) *
           power_sum(split, hi, 2.0 * (alpha - 1.0) - q.delta());
  }
  for (std::int64_t k = lo; k <= direct_hi; ++k) {
    double lambda = (static_cast<double>(k) * kPi) * (static_cast<double>(k) * kPi);
    double x = 2.0 * t * lambda;
    double damped = x > kSaturated ? 1.0 : -std::expm1(-x);
    acc += 0.5 * q.mu(static_cast<int>(k)) * std::pow(lambda, alpha - 1.0) * damped;
  }
  return acc;
}

}  // namespace

NoiseSpectrum NoiseSpectrum::white() {
  return NoiseSpectrum(Kind::white, 0.0, 0.5, [](int) { return 1.0; });
}

NoiseSpectrum NoiseSpectrum::power(double delta) {
  if (!(delta >= 0.0))
    throw ValidationError("NoiseSpectrum::power: decay exponent must be >= 0, got " +
                          std::to_string(delta));
  double alpha = std::min(1.0, 0.5 * (1.0 + delta));
  return NoiseSpectrum(Kind::power, delta, alpha,
                       [delta](int k) { return std::pow(static_cast<double>(k), -delta); });
}

NoiseSpectrum NoiseSpectrum::custom(std::function<double(int)> mu, double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw ValidationError("NoiseSpectrum::custom: classification alpha must lie in (0, 2]");
  return NoiseSpectrum(Kind::custom, 0.0, alpha, std::move(mu));
}

double NoiseSpectrum::mu(int k) const {
  if (k < 1) throw ValidationError("NoiseSpectrum::mu: mode index must be >= 1");
  if (kind_ == Kind::white) return 1.0;
  double m = mu_(k);
  if (!(m >= 0.0))
    throw NumericError("NoiseSpectrum::mu: weight of mode " + std::to_string(k) +
                       " is negative or non-finite");
  return m;
}

IncrementPack sample_increments(const GradedMesh& mesh, int modes, std::uint64_t master_seed,
                                std::uint64_t sample_index) {
  if (modes < 1) throw ValidationError("sample_increments: mode count must be >= 1");
  int N = mesh.steps();
  if (N < 1) throw ValidationError("sample_increments: malformed mesh");
  IncrementPack pack;
  pack.mesh = mesh;
  pack.modes = modes;
  pack.master_seed = master_seed;
  pack.sample_index = sample_index;
  pack.xi.resize(static_cast<std::size_t>(N) * static_cast<std::size_t>(modes));
  for (int n = 1; n <= N; ++n)
    for (int k = 1; k <= modes; ++k)
      pack.xi[static_cast<std::size_t>(n - 1) * modes + (k - 1)] =
          gaussian_entry(master_seed, sample_index, static_cast<std::uint32_t>(n),
                         static_cast<std::uint32_t>(k));
  return pack;
}

namespace {

double increment_std(const NoiseSpectrum& q, double dt, int k) {
  double lambda = eigenvalue(k);
  return std::sqrt(q.mu(k) * -std::expm1(-2.0 * dt * lambda) / (2.0 * lambda));
}

}  // namespace

SpectralField convolution_increment(const IncrementPack& pack, const NoiseSpectrum& q, int n,
                                    int modes) {
  if (n < 1 || n > pack.mesh.steps())
    throw ValidationError("convolution_increment: step index " + std::to_string(n) +
                          " outside 1.." + std::to_string(pack.mesh.steps()));
  if (modes < 1 || modes > pack.modes)
    throw ValidationError("convolution_increment: mode count exceeds the pack");
  double dt = pack.mesh.dt(n);
  SpectralField out = SpectralField::zeros(modes);
  for (int k = 1; k <= modes; ++k)
    out.coeff[k - 1] = increment_std(q, dt, k) * pack.xi_at(n, k);
  return out;
}

SpectralField aggregate_increments(const IncrementPack& pack, const NoiseSpectrum& q, int from,
                                   int span, int modes) {
  if (from < 0 || span < 1 || from + span > pack.mesh.steps())
    throw ValidationError("aggregate_increments: span [" + std::to_string(from) + " + " +
                          std::to_string(span) + "] outside the pack's mesh");
  if (modes < 1 || modes > pack.modes)
    throw ValidationError("aggregate_increments: mode count exceeds the pack");
  double t_end = pack.mesh.t(from + span);
  SpectralField out = SpectralField::zeros(modes);
  for (int k = 1; k <= modes; ++k) {
    double lambda = eigenvalue(k);
    double acc = 0.0;
    for (int j = 1; j <= span; ++j) {
      double decay = std::exp(-(t_end - pack.mesh.t(from + j)) * lambda);
      acc = std::fma(decay * increment_std(q, pack.mesh.dt(from + j), k),
                     pack.xi_at(from + j, k), acc);
    }
    out.coeff[k - 1] = acc;
  }
  return out;
}

SeriesValue convolution_l2_sq_exact(double t, const NoiseSpectrum& q, int K) {
  if (K < 1) throw ValidationError("convolution_l2_sq_exact: need K >= 1");
  double value = weighted_series(t, 0.0, q, 1, K);
  // tail: sum_(k>K) mu_k/(2 lambda_k), by the integral bound for power decay
  // and monotonicity of mu for custom spectra.
  double tail;
  if (q.power_form()) {
    double d = q.delta();
    tail = std::pow(static_cast<double>(K), -1.0 - d) / ((1.0 + d) * 2.0 * kPi * kPi);
  } else {
    tail = q.mu(K + 1) / (2.0 * kPi * kPi * static_cast<double>(K));
  }
  return {value, tail};
}

double besov_block_bound_exact(double t, double alpha, const NoiseSpectrum& q, int j) {
  if (j < 1 || j > 30) throw ValidationError("besov_block_bound_exact: block index out of [1, 30]");
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw ValidationError("besov_block_bound_exact: alpha must lie in (0, 2]");
  std::int64_t lo = std::int64_t{1} << (j - 1);
  std::int64_t hi = (std::int64_t{1} << j) - 1;
  return std::sqrt(weighted_series(t, alpha, q, lo, hi));
}

double sobolev_sum_exact(double t, double alpha, const NoiseSpectrum& q, int K) {
  if (K < 1) throw ValidationError("sobolev_sum_exact: need K >= 1");
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw ValidationError("sobolev_sum_exact: alpha must lie in (0, 2]");
  return weighted_series(t, alpha, q, 1, K);
}

double increment_scaling_exact(double t1, double t2, const NoiseSpectrum& q, int K) {
  if (!(t2 >= 0.0 && t2 < t1))
    throw ValidationError("increment_scaling_exact: need 0 <= t2 < t1");
  return convolution_l2_sq_exact(t1 - t2, q, K).value;
}

}  // namespace spde
