#pragma once

#include <cstdint>
#include <functional>

#include "spde/field.hpp"
#include "spde/mesh.hpp"

namespace spde {

/// Eigenvalues mu_k of the noise covariance, diagonal in the sine basis,
/// together with the regularity exponent alpha used by the error theory:
/// space-time white noise has alpha = 1/2, mu_k = k^-delta has
/// alpha = min(1, (1+delta)/2), trace-class noise has alpha = 1.
class NoiseSpectrum {
 public:
  enum class Kind { white, power, custom };

  static NoiseSpectrum white();
  /// mu_k = k^-delta, delta >= 0.
  static NoiseSpectrum power(double delta);
  /// Arbitrary nonnegative weights with a caller-supplied classification
  /// exponent. Series diagnostics fall back to direct summation (no
  /// closed-form tails), and tail bounds assume mu nonincreasing.
  static NoiseSpectrum custom(std::function<double(int)> mu, double alpha);

  double mu(int k) const;
  double alpha() const { return alpha_; }
  Kind kind() const { return kind_; }
  double delta() const { return delta_; }
  bool power_form() const { return kind_ != Kind::custom; }

 private:
  NoiseSpectrum(Kind kind, double delta, double alpha, std::function<double(int)> mu)
      : kind_(kind), delta_(delta), alpha_(alpha), mu_(std::move(mu)) {}
  Kind kind_;
  double delta_;
  double alpha_;
  std::function<double(int)> mu_;
};

/// The i.i.d. standard Gaussian table xi(n, k), n = 1..N steps, k = 1..modes,
/// for one Monte Carlo sample. Entries come from a counter-based generator
/// keyed by (master_seed, sample_index, n, k), so regeneration with the same
/// key is bit-exact and any entry is addressable in O(1).
struct IncrementPack {
  GradedMesh mesh;
  int modes = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t sample_index = 0;
  std::vector<double> xi;  // row-major: (n-1)*modes + (k-1)

  double xi_at(int n, int k) const {
    return xi[static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(modes) +
              static_cast<std::size_t>(k - 1)];
  }
};

IncrementPack sample_increments(const GradedMesh& mesh, int modes, std::uint64_t master_seed,
                                std::uint64_t sample_index);

/// Stochastic-convolution increment over (t_(n-1), t_n]: mode k is
/// sqrt(mu_k (1 - e^(-2 tau_n lambda_k)) / (2 lambda_k)) * xi(n, k),
/// the exact distribution of int e^(-(t_n - s) A) dW on the step.
SpectralField convolution_increment(const IncrementPack& pack, const NoiseSpectrum& q, int n,
                                    int modes);

/// Convolution increment over the span (t_from, t_(from+span)] assembled from
/// the pack's per-step contributions:
/// sum_j e^(-(t_(from+span) - t_(from+j)) lambda_k) * (step increment j).
/// This is how a coarse mesh reuses a fine mesh's Gaussians (common random
/// numbers in time).
SpectralField aggregate_increments(const IncrementPack& pack, const NoiseSpectrum& q, int from,
                                   int span, int modes);

struct SeriesValue {
  double value;       // truncated series
  double tail_bound;  // analytic bound on the dropped tail
};

/// E || int_0^t e^(-(t-s)A) dW ||_L2^2 = sum_k mu_k (1-e^(-2 t lambda_k))/(2 lambda_k),
/// truncated at K terms with a tail bound.
SeriesValue convolution_l2_sq_exact(double t, const NoiseSpectrum& q, int K);

/// Dyadic-block norm of the stochastic convolution in H^alpha:
/// (sum_(k in block j) mu_k lambda_k^(alpha-1) (1-e^(-2 t lambda_k))/2)^(1/2).
/// Block sums far above the damping scale are evaluated in closed form
/// (Euler-Maclaurin) for power-form spectra, so large j is cheap.
double besov_block_bound_exact(double t, double alpha, const NoiseSpectrum& q, int j);

/// Full Sobolev series sum_(k<=K) mu_k lambda_k^(alpha-1) (1-e^(-2 t lambda_k))/2,
/// the squared H^alpha norm of the stationary convolution truncated at K.
double sobolev_sum_exact(double t, double alpha, const NoiseSpectrum& q, int K);

/// E || W_A(t1) - e^(-(t1-t2)A) W_A(t2) ||^2 for 0 <= t2 < t1: equals the
/// convolution series at the gap t1 - t2.
double increment_scaling_exact(double t1, double t2, const NoiseSpectrum& q, int K);

}  // namespace spde
