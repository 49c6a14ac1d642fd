#pragma once

#include <utility>

#include "spde/field.hpp"

namespace spde {

/// Dirichlet Laplacian eigenvalue on (0,1): lambda_k = (k pi)^2, k >= 1.
double eigenvalue(int k);

/// Fractional Sobolev norm (sum_k lambda_k^s v_k^2)^(1/2). Supported range
/// s in [-2, 2]; s = 0 recovers the L2 norm.
double sobolev_norm(const SpectralField& v, double s);

/// Dyadic frequency block j >= 1: mode indices [2^(j-1), 2^j - 1].
std::pair<int, int> dyadic_block(int j);

/// Restriction of v to dyadic block j (other modes zeroed, length unchanged).
SpectralField block_restrict(const SpectralField& v, int j);

/// Orthogonal projection onto the first `target` modes; extends with zeros
/// when target exceeds the stored mode count.
SpectralField project_truncate(const SpectralField& v, int target);

/// Heat semigroup: mode k scaled by exp(-t lambda_k), t >= 0.
SpectralField semigroup_apply(const SpectralField& v, double t);

/// Scalar factor applied per mode by phi_filter_apply:
/// (1 - exp(-tau lambda)) / lambda, evaluated via expm1 so small tau*lambda
/// does not cancel.
double phi_filter_factor(double tau, double lambda);

/// The time-integrated semigroup filter: mode k scaled by
/// (1 - exp(-tau lambda_k)) / lambda_k, tau >= 0.
SpectralField phi_filter_apply(const SpectralField& v, double tau);

/// Coefficients of the constant function 1 in the first M modes:
/// (1, e_k) = 2 sqrt(2) / (k pi) for odd k, 0 for even k.
SpectralField constant_one_projection(int M);

/// Ensemble Besov-type norm: per dyadic block the p-th sample moment of the
/// H^s block norm, then the l^q norm over blocks. q may be infinity (max over
/// blocks). Requires a nonempty ensemble with a uniform mode count, p >= 1,
/// q >= 1, s in [-2, 2].
double besov_norm_ensemble(const EnsembleField& e, double s, double p, double q);

}  // namespace spde
