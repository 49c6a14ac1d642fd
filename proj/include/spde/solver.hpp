#pragma once

#include <functional>
#include <string>

#include "spde/field.hpp"
#include "spde/mesh.hpp"
#include "spde/noise.hpp"
#include "spde/nonlinearity.hpp"

namespace spde {

/// Initial condition described by its sine coefficients (u0, e_k).
struct InitialDatum {
  std::string name;
  std::function<double(int)> coeff;

  /// sin(pi x) = e_1 / sqrt(2).
  static InitialDatum sine();
  /// Point mass at x = 1/2: (delta, e_k) = sqrt(2) sin(k pi / 2).
  static InitialDatum dirac();
  /// The single basis function e_j.
  static InitialDatum mode(int j);
  static InitialDatum zero();
  static InitialDatum by_name(std::string_view name);  // "sine" | "dirac"
};

enum class Variant { collocation, galerkin };

struct SchemeConfig {
  Variant variant = Variant::collocation;
  Drift drift = drift_registry("sqrt1pu2");
  int oversample = 4;  // Galerkin quadrature grid factor
  /// Run the unmodified scheme on the first step (drift + noise included)
  /// instead of dropping them. Comparison runs only.
  bool standard_first_step = false;
};

/// Per-mesh, per-mode factor tables shared by every sample on a mesh:
/// decay(n,k) = e^(-tau_n lambda_k) and filter(n,k) = (1-e^(-tau_n lambda_k))/lambda_k.
struct StepTables {
  int modes = 0;
  std::vector<double> decay, filter;  // (n-1)*modes + (k-1), n = 1..N

  StepTables() = default;
  StepTables(const GradedMesh& mesh, int modes);

  double decay_at(int n, int k) const { return decay[idx(n, k)]; }
  double filter_at(int n, int k) const { return filter[idx(n, k)]; }

 private:
  std::size_t idx(int n, int k) const {
    return static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(modes) +
           static_cast<std::size_t>(k - 1);
  }
};

/// Spectral projection of the datum onto the first M modes.
SpectralField initial_state(const InitialDatum& u0, int M);

/// The scheme's modified first step: pure semigroup decay over (0, t_1],
/// drift and noise dropped (they are not integrable against rough data there).
SpectralField first_step(const SpectralField& u0, const GradedMesh& mesh);

/// One step n >= 1 of the exponential integrator:
/// U^n = decay_n U^(n-1) + filter_n proj(f(U^(n-1))) + noise_n.
SpectralField step(const SpectralField& prev, const GradedMesh& mesh, const StepTables& tables,
                   int n, const SpectralField& noise, const SchemeConfig& scheme);

/// Supplies the convolution increment for step n (levels 1..N).
using NoiseSupplier = std::function<SpectralField(int n)>;
/// Observes the state after each step (level n, state U^n). Level 0 is the
/// initial state.
using LevelCallback = std::function<void(int n, const SpectralField&)>;

/// Full trajectory driven by caller-supplied increments; returns the final
/// state, streaming intermediate levels to the callback if given.
SpectralField solve_path_driven(const SpectralField& u0, const GradedMesh& mesh,
                                const StepTables& tables, const SchemeConfig& scheme,
                                const NoiseSupplier& noise, const LevelCallback& on_level = {});

/// Trajectory driven by a sampled increment pack (the common case).
SpectralField solve_path(const InitialDatum& u0, int M, const GradedMesh& mesh,
                         const SchemeConfig& scheme, const IncrementPack& pack,
                         const NoiseSpectrum& q, const LevelCallback& on_level = {});

/// Closed-form final state of the drift-free scheme, assembled per mode
/// from the mild-solution formula with the first interval's noise dropped:
/// e^(-(t_N - t_1) lambda) e^(-tau_1 lambda) u0_k + sum_(n>=2) e^(-(t_N-t_n) lambda) inc_(n,k).
/// Independent check for solve_path with the zero drift.
SpectralField linear_oracle(const SpectralField& u0, const GradedMesh& mesh,
                            const IncrementPack& pack, const NoiseSpectrum& q, int M);

}  // namespace spde
