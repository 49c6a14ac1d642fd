#include "spde/solver.hpp"

#include <cmath>
#include <numbers>

#include "spde/operators.hpp"

namespace spde {

InitialDatum InitialDatum::sine() {
  return {"sine", [](int k) { return k == 1 ? 1.0 / std::numbers::sqrt2 : 0.0; }};
}

InitialDatum InitialDatum::dirac() {
  // e_k(1/2) = sqrt(2) sin(k pi / 2): the sign cycle +, 0, -, 0 in k mod 4.
  return {"dirac", [](int k) {
            switch (k & 3) {
              case 1: return std::numbers::sqrt2;
              case 3: return -std::numbers::sqrt2;
              default: return 0.0;
            }
          }};
}

InitialDatum InitialDatum::mode(int j) {
  if (j < 1) throw ValidationError("InitialDatum::mode: index must be >= 1");
  return {"mode:" + std::to_string(j), [j](int k) { return k == j ? 1.0 : 0.0; }};
}

InitialDatum InitialDatum::zero() {
  return {"zero", [](int) { return 0.0; }};
}

InitialDatum InitialDatum::by_name(std::string_view name) {
  if (name == "sine") return sine();
  if (name == "dirac") return dirac();
  throw ValidationError("unknown initial datum '" + std::string(name) + "' (have: sine, dirac)");
}

StepTables::StepTables(const GradedMesh& mesh, int modes_) {
  if (modes_ < 1) throw ValidationError("StepTables: mode count must be >= 1");
  modes = modes_;
  int N = mesh.steps();
  decay.resize(static_cast<std::size_t>(N) * static_cast<std::size_t>(modes));
  filter.resize(decay.size());
  for (int n = 1; n <= N; ++n) {
    double dt = mesh.dt(n);
    for (int k = 1; k <= modes; ++k) {
      double lambda = eigenvalue(k);
      decay[idx(n, k)] = std::exp(-dt * lambda);
      filter[idx(n, k)] = phi_filter_factor(dt, lambda);
    }
  }
}

SpectralField initial_state(const InitialDatum& u0, int M) {
  if (M < 1) throw ValidationError("initial_state: mode count must be >= 1");
  SpectralField v = SpectralField::zeros(M);
  for (int k = 1; k <= M; ++k) v.coeff[k - 1] = u0.coeff(k);
  if (!v.finite()) throw NumericError("initial_state: datum '" + u0.name + "' has non-finite coefficients");
  return v;
}

SpectralField first_step(const SpectralField& u0, const GradedMesh& mesh) {
  return semigroup_apply(u0, mesh.dt(1));
}

namespace {

SpectralField project_drift(const SpectralField& v, const SchemeConfig& scheme) {
  return scheme.variant == Variant::collocation
             ? collocation_nonlinearity(v, scheme.drift)
             : galerkin_nonlinearity(v, scheme.drift, scheme.oversample);
}

}  // namespace

SpectralField step(const SpectralField& prev, const GradedMesh& mesh, const StepTables& tables,
                   int n, const SpectralField& noise, const SchemeConfig& scheme) {
  int M = prev.modes();
  if (M != tables.modes) throw ValidationError("step: state and tables disagree on mode count");
  if (n < 1 || n > mesh.steps()) throw ValidationError("step: level index out of range");
  SpectralField drift = project_drift(prev, scheme);
  SpectralField out = SpectralField::zeros(M);
  for (int k = 1; k <= M; ++k) {
    double inc = k <= noise.modes() ? noise.coeff[k - 1] : 0.0;
    double acc = std::fma(tables.filter_at(n, k), drift.coeff[k - 1], inc);
    out.coeff[k - 1] = std::fma(tables.decay_at(n, k), prev.coeff[k - 1], acc);
  }
  if (!out.finite())
    throw NumericError("step: non-finite state after level " + std::to_string(n));
  return out;
}

SpectralField solve_path_driven(const SpectralField& u0, const GradedMesh& mesh,
                                const StepTables& tables, const SchemeConfig& scheme,
                                const NoiseSupplier& noise, const LevelCallback& on_level) {
  int N = mesh.steps();
  if (u0.modes() != tables.modes)
    throw ValidationError("solve_path_driven: state and tables disagree on mode count");
  if (on_level) on_level(0, u0);
  SpectralField u = scheme.standard_first_step ? step(u0, mesh, tables, 1, noise(1), scheme)
                                               : first_step(u0, mesh);
  if (on_level) on_level(1, u);
  for (int n = 2; n <= N; ++n) {
    u = step(u, mesh, tables, n, noise(n), scheme);
    if (on_level) on_level(n, u);
  }
  return u;
}

SpectralField solve_path(const InitialDatum& u0, int M, const GradedMesh& mesh,
                         const SchemeConfig& scheme, const IncrementPack& pack,
                         const NoiseSpectrum& q, const LevelCallback& on_level) {
  StepTables tables(mesh, M);
  return solve_path_driven(
      initial_state(u0, M), mesh, tables, scheme,
      [&](int n) { return convolution_increment(pack, q, n, M); }, on_level);
}

SpectralField linear_oracle(const SpectralField& u0, const GradedMesh& mesh,
                            const IncrementPack& pack, const NoiseSpectrum& q, int M) {
  int N = mesh.steps();
  if (M < 1 || M > pack.modes) throw ValidationError("linear_oracle: mode count exceeds the pack");
  double T = mesh.t(N);
  SpectralField out = SpectralField::zeros(M);
  std::vector<double> comp(static_cast<std::size_t>(M), 0.0);  // Neumaier carry
  for (int k = 1; k <= M; ++k) {
    double lambda = eigenvalue(k);
    out.coeff[k - 1] = std::exp(-(T - mesh.t(1)) * lambda) * std::exp(-mesh.dt(1) * lambda) *
                       (k <= u0.modes() ? u0.coeff[k - 1] : 0.0);
  }
  for (int n = 2; n <= N; ++n) {
    SpectralField inc = convolution_increment(pack, q, n, M);
    for (int k = 1; k <= M; ++k) {
      double term = std::exp(-(T - mesh.t(n)) * eigenvalue(k)) * inc.coeff[k - 1];
      double& s = out.coeff[k - 1];
      double next = s + term;
      comp[k - 1] += std::abs(s) >= std::abs(term) ? (s - next) + term : (term - next) + s;
      s = next;
    }
  }
  for (int k = 1; k <= M; ++k) out.coeff[k - 1] += comp[k - 1];
  return out;
}

}  // namespace spde
