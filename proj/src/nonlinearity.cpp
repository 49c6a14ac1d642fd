#include "spde/nonlinearity.hpp"

#include <cmath>
#include <string>

#include "spde/operators.hpp"
#include "spde/sine_transform.hpp"

namespace spde {
namespace {

std::vector<double> apply_drift(const std::vector<double>& nodal, const Drift& f) {
  std::vector<double> out(nodal.size());
  for (std::size_t m = 0; m < nodal.size(); ++m) {
    out[m] = f.f(nodal[m]) - f.at_zero;
    if (!std::isfinite(out[m]))
      throw NumericError("drift '" + f.name + "' returned a non-finite value at node " +
                         std::to_string(m + 1) + " (u = " + std::to_string(nodal[m]) + ")");
  }
  return out;
}

SpectralField add_constant_part(SpectralField w, const Drift& f, int M) {
  if (f.at_zero != 0.0) w = add(w, scale(constant_one_projection(M), f.at_zero));
  return w;
}

}  // namespace

const Drift& drift_registry(std::string_view name) {
  static const Drift sqrt1pu2{"sqrt1pu2", [](double u) { return std::sqrt(1.0 + u * u); }, 1.0};
  static const Drift zero{"zero", [](double) { return 0.0; }, 0.0};
  if (name == "sqrt1pu2") return sqrt1pu2;
  if (name == "zero") return zero;
  throw ValidationError("unknown drift '" + std::string(name) + "' (have: sqrt1pu2, zero)");
}

SpectralField collocation_nonlinearity(const SpectralField& v, const Drift& f) {
  int M = v.modes();
  if (M < 1) throw ValidationError("collocation_nonlinearity: empty field");
  SpectralField w = sine_interpolate(apply_drift(evaluate_on_grid(v), f));
  return add_constant_part(std::move(w), f, M);
}

SpectralField galerkin_nonlinearity(const SpectralField& v, const Drift& f, int oversample) {
  int M = v.modes();
  if (M < 1) throw ValidationError("galerkin_nonlinearity: empty field");
  if (oversample < 1) throw ValidationError("galerkin_nonlinearity: oversample must be >= 1");
  int Mf = oversample * M;
  SpectralField w = sine_interpolate(apply_drift(evaluate_on_grid(v, Mf), f));
  return add_constant_part(project_truncate(w, M), f, M);
}

}  // namespace spde
