#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "spde/field.hpp"

namespace spde {

/// A pointwise drift u -> f(u). `at_zero` caches f(0), which both projection
/// variants treat exactly (the boundary-incompatible constant part of f is
/// projected analytically instead of through the grid).
struct Drift {
  std::string name;
  std::function<double(double)> f;
  double at_zero = 0.0;
};

/// Built-in drifts: "sqrt1pu2" (f(u) = sqrt(1 + u^2)) and "zero".
const Drift& drift_registry(std::string_view name);

/// Collocation projection: interpolate f(v) - f(0) from the M-point grid,
/// then add f(0) times the projected constant. Exact for f(u) = u on M-mode
/// fields. Throws NumericError naming the node if f returns a non-finite value.
SpectralField collocation_nonlinearity(const SpectralField& v, const Drift& f);

/// Galerkin projection P_M f(v) approximated on an oversampled grid of
/// oversample * M nodes; aliasing decays with the oversampling factor. The
/// f(0) constant part is handled exactly as in the collocation variant.
SpectralField galerkin_nonlinearity(const SpectralField& v, const Drift& f, int oversample = 4);

}  // namespace spde
