#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "spde/errors.hpp"

namespace spde {

/// A function on (0,1) with zero boundary values, stored as coefficients in
/// the orthonormal sine basis e_k(x) = sqrt(2) sin(k pi x). coeff[i] is the
/// coefficient of mode k = i + 1.
struct SpectralField {
  std::vector<double> coeff;

  SpectralField() = default;
  explicit SpectralField(std::vector<double> c) : coeff(std::move(c)) {}

  static SpectralField zeros(int modes) {
    return SpectralField(std::vector<double>(static_cast<std::size_t>(modes), 0.0));
  }

  int modes() const { return static_cast<int>(coeff.size()); }

  /// Coefficient of mode k (1-based); zero beyond the stored range.
  double at(int k) const {
    if (k < 1) throw ValidationError("SpectralField::at: mode index must be >= 1");
    return k <= modes() ? coeff[static_cast<std::size_t>(k - 1)] : 0.0;
  }

  bool finite() const {
    for (double c : coeff)
      if (!std::isfinite(c)) return false;
    return true;
  }
};

/// a + b, zero-padding the shorter field.
inline SpectralField add(const SpectralField& a, const SpectralField& b) {
  const SpectralField& lo = a.modes() <= b.modes() ? a : b;
  const SpectralField& hi = a.modes() <= b.modes() ? b : a;
  SpectralField out = hi;
  for (int i = 0; i < lo.modes(); ++i) out.coeff[i] += lo.coeff[i];
  return out;
}

/// a - b, zero-padding the shorter field.
inline SpectralField sub(const SpectralField& a, const SpectralField& b) {
  int m = a.modes() > b.modes() ? a.modes() : b.modes();
  SpectralField out = SpectralField::zeros(m);
  for (int i = 0; i < m; ++i)
    out.coeff[i] = (i < a.modes() ? a.coeff[i] : 0.0) - (i < b.modes() ? b.coeff[i] : 0.0);
  return out;
}

inline SpectralField scale(const SpectralField& a, double s) {
  SpectralField out = a;
  for (double& c : out.coeff) c *= s;
  return out;
}

/// L2(0,1) norm; the basis is orthonormal so this is the Euclidean norm of
/// the coefficients.
inline double l2_norm(const SpectralField& a) {
  double acc = 0.0;
  for (double c : a.coeff) acc += c * c;
  return std::sqrt(acc);
}

/// A Monte Carlo ensemble of fields with a common mode count.
struct EnsembleField {
  std::vector<SpectralField> sample;

  int size() const { return static_cast<int>(sample.size()); }
};

}  // namespace spde
