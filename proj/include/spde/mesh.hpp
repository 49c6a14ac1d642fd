#pragma once

#include <utility>
#include <vector>

#include "spde/errors.hpp"

namespace spde {

/// Time levels 0 = t_0 < t_1 < ... < t_N = T with t_n = T (n/N)^(1/(1-gamma)).
/// gamma = 0 is the uniform mesh; gamma -> 1 concentrates levels near t = 0
/// so that step sizes behave like tau_n ~ t_n^gamma * tau with the stored
/// normalizer tau = T^(1-gamma) / ((1-gamma) N).
struct GradedMesh {
  double T = 0.0;
  double gamma = 0.0;
  double tau = 0.0;
  std::vector<double> level;  // level[n] = t_n, n = 0..N

  int steps() const { return static_cast<int>(level.size()) - 1; }
  double t(int n) const { return level[static_cast<std::size_t>(n)]; }
  double dt(int n) const {  // tau_n = t_n - t_(n-1), n = 1..N
    if (n < 1 || n > steps()) throw ValidationError("GradedMesh::dt: step index out of range");
    return level[static_cast<std::size_t>(n)] - level[static_cast<std::size_t>(n - 1)];
  }
};

/// Build the graded mesh. Requires T > 0, N >= 1, 0 <= gamma < 1.
/// Dyadic nesting: graded_mesh(T, 2N, gamma) contains this mesh's levels at
/// the even indices (bit-exact up to 1 ulp of T).
GradedMesh graded_mesh(double T, int N, double gamma);

/// Checks the grading: tau_n / (t_n^gamma tau) within positive constants and
/// consecutive ratios tau_n / tau_(n-1) inside [1, 2^(1/(1-gamma))]. Returns
/// (c_min, c_max); throws ValidationError naming the first offending step.
std::pair<double, double> verify_grading(const GradedMesh& mesh);

/// Smallest admissible grading exponent for noise regularity alpha and datum
/// regularity beta: max(1/2, 1 - (1 + beta)/alpha). Requires 0 < alpha <= 1
/// and beta in (-1, alpha].
double gamma_lower_bound(double alpha, double beta);

}  // namespace spde
