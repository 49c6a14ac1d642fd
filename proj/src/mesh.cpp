#include "spde/mesh.hpp"

#include <cmath>
#include <string>

namespace spde {

GradedMesh graded_mesh(double T, int N, double gamma) {
  if (!(T > 0.0)) throw ValidationError("graded_mesh: horizon T must be > 0");
  if (N < 1) throw ValidationError("graded_mesh: need at least one step");
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw ValidationError("graded_mesh: grading exponent must lie in [0, 1), got " +
                          std::to_string(gamma));
  GradedMesh mesh;
  mesh.T = T;
  mesh.gamma = gamma;
  mesh.tau = std::pow(T, 1.0 - gamma) / ((1.0 - gamma) * N);
  mesh.level.resize(static_cast<std::size_t>(N) + 1);
  double r = 1.0 / (1.0 - gamma);
  for (int n = 0; n <= N; ++n)
    mesh.level[static_cast<std::size_t>(n)] = T * std::pow(static_cast<double>(n) / N, r);
  mesh.level[0] = 0.0;
  mesh.level[static_cast<std::size_t>(N)] = T;
  return mesh;
}

std::pair<double, double> verify_grading(const GradedMesh& mesh) {
  int N = mesh.steps();
  if (N < 1 || !(mesh.tau > 0.0)) throw ValidationError("verify_grading: malformed mesh");
  double r = 1.0 / (1.0 - mesh.gamma);
  double c_min = 0.0, c_max = 0.0;
  for (int n = 1; n <= N; ++n) {
    double dt = mesh.dt(n);
    if (!(dt > 0.0))
      throw ValidationError("verify_grading: nonpositive step at n = " + std::to_string(n));
    double ratio = dt / (std::pow(mesh.t(n), mesh.gamma) * mesh.tau);
    c_min = n == 1 ? ratio : std::min(c_min, ratio);
    c_max = n == 1 ? ratio : std::max(c_max, ratio);
    if (n >= 2) {
      double growth = dt / mesh.dt(n - 1);
      // 1 ulp slack: consecutive steps of the power-law mesh can round to equal.
      if (growth < 1.0 - 1e-12 || growth > std::pow(2.0, r) + 1e-12)
        throw ValidationError("verify_grading: step ratio " + std::to_string(growth) +
                              " out of [1, 2^(1/(1-gamma))] at n = " + std::to_string(n));
    }
  }
  return {c_min, c_max};
}

double gamma_lower_bound(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ValidationError("gamma_lower_bound: noise regularity alpha must lie in (0, 1]");
  if (!(beta > -1.0 && beta <= alpha))
    throw ValidationError("gamma_lower_bound: datum regularity beta must lie in (-1, alpha]");
  return std::max(0.5, 1.0 - (1.0 + beta) / alpha);
}

}  // namespace spde
