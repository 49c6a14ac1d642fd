#include "spde/sine_transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace spde {
namespace {

// FFTW RODFT00 of length M computes Y_k = 2 sum_m X_m sin(k m pi / (M+1)),
// unnormalized. Plans are cached per size and created once under a lock;
// execution uses the new-array interface, which is thread safe. Plans are
// created FFTW_UNALIGNED so they are valid for any caller buffer.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int M) {
    std::lock_guard lock(mu_);
    auto it = plans_.find(M);
    if (it != plans_.end()) return it->second;
    std::vector<double> in(static_cast<std::size_t>(M)), out(static_cast<std::size_t>(M));
    fftw_plan p = fftw_plan_r2r_1d(M, in.data(), out.data(), FFTW_RODFT00,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw NumericError("sine transform: FFTW plan creation failed for size " + std::to_string(M));
    plans_.emplace(M, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [m, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  PlanCache() = default;
  std::mutex mu_;
  std::map<int, fftw_plan> plans_;
};

void dst1(int M, double* in, double* out) {
  fftw_execute_r2r(PlanCache::instance().get(M), in, out);
}

}  // namespace

std::vector<double> collocation_nodes(int M) {
  if (M < 1) throw ValidationError("collocation_nodes: mode count must be >= 1");
  std::vector<double> x(static_cast<std::size_t>(M));
  for (int m = 1; m <= M; ++m) x[m - 1] = static_cast<double>(m) / (M + 1);
  return x;
}

SpectralField sine_interpolate(std::span<const double> nodal) {
  int M = static_cast<int>(nodal.size());
  if (M < 1) throw ValidationError("sine_interpolate: need at least one nodal value");
  std::vector<double> in(nodal.begin(), nodal.end());
  for (int m = 0; m < M; ++m)
    if (!std::isfinite(in[m]))
      throw NumericError("sine_interpolate: non-finite nodal value at node " + std::to_string(m + 1));
  SpectralField v = SpectralField::zeros(M);
  dst1(M, in.data(), v.coeff.data());
  // Y_k -> orthonormal coefficients: divide by (M+1) sqrt(2).
  double s = 1.0 / ((M + 1) * std::numbers::sqrt2);
  for (double& c : v.coeff) c *= s;
  return v;
}

std::vector<double> evaluate_on_grid(const SpectralField& v, int grid_modes) {
  int M = grid_modes == 0 ? v.modes() : grid_modes;
  if (M < 1) throw ValidationError("evaluate_on_grid: grid size must be >= 1");
  if (M < v.modes())
    throw ValidationError("evaluate_on_grid: grid of " + std::to_string(M) +
                          " nodes cannot resolve " + std::to_string(v.modes()) + " modes");
  // g_m = sum_k v_k sqrt(2) sin(k m pi/(M+1)) = RODFT00(v / sqrt(2))_m.
  std::vector<double> in(static_cast<std::size_t>(M), 0.0);
  for (int k = 0; k < v.modes(); ++k) in[k] = v.coeff[k] / std::numbers::sqrt2;
  std::vector<double> out(static_cast<std::size_t>(M));
  dst1(M, in.data(), out.data());
  return out;
}

}  // namespace spde
