#pragma once

#include <span>
#include <vector>

#include "spde/field.hpp"

namespace spde {

// Collocation grid for M modes: x_m = m / (M + 1), m = 1..M. On these nodes
// the discrete sine transform
//   g_hat_k = 2/(M+1) sum_m g_m sin(k m pi / (M+1))
// is an involution (up to scaling), so interpolation and evaluation are a
// transform pair. Orthonormal-basis coefficients differ from g_hat by 1/sqrt(2).

/// Nodes x_m = m/(M+1), m = 1..M.
std::vector<double> collocation_nodes(int M);

/// Trigonometric interpolation: nodal values at the M-point grid to the unique
/// M-mode field matching them. O(M log M). Throws NumericError naming the node
/// index if an input is non-finite.
SpectralField sine_interpolate(std::span<const double> nodal);

/// Field values on the M'-point collocation grid where M' >= field mode count
/// zero-pads and M' < mode count is rejected. Default M' = field mode count.
std::vector<double> evaluate_on_grid(const SpectralField& v, int grid_modes = 0);

}  // namespace spde
