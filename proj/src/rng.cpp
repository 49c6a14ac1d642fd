#include "spde/rng.hpp"

#include <gsl/gsl_cdf.h>

namespace spde {

double uniform_from_block(const std::array<std::uint32_t, 4>& block) {
  std::uint64_t bits = (static_cast<std::uint64_t>(block[0]) << 32) | block[1];
  // 52 bits plus the bin center: every value sits strictly inside (0,1).
  // With 53 bits the top bin (2^53 - 1 + 0.5) * 2^-53 would round to 1.0
  // and push the normal quantile to infinity.
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

double standard_normal_icdf(double u) { return gsl_cdf_ugaussian_Pinv(u); }

double gaussian_entry(std::uint64_t master_seed, std::uint64_t sample_index, std::uint32_t n,
                      std::uint32_t k) {
  std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(sample_index),
                                      static_cast<std::uint32_t>(sample_index >> 32), n, k};
  std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(master_seed),
                                      static_cast<std::uint32_t>(master_seed >> 32)};
  return standard_normal_icdf(uniform_from_block(Philox4x32::block(ctr, key)));
}

}  // namespace spde
