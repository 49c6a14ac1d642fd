#pragma once

#include <array>
#include <cstdint>

namespace spde {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11 constants).
// Stateless: each (counter, key) pair yields an independent 128-bit block, so
// any Gaussian entry of a noise pack is addressable without generating its
// predecessors.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
      std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }
};

/// Uniform deviate strictly inside (0,1) from a 128-bit Philox block: the top
/// 52 bits of the first two words, centered in the bin (so neither endpoint
/// is reachable).
double uniform_from_block(const std::array<std::uint32_t, 4>& block);

/// Standard normal quantile function (inverse CDF), u in (0,1).
double standard_normal_icdf(double u);

/// The Gaussian draw for noise-pack entry (n, k) of a given sample:
/// key = master seed, counter = (sample, n, k).
double gaussian_entry(std::uint64_t master_seed, std::uint64_t sample_index, std::uint32_t n,
                      std::uint32_t k);

}  // namespace spde
