#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "spde/errors.hpp"
#include "spde/mesh.hpp"
#include "spde/noise.hpp"
#include "spde/operators.hpp"
#include "spde/rng.hpp"

using namespace spde;

namespace {
constexpr double pi = std::numbers::pi;

double mode_std(const NoiseSpectrum& q, int k, double tau) {
  double lambda = eigenvalue(k);
  return std::sqrt(q.mu(k) * -std::expm1(-2.0 * tau * lambda) / (2.0 * lambda));
}
}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  // Reference vectors from the generator's published test suite.
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;

  CHECK(Philox4x32::block(A4{0, 0, 0, 0}, A2{0, 0}) ==
        A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

  CHECK(Philox4x32::block(A4{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          A2{0xffffffffu, 0xffffffffu}) ==
        A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

  CHECK(Philox4x32::block(A4{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          A2{0xa4093822u, 0x299f31d0u}) ==
        A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("uniform deviates stay strictly inside (0,1)") {
  double lo = uniform_from_block({0u, 0u, 0u, 0u});
  double hi = uniform_from_block({0xffffffffu, 0xffffffffu, 0u, 0u});
  CHECK(lo == 0x1p-53);
  CHECK(hi == 1.0 - 0x1p-53);
  CHECK(hi < 1.0);
  CHECK(std::isfinite(standard_normal_icdf(lo)));
  CHECK(std::isfinite(standard_normal_icdf(hi)));
}

TEST_CASE("normal quantile function") {
  CHECK(standard_normal_icdf(0.5) == 0.0);
  CHECK(standard_normal_icdf(0.975) == doctest::Approx(1.959963985).epsilon(1e-9));
  CHECK(standard_normal_icdf(0.841344746068543) == doctest::Approx(1.0).epsilon(1e-12));
  for (double u : {0.01, 0.3, 0.77})
    CHECK(standard_normal_icdf(u) == doctest::Approx(-standard_normal_icdf(1 - u)).epsilon(1e-13));
}

TEST_CASE("gaussian_entry is a pure function of its counter") {
  double a = gaussian_entry(42, 7, 3, 11);
  CHECK(a == gaussian_entry(42, 7, 3, 11));
  CHECK(a != gaussian_entry(42, 7, 3, 12));
  CHECK(a != gaussian_entry(42, 7, 4, 11));
  CHECK(a != gaussian_entry(42, 8, 3, 11));
  CHECK(a != gaussian_entry(43, 7, 3, 11));
  CHECK(std::isfinite(a));

  // 64-bit seeds and sample indices: the high words matter.
  CHECK(gaussian_entry(1ull << 40, 0, 1, 1) != gaussian_entry(0, 0, 1, 1));
  CHECK(gaussian_entry(0, 1ull << 40, 1, 1) != gaussian_entry(0, 0, 1, 1));
}

TEST_CASE("increment packs address the same entries as gaussian_entry") {
  GradedMesh mesh = graded_mesh(0.5, 6, 0.7);
  IncrementPack pack = sample_increments(mesh, 5, 99, 3);
  CHECK(pack.modes == 5);
  CHECK(pack.xi.size() == 30);
  for (int n = 1; n <= 6; ++n)
    for (int k = 1; k <= 5; ++k)
      CHECK(pack.xi_at(n, k) == gaussian_entry(99, 3, static_cast<std::uint32_t>(n),
                                               static_cast<std::uint32_t>(k)));

  IncrementPack again = sample_increments(mesh, 5, 99, 3);
  CHECK(pack.xi == again.xi);
}

TEST_CASE("pack entries pass basic moment checks") {
  GradedMesh mesh = graded_mesh(0.5, 1000, 0.0);
  IncrementPack pack = sample_increments(mesh, 1000, 0x5eed2026u, 0);
  const auto& x = pack.xi;  // one million standard normals

  long double s1 = 0.0L, s2 = 0.0L, s3 = 0.0L, s4 = 0.0L;
  for (double v : x) {
    s1 += v;
    s2 += v * v;
    s3 += v * v * v;
    s4 += v * v * v * v;
  }
  auto n = static_cast<long double>(x.size());
  CHECK(std::fabs(static_cast<double>(s1 / n)) < 4e-3);        // mean, 4 sigma
  CHECK(std::fabs(static_cast<double>(s2 / n) - 1.0) < 1e-2);  // variance
  CHECK(std::fabs(static_cast<double>(s3 / n)) < 1e-2);        // skewness
  CHECK(std::fabs(static_cast<double>(s4 / n) - 3.0) < 4e-2);  // kurtosis
}

TEST_CASE("distinct samples are uncorrelated") {
  GradedMesh mesh = graded_mesh(0.5, 200, 0.0);
  IncrementPack a = sample_increments(mesh, 200, 7, 0);
  IncrementPack b = sample_increments(mesh, 200, 7, 1);
  long double dot = 0.0L;
  for (std::size_t i = 0; i < a.xi.size(); ++i) dot += a.xi[i] * b.xi[i];
  double corr = static_cast<double>(dot) / static_cast<double>(a.xi.size());
  CHECK(std::fabs(corr) < 4.0 / std::sqrt(static_cast<double>(a.xi.size())));
}

TEST_CASE("noise spectra expose mu and the regularity exponent") {
  NoiseSpectrum w = NoiseSpectrum::white();
  CHECK(w.mu(1) == 1.0);
  CHECK(w.mu(1000) == 1.0);
  CHECK(w.alpha() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(w.power_form());

  NoiseSpectrum p = NoiseSpectrum::power(0.8);
  CHECK(p.mu(2) == doctest::Approx(std::pow(2.0, -0.8)).epsilon(1e-15));
  CHECK(p.alpha() == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(NoiseSpectrum::power(0.0).alpha() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(NoiseSpectrum::power(1.0).alpha() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(NoiseSpectrum::power(1.5).alpha() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(NoiseSpectrum::power(-0.1), ValidationError);

  NoiseSpectrum c = NoiseSpectrum::custom([](int k) { return k == 2 ? 3.0 : 0.0; }, 1.0);
  CHECK(c.mu(2) == 3.0);
  CHECK(c.mu(5) == 0.0);
  CHECK(c.alpha() == 1.0);
  CHECK(!c.power_form());
}

TEST_CASE("convolution increments carry the exact per-step standard deviation") {
  GradedMesh mesh = graded_mesh(0.5, 8, 0.7);
  NoiseSpectrum q = NoiseSpectrum::power(0.4);
  IncrementPack pack = sample_increments(mesh, 6, 1234, 5);

  for (int n = 1; n <= 8; ++n) {
    SpectralField inc = convolution_increment(pack, q, n, 6);
    REQUIRE(inc.modes() == 6);
    for (int k = 1; k <= 6; ++k)
      CHECK(inc.at(k) ==
            doctest::Approx(mode_std(q, k, mesh.dt(n)) * pack.xi_at(n, k)).epsilon(1e-14));
  }

  NoiseSpectrum mute = NoiseSpectrum::custom([](int) { return 0.0; }, 1.0);
  SpectralField silent = convolution_increment(pack, mute, 3, 6);
  CHECK(l2_norm(silent) == 0.0);
}

TEST_CASE("per-step increment variance matches the closed form") {
  // 1e5 uniform steps of length 0.01 give 1e5 independent draws of mode 1.
  GradedMesh mesh = graded_mesh(1000.0, 100000, 0.0);
  NoiseSpectrum q = NoiseSpectrum::white();
  IncrementPack pack = sample_increments(mesh, 1, 2718, 0);
  long double sq = 0.0L;
  for (int n = 1; n <= mesh.steps(); ++n) {
    double v = convolution_increment(pack, q, n, 1).at(1);
    sq += static_cast<long double>(v) * v;
  }
  double var = static_cast<double>(sq) / mesh.steps();
  double expect = mode_std(q, 1, 0.01);
  expect *= expect;
  CHECK(var == doctest::Approx(expect).epsilon(0.03));
}

TEST_CASE("aggregation reproduces single steps and pairwise recombination") {
  GradedMesh mesh = graded_mesh(0.5, 8, 0.7);
  NoiseSpectrum q = NoiseSpectrum::white();
  IncrementPack pack = sample_increments(mesh, 4, 77, 2);

  // span = 1: bitwise equal to the step increment.
  for (int n = 1; n <= 8; ++n) {
    SpectralField one = aggregate_increments(pack, q, n - 1, 1, 4);
    SpectralField ref = convolution_increment(pack, q, n, 4);
    for (int k = 1; k <= 4; ++k) CHECK(one.at(k) == ref.at(k));
  }

  // span = 2: e^(-tau_(n+1) lambda) inc_n + inc_(n+1), to a couple of ulp.
  for (int from : {0, 2, 4}) {
    SpectralField two = aggregate_increments(pack, q, from, 2, 4);
    SpectralField a = convolution_increment(pack, q, from + 1, 4);
    SpectralField b = convolution_increment(pack, q, from + 2, 4);
    for (int k = 1; k <= 4; ++k) {
      double decay = std::exp(-(mesh.t(from + 2) - mesh.t(from + 1)) * eigenvalue(k));
      double direct = decay * a.at(k) + b.at(k);
      CHECK(std::fabs(two.at(k) - direct) <= 8 * oracle::ulp_of(std::fabs(direct) + 1e-30));
    }
  }
}

TEST_CASE("aggregation weights telescope to the span variance") {
  // Feeding unit masses one step at a time extracts the aggregation weights;
  // their squares must sum to the exact variance over the span.
  GradedMesh mesh = graded_mesh(0.5, 12, 0.7);
  NoiseSpectrum q = NoiseSpectrum::power(0.6);
  const int from = 2, span = 8, modes = 5;

  IncrementPack probe;
  probe.mesh = mesh;
  probe.modes = modes;
  probe.xi.assign(static_cast<std::size_t>(mesh.steps() * modes), 0.0);

  std::vector<long double> wsq(static_cast<std::size_t>(modes), 0.0L);
  for (int j = 1; j <= span; ++j) {
    std::fill(probe.xi.begin(), probe.xi.end(), 0.0);
    for (int k = 1; k <= modes; ++k)
      probe.xi[static_cast<std::size_t>(from + j - 1) * modes + (k - 1)] = 1.0;
    SpectralField w = aggregate_increments(probe, q, from, span, modes);
    for (int k = 1; k <= modes; ++k)
      wsq[static_cast<std::size_t>(k - 1)] += static_cast<long double>(w.at(k)) * w.at(k);
  }

  double gap = mesh.t(from + span) - mesh.t(from);
  for (int k = 1; k <= modes; ++k) {
    double lambda = eigenvalue(k);
    double expect = q.mu(k) * -std::expm1(-2.0 * gap * lambda) / (2.0 * lambda);
    CHECK(static_cast<double>(wsq[static_cast<std::size_t>(k - 1)]) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("convolution series: small-time scaling and trace bounds") {
  NoiseSpectrum w = NoiseSpectrum::white();

  // E||W_A(t)||^2 / sqrt(t) approaches a constant as t -> 0.
  std::vector<double> ratios;
  for (int j = 4; j <= 20; ++j) {
    double t = std::pow(2.0, -j);
    SeriesValue s = convolution_l2_sq_exact(t, w, 1 << 16);
    CHECK(s.tail_bound >= 0.0);
    ratios.push_back((s.value + s.tail_bound / 2) / std::sqrt(t));
  }
  for (double r : ratios) {
    CHECK(r > 0.1);
    CHECK(r < 1.0);
  }
  CHECK(std::fabs(ratios.back() / ratios[ratios.size() - 2] - 1.0) < 0.02);

  // Single-mode spectrum: value -> mu_1 / (2 lambda_1) as t -> infinity.
  NoiseSpectrum solo = NoiseSpectrum::custom([](int k) { return k == 1 ? 1.0 : 0.0; }, 1.0);
  SeriesValue late = convolution_l2_sq_exact(50.0, solo, 64);
  CHECK(late.value == doctest::Approx(1.0 / (2 * pi * pi)).epsilon(1e-12));

  // Trace-class: value <= t * sum mu_k for short times.
  NoiseSpectrum p = NoiseSpectrum::power(1.1);
  double trace = 0.0;
  for (int k = 1; k <= 1 << 16; ++k) trace += p.mu(k);
  SeriesValue v = convolution_l2_sq_exact(0.1, p, 1 << 16);
  CHECK(v.value <= 0.1 * trace * (1 + 1e-12));

  // Monotone in the truncation, and the tail bound really covers the tail.
  SeriesValue k1 = convolution_l2_sq_exact(0.02, w, 1 << 10);
  SeriesValue k2 = convolution_l2_sq_exact(0.02, w, 1 << 14);
  SeriesValue k3 = convolution_l2_sq_exact(0.02, w, 1 << 18);
  CHECK(k1.value <= k2.value);
  CHECK(k2.value <= k3.value);
  CHECK(k3.value <= k1.value + k1.tail_bound * (1 + 1e-12));
  CHECK(k3.tail_bound < k1.tail_bound);

  CHECK_THROWS_AS(convolution_l2_sq_exact(-0.1, w, 64), ValidationError);
  CHECK_THROWS_AS(convolution_l2_sq_exact(0.1, w, 0), ValidationError);
}

TEST_CASE("dyadic block bounds for the stationary convolution") {
  NoiseSpectrum w = NoiseSpectrum::white();

  // Undamped white blocks at alpha = 1/2: block^2 -> ln(2) / (2 pi) from above.
  for (int j : {12, 14, 16}) {
    double b = besov_block_bound_exact(50.0, 0.5, w, j);
    CHECK(b * b == doctest::Approx(std::log(2.0) / (2 * pi)).epsilon(2e-3));
  }

  // Exact agreement with a direct mode sum on a small block.
  for (double t : {1e-3, 0.5}) {
    double direct = 0.0;
    auto [lo, hi] = dyadic_block(6);
    for (int k = lo; k <= hi; ++k) {
      double lambda = eigenvalue(k);
      direct += std::pow(lambda, 0.5 - 1.0) * -std::expm1(-2 * t * lambda) / 2.0;
    }
    CHECK(besov_block_bound_exact(t, 0.5, w, 6) ==
          doctest::Approx(std::sqrt(direct)).epsilon(1e-10));
  }

  // Trace-class at alpha = 1: block bounded by the block trace.
  NoiseSpectrum p = NoiseSpectrum::power(1.3);
  for (int j : {2, 6, 10}) {
    double block_trace = 0.0;
    auto [lo, hi] = dyadic_block(j);
    for (int k = lo; k <= hi; ++k) block_trace += p.mu(k) / 2.0;
    CHECK(besov_block_bound_exact(0.3, 1.0, p, j) <= std::sqrt(block_trace) * (1 + 1e-12));
  }

  // Blocks vanish as t -> 0.
  CHECK(besov_block_bound_exact(1e-14, 0.5, w, 8) < 1e-4);

  // Block squares sum to the Sobolev series over the same mode range.
  for (double alpha : {0.5, 0.9}) {
    double total = 0.0;
    for (int j = 1; j <= 10; ++j) {
      double b = besov_block_bound_exact(0.25, alpha, w, j);
      total += b * b;
    }
    CHECK(total == doctest::Approx(sobolev_sum_exact(0.25, alpha, w, (1 << 10) - 1))
                       .epsilon(1e-9));
  }
}

TEST_CASE("sobolev series grows without bound exactly when alpha exceeds the regularity") {
  NoiseSpectrum w = NoiseSpectrum::white();
  // At the critical alpha = 1/2 the series is log-divergent in K.
  double s8 = sobolev_sum_exact(0.5, 0.5, w, 1 << 8);
  double s14 = sobolev_sum_exact(0.5, 0.5, w, 1 << 14);
  CHECK(s14 / s8 >= 1.30);

  // Below critical the tail is summable and the growth levels off.
  double r8 = sobolev_sum_exact(0.5, 0.3, w, 1 << 8);
  double r14 = sobolev_sum_exact(0.5, 0.3, w, 1 << 14);
  CHECK(r14 / r8 < 1.10);
}

TEST_CASE("increment scaling equals the convolution series at the gap") {
  NoiseSpectrum w = NoiseSpectrum::white();
  for (auto [t1, t2] : {std::pair{0.5, 0.25}, {0.3, 0.0}, {0.26, 0.25}}) {
    double inc = increment_scaling_exact(t1, t2, w, 1 << 12);
    double ref = convolution_l2_sq_exact(t1 - t2, w, 1 << 12).value;
    CHECK(inc == doctest::Approx(ref).epsilon(1e-13));
  }

  // Square-root band in the gap, and decay to zero.
  double t2 = 0.25;
  for (int j = 1; j <= 20; ++j) {
    double h = std::pow(2.0, -j);
    double r = increment_scaling_exact(t2 + h, t2, w, 1 << 16) / std::sqrt(h);
    CHECK(r > 0.1);
    CHECK(r < 1.0);
  }
  CHECK(increment_scaling_exact(t2 + 1e-12, t2, w, 1 << 16) < 1e-5);
  CHECK_THROWS_AS(increment_scaling_exact(0.2, 0.3, w, 64), ValidationError);
}

TEST_CASE("Monte Carlo Ito isometry over one step") {
  // E || int_0^tau e^(-(tau-s)A) dW ||^2 against the truncated series.
  GradedMesh mesh = graded_mesh(0.3, 1, 0.0);
  NoiseSpectrum q = NoiseSpectrum::white();
  const int modes = 8, samples = 10000;

  long double acc = 0.0L;
  for (int i = 0; i < samples; ++i) {
    IncrementPack pack = sample_increments(mesh, modes, 4242, static_cast<std::uint64_t>(i));
    double norm = l2_norm(convolution_increment(pack, q, 1, modes));
    acc += static_cast<long double>(norm) * norm;
  }
  double mc = static_cast<double>(acc) / samples;
  double exact = convolution_l2_sq_exact(0.3, q, modes).value;
  CHECK(mc == doctest::Approx(exact).epsilon(0.05));
}
