#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "spde/config.hpp"
#include "spde/errors.hpp"
#include "spde/mesh.hpp"

using namespace spde;

TEST_CASE("graded mesh levels follow T (n/N)^(1/(1-gamma))") {
  // gamma = 1/2: t_n = (n/N)^2.
  GradedMesh m = graded_mesh(1.0, 4, 0.5);
  REQUIRE(m.steps() == 4);
  std::vector<double> expect = {0.0, 1.0 / 16, 1.0 / 4, 9.0 / 16, 1.0};
  for (int n = 0; n <= 4; ++n)
    CHECK(m.t(n) == doctest::Approx(expect[static_cast<std::size_t>(n)]).epsilon(1e-15));
  CHECK(m.t(4) == 1.0);

  // Steps increase away from t = 0.
  for (int n = 2; n <= 4; ++n) CHECK(m.dt(n) > m.dt(n - 1));

  // Stored normalizer tau = T^(1-gamma) / ((1-gamma) N).
  CHECK(m.tau == doctest::Approx(1.0 / (0.5 * 4)).epsilon(1e-15));
  GradedMesh g7 = graded_mesh(0.5, 43, 0.7);
  CHECK(g7.tau == doctest::Approx(std::pow(0.5, 0.3) / (0.3 * 43)).epsilon(1e-14));
}

TEST_CASE("gamma = 0 is the uniform mesh") {
  GradedMesh m = graded_mesh(2.0, 8, 0.0);
  for (int n = 0; n <= 8; ++n) CHECK(m.t(n) == doctest::Approx(0.25 * n).epsilon(1e-15));
  for (int n = 1; n <= 8; ++n) CHECK(m.dt(n) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(m.tau == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("mesh argument and index validation") {
  CHECK_THROWS_AS(graded_mesh(0.0, 4, 0.5), ValidationError);
  CHECK_THROWS_AS(graded_mesh(1.0, 0, 0.5), ValidationError);
  CHECK_THROWS_AS(graded_mesh(1.0, 4, -0.1), ValidationError);
  CHECK_THROWS_AS(graded_mesh(1.0, 4, 1.0), ValidationError);

  GradedMesh m = graded_mesh(1.0, 4, 0.5);
  CHECK_THROWS_AS(m.dt(0), ValidationError);
  CHECK_THROWS_AS(m.dt(5), ValidationError);
  CHECK(m.dt(1) == doctest::Approx(1.0 / 16).epsilon(1e-15));
}

TEST_CASE("dyadic refinement nests the coarse levels") {
  for (double gamma : {0.0, 0.3, 0.7, 0.9})
    for (int N : {1, 5, 16, 273}) {
      GradedMesh coarse = graded_mesh(0.5, N, gamma);
      GradedMesh fine = graded_mesh(0.5, 2 * N, gamma);
      for (int n = 0; n <= N; ++n)
        CHECK(std::fabs(fine.t(2 * n) - coarse.t(n)) <= 0.5 * 0x1p-52);
    }
}

TEST_CASE("verify_grading accepts the constructed meshes") {
  // Uniform mesh: tau_n / (t_n^0 tau) = 1 for every step.
  GradedMesh uniform = graded_mesh(1.0, 16, 0.0);
  auto [c0min, c0max] = verify_grading(uniform);
  CHECK(c0min == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c0max == doctest::Approx(1.0).epsilon(1e-12));

  // Graded meshes: constants positive, bounded, and stable across sizes.
  for (double gamma : {0.3, 0.5, 0.7, 0.9})
    for (int N : {1, 2, 3, 16, 100, 4096}) {
      GradedMesh m = graded_mesh(0.5, N, gamma);
      auto [cmin, cmax] = verify_grading(m);
      CHECK(cmin > 0.0);
      CHECK(cmax >= cmin);
      CHECK(cmax < 3.0);  // tau_n <= c t_n^gamma tau with a modest constant

      // Consecutive steps never shrink and never more than double in the
      // rescaled sense: tau_(n+1)/tau_n <= 2^(1/(1-gamma)).
      double cap = std::pow(2.0, 1.0 / (1.0 - gamma)) * (1 + 1e-12);
      for (int n = 2; n <= N; ++n) {
        CHECK(m.dt(n) >= m.dt(n - 1) * (1 - 1e-12));
        CHECK(m.dt(n) / m.dt(n - 1) <= cap);
      }
    }
}

TEST_CASE("gamma_lower_bound covers both regimes") {
  // Smooth data: the 1/2 floor binds.
  CHECK(gamma_lower_bound(0.5, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gamma_lower_bound(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  // Rough data: 1 - (1+beta)/alpha binds.
  CHECK(gamma_lower_bound(1.0, -0.9) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(gamma_lower_bound(0.6, -0.8) == doctest::Approx(1.0 - 0.2 / 0.6).epsilon(1e-12));
  // The point mass under space-time white noise sits exactly at the floor.
  CHECK(gamma_lower_bound(0.5, -0.51) == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(gamma_lower_bound(0.0, 0.0), ValidationError);
  CHECK_THROWS_AS(gamma_lower_bound(1.5, 0.0), ValidationError);
  CHECK_THROWS_AS(gamma_lower_bound(0.5, -1.0), ValidationError);
  CHECK_THROWS_AS(gamma_lower_bound(0.5, 0.6), ValidationError);  // beta > alpha
}

TEST_CASE("steps_from_tau realizes the nominal stepsize") {
  // Uniform meshes: N = T / tau.
  CHECK(steps_from_tau(0.125, 1.0, 0.0) == 8);
  CHECK(steps_from_tau(0.1, 0.5, 0.0) == 5);

  // Graded meshes: N = round(T^(1-gamma) / ((1-gamma) tau)), so the stored
  // mesh normalizer comes back out as the requested tau.
  for (double tau : {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256}) {
    int N = steps_from_tau(tau, 0.5, 0.7);
    GradedMesh m = graded_mesh(0.5, N, 0.7);
    CHECK(m.tau == doctest::Approx(tau).epsilon(0.02));  // rounding of N only
  }
  CHECK(steps_from_tau(1.0 / 16, 0.5, 0.7) == 43);
  CHECK(steps_from_tau(1.0 / 256, 0.5, 0.7) == 693);

  CHECK_THROWS_AS(steps_from_tau(0.0, 0.5, 0.7), ValidationError);
  CHECK_THROWS_AS(steps_from_tau(2.0, 0.5, 0.7), ValidationError);
  CHECK_THROWS_AS(steps_from_tau(0.1, -1.0, 0.7), ValidationError);
  CHECK_THROWS_AS(steps_from_tau(0.1, 0.5, 1.0), ValidationError);
}
