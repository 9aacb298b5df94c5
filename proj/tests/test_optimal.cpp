#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vectormix/optimal_mixer.hpp"
#include "vectormix/spectral_ops.hpp"

using namespace vectormix;
using cd = std::complex<double>;

TEST_CASE("drive field matches the direct convolution") {
  const GridSpec g = GridSpec::with_cutoff(4);
  const auto u = oracle::random_field(g, 31, 4);
  for (double alpha : {0.5, 0.75, 1.0}) {
    const auto fast = drive_field(u, alpha);
    const auto slow = oracle::drive(u, alpha);
    CHECK(max_coefficient(fast - slow) <= 1e-13 * max_coefficient(slow));
  }
}

TEST_CASE("optimal field") {
  const GridSpec g = GridSpec::with_cutoff(8);
  const auto u = oracle::random_field(g, 41, 5);

  SUBCASE("unit seminorm, divergence-free, mean-zero") {
    const auto r = optimal_velocity(u, 1.0);
    CHECK_FALSE(r.degenerate);
    CHECK(sobolev_norm(r.U, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(divergence_ratio(r.U) <= 1e-15);
    CHECK(has_zero_mean(r.U));
  }
  SUBCASE("rate identity: <U, F> = -decay_rate") {
    for (double alpha : {0.5, 1.0}) {
      const auto r = optimal_velocity(u, alpha);
      CHECK(mix_norm_rate(u, r.U, alpha) == doctest::Approx(-r.decay_rate).epsilon(1e-12));
      CHECK(instantaneous_decay_identity(u, alpha) == doctest::Approx(-r.decay_rate).epsilon(1e-14));
      CHECK(r.decay_rate > 0.0);
    }
  }
  SUBCASE("no admissible field decays faster") {
    const auto r = optimal_velocity(u, 1.0);
    for (unsigned seed = 100; seed < 120; ++seed) {
      auto V = oracle::random_field(g, seed, 6);
      V *= 1.0 / sobolev_norm(V, 1.0);
      CHECK(mix_norm_rate(u, V, 1.0) >= -r.decay_rate * (1.0 + 1e-12));
    }
    // Perturbing the optimum only slows decay.
    auto V = r.U + 0.01 * oracle::random_field(g, 7, 4);
    V *= 1.0 / sobolev_norm(V, 1.0);
    CHECK(mix_norm_rate(u, V, 1.0) > -r.decay_rate);
  }
  SUBCASE("rate agrees with a finite difference of the mix norm along the frozen field") {
    const double alpha = 0.75;
    const auto r = optimal_velocity(u, alpha);
    const double d = 1e-6;
    const auto up = u + d * advection_rhs(u, r.U);
    const auto um = u - d * advection_rhs(u, r.U);
    const double hp = sobolev_norm(up, -alpha), hm = sobolev_norm(um, -alpha);
    const double fd = (0.5 * hp * hp - 0.5 * hm * hm) / (2 * d);
    CHECK(fd == doctest::Approx(-r.decay_rate).epsilon(1e-7));
  }
  SUBCASE("homogeneity: U is invariant under scaling u, the rate scales quadratically") {
    const auto a = optimal_velocity(u, 1.0);
    const auto b = optimal_velocity(3.0 * u, 1.0);
    CHECK(max_coefficient(a.U - b.U) <= 1e-14 * max_coefficient(a.U));
    CHECK(b.decay_rate == doctest::Approx(9.0 * a.decay_rate).epsilon(1e-13));
  }
}

TEST_CASE("degenerate states") {
  const GridSpec g = GridSpec::with_cutoff(8);
  SUBCASE("zero field") {
    const auto r = optimal_velocity(SpectralField::zero(g), 1.0);
    CHECK(r.degenerate);
    CHECK(max_coefficient(r.U) == 0.0);
    CHECK(r.decay_rate == 0.0);
  }
  SUBCASE("shear (0, sin x) has a pure-gradient drive") {
    auto u = SpectralField::zero(g);
    u.at(1, 1, 0) = cd(0.0, -0.5);
    u.at(1, -1, 0) = cd(0.0, 0.5);
    for (double alpha : {0.5, 1.0}) {
      CHECK(max_coefficient(leray_project(drive_field(u, alpha))) <= 1e-16);
      const auto r = optimal_velocity(u, alpha);
      CHECK(r.degenerate);
      CHECK(max_coefficient(r.U) == 0.0);
    }
  }
  SUBCASE("a single Fourier pair of any direction") {
    auto u = SpectralField::zero(g);  // stream sin(2x + 3y)
    u = velocity_from_stream(stream_from_modes(g, {{2, 3, cd(0.0, -0.5)}}));
    CHECK(optimal_velocity(u, 1.0).degenerate);
  }
  SUBCASE("the provider returns zero for degenerate input") {
    const auto p = optimal_provider(1.0);
    CHECK(max_coefficient(p.velocity(0.0, SpectralField::zero(g))) == 0.0);
    CHECK_FALSE(p.frozen_per_step);
    CHECK(optimal_provider(1.0, true).frozen_per_step);
  }
}
