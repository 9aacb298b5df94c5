#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "vectormix/spectral_ops.hpp"
#include "vectormix/transform.hpp"

using namespace vectormix;
using std::numbers::pi;
using cd = std::complex<double>;

TEST_CASE("padded grid sizes resolve quadratic products") {
  for (int n : {1, 2, 7, 16, 32, 64, 128, 256}) {
    const int m = dealiased_size(n);
    CHECK(m >= 3 * n + 1);
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    CHECK(r == 1);
  }
  CHECK(good_fft_size(97) == 98);
  CHECK(GridSpec::with_cutoff(64).padded_size() == dealiased_size(64));
  CHECK_THROWS_AS(GridSpec(8, 10, 2 * pi), RepresentabilityError);
}

TEST_CASE("Leray projection") {
  const GridSpec g = GridSpec::with_cutoff(6);
  SUBCASE("zero field stays zero") {
    const auto p = leray_project(SpectralField::zero(g));
    CHECK(max_coefficient(p) == 0.0);
  }
  SUBCASE("pure gradient is removed") {
    // grad(cos x) = (-sin x, 0)
    auto f = SpectralField::zero(g);
    f.at(0, 1, 0) = cd(0.0, 0.5);
    f.at(0, -1, 0) = cd(0.0, -0.5);
    CHECK(max_coefficient(leray_project(f)) == 0.0);
  }
  SUBCASE("divergence-free field passes unchanged and projection is idempotent") {
    const auto u = oracle::random_field(g, 3, 4);
    const auto p = leray_project(u);
    CHECK(max_coefficient(p - u) <= 1e-15 * max_coefficient(u));
    auto junk = u;
    junk.at(0, 2, 1) += cd(0.3, -0.1);
    junk.at(0, -2, -1) += cd(0.3, 0.1);
    const auto p1 = leray_project(junk);
    CHECK(divergence_ratio(p1) <= 1e-15);
    CHECK(max_coefficient(leray_project(p1) - p1) <= 1e-16);
  }
  SUBCASE("mean passes through") {
    auto f = SpectralField::zero(g);
    f.at(0, 0, 0) = 2.0;
    CHECK(leray_project(f).at(0, 0, 0) == cd(2.0));
  }
  SUBCASE("truncation drops modes above the cutoff") {
    const auto u = oracle::random_field(g, 4, 6);
    const auto p = project_divfree_truncate(u, 3);
    CHECK(p.at(0, 5, 1) == cd(0.0));
    CHECK(p.at(1, 2, 3) == u.at(1, 2, 3));
  }
  SUBCASE("scalar-generic instantiation") {
    auto f = BasicSpectralField<long double, 2>::zero(g);
    f.at(0, 1, 1) = 1.0L;
    f.at(0, -1, -1) = 1.0L;
    const auto p = leray_project(f);
    CHECK(std::abs(p.at(0, 1, 1) - std::complex<long double>(0.5L)) < 1e-18L);
    CHECK(std::abs(p.at(1, 1, 1) + std::complex<long double>(0.5L)) < 1e-18L);
  }
}

TEST_CASE("fractional multiplier and Sobolev norms") {
  const GridSpec g = GridSpec::with_cutoff(8);
  const auto u = oracle::random_field(g, 5, 6);
  SUBCASE("s = 0 is the identity, including the mean") {
    auto f = u;
    f.at(0, 0, 0) = 1.0;
    const auto h = fractional_multiplier(f, 0.0);
    CHECK(max_coefficient(h - f) == 0.0);
  }
  SUBCASE("orders compose") {
    const auto back = fractional_multiplier(fractional_multiplier(u, 1.3), -1.3);
    CHECK(max_coefficient(back - u) <= 1e-14 * max_coefficient(u));
  }
  SUBCASE("negative order with a mean is rejected") {
    auto f = u;
    f.at(1, 0, 0) = 0.5;
    CHECK_THROWS_AS(fractional_multiplier(f, -1.0), NonintegrableModeError);
    CHECK_THROWS_AS(sobolev_norm(f, -0.5), NonintegrableModeError);
  }
  SUBCASE("single mode on the standard torus") {
    // u = (0, sin x): |u|_{L^2}^2 = 2 pi^2, every homogeneous order gives the same value at |k| = 1
    auto f = SpectralField::zero(g);
    f.at(1, 1, 0) = cd(0.0, -0.5);
    f.at(1, -1, 0) = cd(0.0, 0.5);
    for (double s : {-1.0, -0.5, 0.0, 1.0, 2.0}) CHECK(sobolev_norm(f, s) == doctest::Approx(std::sqrt(2.0) * pi));
  }
  SUBCASE("side length scales wavenumbers") {
    const GridSpec g2 = GridSpec::with_cutoff(4, 1.0);
    auto f = SpectralField::zero(g2);
    f.at(1, 1, 0) = cd(0.0, -0.5);
    f.at(1, -1, 0) = cd(0.0, 0.5);
    const double l2 = sobolev_norm(f, 0.0);
    CHECK(l2 == doctest::Approx(std::sqrt(0.5)));
    CHECK(sobolev_norm(f, 1.0) == doctest::Approx(2 * pi * l2));
    CHECK(sobolev_norm(f, -1.0) == doctest::Approx(l2 / (2 * pi)));
  }
  SUBCASE("L2 norm agrees with quadrature") {
    const auto p = to_physical(u, 40);
    CHECK(sobolev_norm(u, 0.0) == doctest::Approx(lebesgue_norm(p, 2.0)).epsilon(1e-12));
  }
  SUBCASE("H1 seminorm agrees with the gradient's L2 norm") {
    CHECK(sobolev_norm(u, 1.0) == doctest::Approx(sobolev_norm(gradient(u), 0.0)).epsilon(1e-12));
  }
}

TEST_CASE("transforms") {
  const GridSpec g = GridSpec::with_cutoff(5);
  const auto u = oracle::random_field(g, 11, 5);
  SUBCASE("round trip on any representable grid") {
    for (int m : {11, 12, 16, 21, g.padded_size()}) {
      const auto back = to_spectral(to_physical(u, m), 5);
      CHECK(max_coefficient(back - u) <= 1e-14 * max_coefficient(u));
    }
  }
  SUBCASE("samples match the direct sum") {
    const int m = 16;
    const auto p = to_physical(u, m);
    const double h = g.side_length / m;
    for (int a : {0, 3, 9})
      for (int b : {1, 7, 15})
        for (int c = 0; c < 2; ++c)
          CHECK(p.samples[c](a, b) == doctest::Approx(oracle::eval(u, c, a * h, b * h)).epsilon(1e-12));
  }
  SUBCASE("forward output is exactly Hermitian") {
    ScalarPhysicalField s;
    s.grid = g;
    s.size = 16;
    s.samples[0] = SampleMatrix<double>::Random(16, 16);
    const auto f = to_spectral(s, 5);
    CHECK(hermitian_defect(f) == 0.0);
    CHECK(f.at(0, 0, 0).imag() == 0.0);
  }
  SUBCASE("too small a grid is rejected") {
    CHECK_THROWS_AS(to_physical(u, 10), RepresentabilityError);
  }
  SUBCASE("Lebesgue norms") {
    auto f = ScalarSpectralField::zero(g);  // cos x
    f.at(0, 1, 0) = 0.5;
    f.at(0, -1, 0) = 0.5;
    const auto p = to_physical(f, 32);
    CHECK(lebesgue_norm(p, std::numeric_limits<double>::infinity()) == doctest::Approx(1.0));
    CHECK(lebesgue_norm(p, 2.0) == doctest::Approx(std::sqrt(2.0) * pi));
    CHECK(lebesgue_norm(p, 1.0) == doctest::Approx(8.0 * pi).epsilon(1e-2));
    CHECK_THROWS(lebesgue_norm(p, 0.5));
  }
}

TEST_CASE("differential operators") {
  const GridSpec g = GridSpec::with_cutoff(6);
  const auto u = oracle::random_field(g, 21, 5);
  CHECK(max_coefficient(divergence(u)) <= 1e-15 * max_coefficient(u) * 6);
  const auto psi = stream_function(u);
  CHECK(max_coefficient(perp_gradient(psi) - u) <= 1e-14 * max_coefficient(u));
  const auto grad = gradient(u);
  // component 2i + j = d_j u_i at one point
  const double x = 0.7, y = 2.1, d = 1e-6;
  const double fd = (oracle::eval(u, 1, x, y + d) - oracle::eval(u, 1, x, y - d)) / (2 * d);
  CHECK(oracle::eval(grad, 3, x, y) == doctest::Approx(fd).epsilon(1e-7));
}
