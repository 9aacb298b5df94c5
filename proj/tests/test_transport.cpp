#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "vectormix/spectral_ops.hpp"
#include "vectormix/transport.hpp"

using namespace vectormix;
using cd = std::complex<double>;

namespace {

SpectralField sin_x_y_component(const GridSpec& g) {  // (0, sin x)
  auto u = SpectralField::zero(g);
  u.at(1, 1, 0) = cd(0.0, -0.5);
  u.at(1, -1, 0) = cd(0.0, 0.5);
  return u;
}

SimState advance_to(SimState s, const VelocityProvider& p, const StepControl& ctrl, double t_end) {
  while (s.t < t_end) s = rk45_step(s, p, ctrl, t_end);
  return s;
}

}  // namespace

TEST_CASE("convective term matches the direct convolution") {
  const GridSpec g = GridSpec::with_cutoff(4);
  const auto u = oracle::random_field(g, 1, 4);
  const auto U = oracle::random_field(g, 2, 4);
  const auto fast = convective_term(u, U);
  const auto slow = oracle::convective(u, U);
  CHECK(max_coefficient(fast - slow) <= 1e-13 * max_coefficient(slow));
}

TEST_CASE("advection right-hand side") {
  const GridSpec g = GridSpec::with_cutoff(6);
  const auto u = oracle::random_field(g, 7, 6);
  const auto U = oracle::random_field(g, 8, 3);
  const auto rhs = advection_rhs(u, U);
  CHECK(divergence_ratio(rhs) <= 1e-15);
  CHECK(has_zero_mean(rhs));
  // The Galerkin product is skew: <u, P((U.grad)u)> = 0.
  CHECK(std::abs(inner_product(u, rhs)) <= 1e-12 * sobolev_norm(u, 0.0) * sobolev_norm(rhs, 0.0));
  CHECK(max_coefficient(advection_rhs(u, SpectralField::zero(g))) == 0.0);
  CHECK_THROWS_AS(advection_rhs(u, SpectralField::zero(GridSpec::with_cutoff(5))), ShapeError);
}

TEST_CASE("translation by a constant field") {
  const GridSpec g = GridSpec::with_cutoff(8);
  auto U = SpectralField::zero(g);
  U.at(0, 0, 0) = 1.0;
  StepControl ctrl;
  ctrl.rtol = 1e-10;
  ctrl.atol = 1e-12;
  const SimState end = advance_to({0.0, sin_x_y_component(g), 0.0, 0.0}, constant_velocity(U), ctrl, 1.0);
  CHECK(end.t == 1.0);
  // (0, sin(x - t))
  const cd expect = cd(0.0, -0.5) * std::polar(1.0, -1.0);
  CHECK(std::abs(end.u.at(1, 1, 0) - expect) <= 1e-9);
  CHECK(std::abs(end.u.at(1, -1, 0) - std::conj(expect)) <= 1e-9);
  // (U.grad)u = (0, c cos x) is already divergence-free, so nothing else is excited.
  double other = 0.0;
  for (int kx = -8; kx <= 8; ++kx)
    for (int ky = -8; ky <= 8; ++ky)
      if (std::abs(kx) != 1 || ky != 0) other = std::max({other, std::abs(end.u.at(0, kx, ky)), std::abs(end.u.at(1, kx, ky))});
  CHECK(other <= 1e-15);
}

TEST_CASE("step control") {
  const GridSpec g = GridSpec::with_cutoff(8);
  const auto u = oracle::random_field(g, 3, 5);
  const auto U = oracle::random_field(g, 4, 3);
  const auto p = constant_velocity(U);
  StepControl ctrl;

  SUBCASE("steps never cross the limit and land on it exactly") {
    SimState s{0.0, u, 0.0, 0.0};
    s = rk45_step(s, p, ctrl, 1e-3);
    CHECK(s.t == 1e-3);
    CHECK(s.dt_last == 1e-3);
  }
  SUBCASE("zero field is a fixed point") {
    SimState s{0.0, SpectralField::zero(g), 0.0, 0.0};
    s = advance_to(s, p, ctrl, 0.5);
    CHECK(max_coefficient(s.u) == 0.0);
  }
  SUBCASE("energy is conserved to the tolerance") {
    const SimState s = advance_to({0.0, u, 0.0, 0.0}, p, ctrl, 1.0);
    const double e0 = sobolev_norm(u, 0.0), e1 = sobolev_norm(s.u, 0.0);
    CHECK(std::abs(e1 * e1 - e0 * e0) / (e0 * e0) <= 10 * ctrl.rtol);
    CHECK(divergence_ratio(s.u) <= 1e-12);
  }
  SUBCASE("fifth-order accuracy against a tight reference") {
    StepControl tight = ctrl;
    tight.rtol = 1e-13;
    tight.atol = 1e-15;
    const SimState ref = advance_to({0.0, u, 0.0, 0.0}, p, tight, 0.2);
    auto err = [&](double dt) {
      StepControl fixed = ctrl;
      fixed.rtol = 1.0;  // accept every step
      fixed.atol = 1e6;
      fixed.dt_init = fixed.dt_max = dt;
      const SimState s = advance_to({0.0, u, 0.0, dt}, p, fixed, 0.2);
      return sobolev_norm(s.u - ref.u, 0.0);
    };
    const double e1 = err(0.05), e2 = err(0.025);
    CHECK(std::log2(e1 / e2) > 4.5);
  }
  SUBCASE("stiffness is reported") {
    StepControl hard = ctrl;
    hard.rtol = 1e-30;
    hard.atol = 1e-30;
    hard.dt_min = 1e-3;
    CHECK_THROWS_AS(rk45_step({0.0, u, 0.0, 0.0}, p, hard), StiffnessError);
  }
  SUBCASE("invalid controls are rejected") {
    StepControl bad = ctrl;
    bad.rtol = -1.0;
    CHECK_THROWS(bad.validate());
    CHECK_THROWS(rk45_step({1.0, u, 0.0, 0.0}, p, ctrl, 0.5));
  }
  SUBCASE("cached start values do not change the result") {
    StepCache cache;
    cache.t = 0.0;
    cache.has_velocity = true;
    cache.velocity = U;
    const SimState a = rk45_step({0.0, u, 0.0, 0.0}, p, ctrl, 1.0, &cache);
    const SimState b = rk45_step({0.0, u, 0.0, 0.0}, p, ctrl, 1.0);
    CHECK(max_coefficient(a.u - b.u) == 0.0);
    CHECK(a.t == b.t);
  }
}

TEST_CASE("per-step frozen velocity evaluates the provider once per attempt") {
  const GridSpec g = GridSpec::with_cutoff(6);
  const auto u = oracle::random_field(g, 5, 4);
  int calls = 0;
  VelocityProvider p{[&](double, const SpectralField& v) {
                       ++calls;
                       return 0.1 * v;
                     },
                     true};
  StepControl ctrl;
  ctrl.rtol = 1e-3;
  rk45_step({0.0, u, 0.0, 0.01}, p, ctrl, 1.0);
  CHECK(calls >= 1);
  const int frozen_calls = calls;
  calls = 0;
  p.frozen_per_step = false;
  rk45_step({0.0, u, 0.0, 0.01}, p, ctrl, 1.0);
  CHECK(calls >= 6 * frozen_calls);
}
