#include "vectormix/transport.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "vectormix/spectral_ops.hpp"
#include "vectormix/transform.hpp"

namespace vectormix {

void StepControl::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) throw std::invalid_argument("rtol and atol must be positive");
  if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max))
    throw std::invalid_argument("step bounds must satisfy 0 < dt_min <= dt_init <= dt_max");
  if (!(safety > 0.0 && safety < 1.0)) throw std::invalid_argument("safety must lie in (0, 1)");
}

VelocityProvider constant_velocity(SpectralField U) {
  return {[U = std::move(U)](double, const SpectralField&) { return U; }, false};
}

SpectralField convective_term(const SpectralField& u, const SpectralField& U) {
  require_same_lattice(u.grid, U.grid, "convective_term");
  const int n = u.n();
  const int pad = u.grid.padded_size();
  const auto grad = to_physical(gradient(u), pad);
  const auto vel = to_physical(U, pad);

  PhysicalField product;
  product.grid = u.grid;
  product.size = pad;
  for (int i = 0; i < 2; ++i)
    product.samples[i] = vel.samples[0].cwiseProduct(grad.samples[2 * i]) +
                         vel.samples[1].cwiseProduct(grad.samples[2 * i + 1]);

  SpectralField out = to_spectral(product, n);
  out.grid = u.grid;
  return out;
}

SpectralField advection_rhs(const SpectralField& u, const SpectralField& U) {
  auto out = project_divfree_truncate(convective_term(u, U), u.n());
  out *= -1.0;
  remove_mean(out);
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5.0},
    {3.0 / 40.0, 9.0 / 40.0},
    {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0},
    {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0},
    {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0},
    {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0}};
constexpr std::array<double, 7> kB5 = {35.0 / 384.0,     0.0, 500.0 / 1113.0, 125.0 / 192.0,
                                       -2187.0 / 6784.0, 11.0 / 84.0, 0.0};
constexpr std::array<double, 7> kB4 = {5179.0 / 57600.0,     0.0,           7571.0 / 16695.0,
                                       393.0 / 640.0,        -92097.0 / 339200.0,
                                       187.0 / 2100.0,       1.0 / 40.0};

SpectralField combine(const SpectralField& base, double dt, const double* weights,
                      const std::array<SpectralField, 7>& k, int count) {
  SpectralField y = base;
  for (int j = 0; j < count; ++j) {
    if (weights[j] == 0.0) continue;
    for (int c = 0; c < 2; ++c) y.comp[c] += (dt * weights[j]) * k[j].comp[c];
  }
  return y;
}

}  // namespace

SimState rk45_step(const SimState& state, const VelocityProvider& provider,
                   const StepControl& ctrl, double t_limit, StepCache* cache) {
  const double t0 = state.t;
  if (!(t_limit > t0)) throw std::invalid_argument("rk45_step: t_limit must exceed current time");
  const bool frozen = provider.frozen_per_step;

  std::array<SpectralField, 7> k;
  SpectralField U0;
  if (cache != nullptr && cache->valid_at(t0)) {
    U0 = cache->velocity;
    k[0] = (!frozen && cache->has_rhs) ? cache->rhs : advection_rhs(state.u, U0);
  } else {
    U0 = provider.velocity(t0, state.u);
    k[0] = advection_rhs(state.u, U0);
  }

  double dt = state.dt_next > 0.0 ? state.dt_next : ctrl.dt_init;
  dt = std::min(dt, ctrl.dt_max);
  const double unclamped_proposal = dt;
  const double u_scale = sobolev_norm(state.u, 0.0);

  for (;;) {
    bool clamped = false;
    if (t0 + dt >= t_limit) {
      dt = t_limit - t0;
      clamped = true;
    }
    SpectralField U_last = U0;
    for (int s = 1; s < 7; ++s) {
      const SpectralField y = combine(state.u, dt, kA[s], k, s);
      const SpectralField U = frozen ? U0 : provider.velocity(t0 + kC[s] * dt, y);
      k[s] = advection_rhs(y, U);
      if (s == 6) U_last = U;
    }
    const SpectralField u5 = combine(state.u, dt, kB5.data(), k, 6);
    std::array<double, 7> diff{};
    for (int j = 0; j < 7; ++j) diff[j] = kB5[j] - kB4[j];
    const SpectralField delta = combine(SpectralField::zero(state.u.grid), dt, diff.data(), k, 7);
    const double err = sobolev_norm(delta, 0.0) / (ctrl.atol + ctrl.rtol * u_scale);

    const double factor =
        std::clamp(ctrl.safety * (err > 0.0 ? std::pow(err, -0.2) : 5.0), 0.2, 5.0);
    if (err <= 1.0) {
      SimState next;
      next.t = clamped ? t_limit : t0 + dt;
      next.u = leray_project(u5);
      remove_mean(next.u);
      next.dt_last = dt;
      next.dt_next = std::min(ctrl.dt_max, dt * factor);
      if (clamped) next.dt_next = std::max(next.dt_next, std::min(unclamped_proposal, ctrl.dt_max));
      if (cache != nullptr) {
        cache->t = next.t;
        cache->has_velocity = !frozen;
        cache->has_rhs = !frozen;
        if (!frozen) {
          cache->velocity = U_last;
          cache->rhs = k[6];
        }
      }
      return next;
    }
    dt *= factor;
    if (dt < ctrl.dt_min) {
      char msg[160];
      std::snprintf(msg, sizeof msg, "step size underflow at t = %.17g (dt = %.3e, error ratio = %.3e)", t0, dt,
                    err);
      throw StiffnessError(msg, t0, dt, err);
    }
  }
}

}  // namespace vectormix
