#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "vectormix/spectral_field.hpp"

namespace vectormix {

/// Adaptive step-size control for the embedded Dormand-Prince 5(4) pair.
struct StepControl {
  double rtol = 1e-8;
  double atol = 1e-10;
  double dt_init = 1e-2;
  double dt_min = 1e-12;
  double dt_max = 0.1;
  double safety = 0.9;

  void validate() const;
};

struct SimState {
  double t = 0.0;
  SpectralField u;
  double dt_last = 0.0;
  /// Step size proposed by the controller for the next attempt (0 = use dt_init).
  double dt_next = 0.0;
};

/// Advecting field as a function of (t, u).
using VelocityFn = std::function<SpectralField(double, const SpectralField&)>;

struct VelocityProvider {
  VelocityFn velocity;
  /// Evaluate once per step at its start instead of at every stage.
  bool frozen_per_step = false;
};

/// Provider returning the same field at all times.
VelocityProvider constant_velocity(SpectralField U);

/// The step size fell below dt_min while the error estimate still exceeded 1.
class StiffnessError : public std::runtime_error {
 public:
  StiffnessError(const std::string& what, double t, double dt, double err)
      : std::runtime_error(what), t(t), dt(dt), err(err) {}
  double t, dt, err;
};

/// Cached values at the start of the next step (first-same-as-last reuse).
struct StepCache {
  double t = std::numeric_limits<double>::quiet_NaN();
  bool has_velocity = false;
  bool has_rhs = false;
  SpectralField velocity;
  SpectralField rhs;

  bool valid_at(double time) const { return has_velocity && t == time; }
};

/// (U . grad) u truncated to the lattice of u, formed alias-free on the
/// 3/2-padded grid (not projected).
SpectralField convective_term(const SpectralField& u, const SpectralField& U);

/// -P_N((U . grad) u), with the quadratic product formed alias-free on the
/// 3/2-padded grid. Output is divergence-free with zero mean.
SpectralField advection_rhs(const SpectralField& u, const SpectralField& U);

/// Advances `state` by one accepted Dormand-Prince 5(4) step, retrying with
/// smaller steps on rejection. The step never crosses `t_limit`. Throws
/// StiffnessError when the step would have to drop below ctrl.dt_min.
SimState rk45_step(const SimState& state, const VelocityProvider& provider,
                   const StepControl& ctrl,
                   double t_limit = std::numeric_limits<double>::infinity(),
                   StepCache* cache = nullptr);

}  // namespace vectormix
