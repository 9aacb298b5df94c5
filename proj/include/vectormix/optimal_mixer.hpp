#pragma once

#include "vectormix/spectral_field.hpp"
#include "vectormix/transport.hpp"

namespace vectormix {

/// Relative threshold on |grad W| below which the stirring direction is undefined.
inline constexpr double kDegeneracyThreshold = 1e-13;

struct OptimalUResult {
  SpectralField U;
  /// |grad W|_{L^2} with W = (-Lap)^{-1} P F; the instantaneous decay of half the squared mix norm.
  double decay_rate = 0.0;
  bool degenerate = false;
};

/// F_j = sum_i u_i d_j phi_i with phi = |grad|^{-2 alpha} u, formed alias-free.
/// The result has zero mean but is generally not divergence-free.
SpectralField drive_field(const SpectralField& u, double alpha);

/// Greedy instantaneous optimizer: the field with unit homogeneous H^1 seminorm
/// that makes d/dt (1/2)|u|^2_{H^-alpha} as negative as possible.
OptimalUResult optimal_velocity(const SpectralField& u, double alpha);

/// d/dt (1/2)|u|^2_{H^-alpha} under the optimal field, i.e. -decay_rate.
double instantaneous_decay_identity(const SpectralField& u, double alpha);

/// d/dt (1/2)|u|^2_{H^-alpha} = <U, F(u)> for an arbitrary divergence-free U.
double mix_norm_rate(const SpectralField& u, const SpectralField& U, double alpha);

/// Provider recomputing the optimal field from the stage state (per-stage by
/// default; per-step when `frozen_per_step`). Degenerate states yield U = 0.
VelocityProvider optimal_provider(double alpha, bool frozen_per_step = false);

}  // namespace vectormix
