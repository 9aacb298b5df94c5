#include "vectormix/optimal_mixer.hpp"

#include "vectormix/spectral_ops.hpp"
#include "vectormix/transform.hpp"

namespace vectormix {

SpectralField drive_field(const SpectralField& u, double alpha) {
  const int n = u.n();
  const int pad = u.grid.padded_size();
  const SpectralField phi = fractional_multiplier(u, -2.0 * alpha);
  const auto grad_phi = to_physical(gradient(phi), pad);
  const auto up = to_physical(u, pad);

  PhysicalField product;
  product.grid = u.grid;
  product.size = pad;
  for (int j = 0; j < 2; ++j)
    product.samples[j] = up.samples[0].cwiseProduct(grad_phi.samples[j]) +
                         up.samples[1].cwiseProduct(grad_phi.samples[2 + j]);

  SpectralField F = to_spectral(product, n);
  F.grid = u.grid;
  remove_mean(F);
  F.is_divergence_free = false;
  return F;
}

OptimalUResult optimal_velocity(const SpectralField& u, double alpha) {
  OptimalUResult result;
  const SpectralField W = fractional_multiplier(leray_project(drive_field(u, alpha)), -2.0);
  const double grad_w = sobolev_norm(W, 1.0);
  const double energy = sobolev_norm(u, 0.0);
  if (grad_w <= kDegeneracyThreshold * energy * energy) {
    result.U = SpectralField::zero(u.grid);
    result.decay_rate = 0.0;
    result.degenerate = true;
    return result;
  }
  result.U = W;
  result.U *= -1.0 / grad_w;
  result.U.is_divergence_free = true;
  result.U.is_mean_zero = true;
  result.decay_rate = grad_w;
  return result;
}

double instantaneous_decay_identity(const SpectralField& u, double alpha) {
  return -optimal_velocity(u, alpha).decay_rate;
}

double mix_norm_rate(const SpectralField& u, const SpectralField& U, double alpha) {
  return inner_product(U, drive_field(u, alpha));
}

VelocityProvider optimal_provider(double alpha, bool frozen_per_step) {
  return {[alpha](double, const SpectralField& u) { return optimal_velocity(u, alpha).U; },
          frozen_per_step};
}

}  // namespace vectormix
