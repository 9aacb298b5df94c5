#pragma once

// Linear spectral operators on truncated Fourier fields. All of these act
// modewise, so they are templated on the real scalar and component count.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vectormix/spectral_field.hpp"

namespace vectormix {

/// A negative-order multiplier was applied to a field with a nonzero mean.
class NonintegrableModeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Relative bound on |k . u_k| for a field flagged divergence-free.
inline constexpr double kDivergenceTolerance = 1e-12;

template <typename Real, int C>
bool has_zero_mean(const BasicSpectralField<Real, C>& f) {
  for (const auto& c : f.comp)
    if (c(f.n(), f.n()) != std::complex<Real>(0)) return false;
  return true;
}

/// Sets the k = 0 coefficient of every component to zero.
template <typename Real, int C>
void remove_mean(BasicSpectralField<Real, C>& f) {
  for (auto& c : f.comp) c(f.n(), f.n()) = 0;
  f.is_mean_zero = true;
}

/// Replaces each pair (c(k), c(-k)) by its Hermitian-symmetric part.
template <typename Real, int C>
void enforce_hermitian(BasicSpectralField<Real, C>& f) {
  const int m = f.grid.modes();
  for (auto& c : f.comp) {
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        const int ra = m - 1 - a, rb = m - 1 - b;
        if (a * m + b > ra * m + rb) continue;
        const auto sym = (c(a, b) + std::conj(c(ra, rb))) / Real(2);
        c(a, b) = sym;
        c(ra, rb) = std::conj(sym);
      }
    }
  }
}

/// max_k |c(k) - conj(c(-k))| over all components.
template <typename Real, int C>
Real hermitian_defect(const BasicSpectralField<Real, C>& f) {
  const int m = f.grid.modes();
  Real worst = 0;
  for (const auto& c : f.comp)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        worst = std::max(worst, std::abs(c(a, b) - std::conj(c(m - 1 - a, m - 1 - b))));
  return worst;
}

/// Largest Euclidean norm of a coefficient vector over the lattice.
template <typename Real, int C>
Real max_coefficient(const BasicSpectralField<Real, C>& f) {
  const int m = f.grid.modes();
  Real worst = 0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      Real s = 0;
      for (const auto& c : f.comp) s += std::norm(c(a, b));
      worst = std::max(worst, std::sqrt(s));
    }
  return worst;
}

/// max_k |k . u_k| / max_k |u_k| on the integer lattice; 0 for the zero field.
template <typename Real>
Real divergence_ratio(const BasicSpectralField<Real, 2>& u) {
  const int n = u.n();
  Real worst = 0;
  for (int kx = -n; kx <= n; ++kx)
    for (int ky = -n; ky <= n; ++ky)
      worst = std::max(worst, std::abs(Real(kx) * u.at(0, kx, ky) + Real(ky) * u.at(1, kx, ky)));
  const Real scale = max_coefficient(u);
  return scale > 0 ? worst / scale : Real(0);
}

/// Copies f onto the lattice with cutoff n_new, dropping or zero-filling modes.
template <typename Real, int C>
BasicSpectralField<Real, C> resize_lattice(const BasicSpectralField<Real, C>& f, int n_new) {
  GridSpec g = f.grid;
  g.n_cutoff = n_new;
  g.phys_size = std::max(g.phys_size, 2 * n_new + 1);
  auto out = BasicSpectralField<Real, C>::zero(g);
  const int n = std::min(n_new, f.n());
  for (int c = 0; c < C; ++c)
    out.comp[c].block(n_new - n, n_new - n, 2 * n + 1, 2 * n + 1) =
        f.comp[c].block(f.n() - n, f.n() - n, 2 * n + 1, 2 * n + 1);
  out.is_divergence_free = f.is_divergence_free;
  out.is_mean_zero = f.is_mean_zero;
  return out;
}

/// Leray projection combined with truncation to |k|_inf <= n_cutoff.
///
/// Each retained k != 0 has its component along k removed; the mean passes
/// through unchanged so the operator stays idempotent on general input.
template <typename Real>
BasicSpectralField<Real, 2> project_divfree_truncate(const BasicSpectralField<Real, 2>& f,
                                                     int n_cutoff) {
  const int n = f.n();
  auto out = BasicSpectralField<Real, 2>::zero(f.grid);
  for (int kx = -n; kx <= n; ++kx) {
    for (int ky = -n; ky <= n; ++ky) {
      if (std::max(std::abs(kx), std::abs(ky)) > n_cutoff) continue;
      const auto fx = f.at(0, kx, ky), fy = f.at(1, kx, ky);
      if (kx == 0 && ky == 0) {
        out.at(0, 0, 0) = fx;
        out.at(1, 0, 0) = fy;
        continue;
      }
      const Real k2 = Real(kx * kx + ky * ky);
      const auto dot = (fx * Real(kx) + fy * Real(ky)) / k2;
      out.at(0, kx, ky) = fx - dot * Real(kx);
      out.at(1, kx, ky) = fy - dot * Real(ky);
    }
  }
  out.is_divergence_free = true;
  out.is_mean_zero = has_zero_mean(out);
  return out;
}

template <typename Real>
BasicSpectralField<Real, 2> leray_project(const BasicSpectralField<Real, 2>& f) {
  return project_divfree_truncate(f, f.n());
}

/// Multiplies mode k by ((2pi/L)|k|)^s. s = 0 is the identity; otherwise the
/// mean is mapped to zero, and s < 0 requires a field without mean.
template <typename Real, int C>
BasicSpectralField<Real, C> fractional_multiplier(const BasicSpectralField<Real, C>& f, Real s) {
  if (s == Real(0)) return f;
  if (s < 0 && !has_zero_mean(f))
    throw NonintegrableModeError("negative-order multiplier applied to a field with nonzero mean");
  const int n = f.n();
  const Real scale = Real(f.grid.wavenumber_scale());
  BasicSpectralField<Real, C> out = f;
  for (int kx = -n; kx <= n; ++kx)
    for (int ky = -n; ky <= n; ++ky) {
      const Real factor =
          (kx == 0 && ky == 0) ? Real(0)
                               : std::pow(scale * std::sqrt(Real(kx * kx + ky * ky)), s);
      for (int c = 0; c < C; ++c) out.at(c, kx, ky) *= factor;
    }
  out.is_mean_zero = true;
  return out;
}

/// Homogeneous Sobolev norm (sum_k ((2pi/L)|k|)^{2s} |u_k|^2 L^d)^{1/2}.
/// s = 0 gives the full L^2 norm, mean included.
template <typename Real, int C>
Real sobolev_norm(const BasicSpectralField<Real, C>& f, Real s) {
  if (s < 0 && !has_zero_mean(f))
    throw NonintegrableModeError("negative-order norm of a field with nonzero mean");
  const int n = f.n();
  const Real scale = Real(f.grid.wavenumber_scale());
  Real sum = 0;
  for (int kx = -n; kx <= n; ++kx)
    for (int ky = -n; ky <= n; ++ky) {
      Real weight;
      if (kx == 0 && ky == 0)
        weight = (s == Real(0)) ? Real(1) : Real(0);
      else
        weight = std::pow(scale * scale * Real(kx * kx + ky * ky), s);
      if (weight == Real(0)) continue;
      Real mag = 0;
      for (int c = 0; c < C; ++c) mag += std::norm(f.at(c, kx, ky));
      sum += weight * mag;
    }
  return std::sqrt(sum * Real(f.grid.volume()));
}

/// L^2 pairing of two real fields through Parseval.
template <typename Real, int C>
Real inner_product(const BasicSpectralField<Real, C>& f, const BasicSpectralField<Real, C>& g) {
  require_same_lattice(f.grid, g.grid, "inner_product");
  Real sum = 0;
  for (int c = 0; c < C; ++c)
    sum += (f.comp[c].array() * g.comp[c].array().conjugate()).real().sum();
  return sum * Real(f.grid.volume());
}

/// Spectral gradient; output component dims*c + j is d_j of component c.
template <typename Real, int C>
BasicSpectralField<Real, 2 * C> gradient(const BasicSpectralField<Real, C>& f) {
  const int n = f.n();
  const Real scale = Real(f.grid.wavenumber_scale());
  auto out = BasicSpectralField<Real, 2 * C>::zero(f.grid);
  const std::complex<Real> i(0, 1);
  for (int kx = -n; kx <= n; ++kx)
    for (int ky = -n; ky <= n; ++ky)
      for (int c = 0; c < C; ++c) {
        out.at(2 * c, kx, ky) = i * scale * Real(kx) * f.at(c, kx, ky);
        out.at(2 * c + 1, kx, ky) = i * scale * Real(ky) * f.at(c, kx, ky);
      }
  out.is_divergence_free = false;
  return out;
}

template <typename Real>
BasicSpectralField<Real, 1> divergence(const BasicSpectralField<Real, 2>& u) {
  const int n = u.n();
  const Real scale = Real(u.grid.wavenumber_scale());
  auto out = BasicSpectralField<Real, 1>::zero(u.grid);
  const std::complex<Real> i(0, 1);
  for (int kx = -n; kx <= n; ++kx)
    for (int ky = -n; ky <= n; ++ky)
      out.at(0, kx, ky) = i * scale * (Real(kx) * u.at(0, kx, ky) + Real(ky) * u.at(1, kx, ky));
  return out;
}

/// Scalar curl d_x u_y - d_y u_x.
template <typename Real>
BasicSpectralField<Real, 1> curl(const BasicSpectralField<Real, 2>& u) {
  const int n = u.n();
  const Real scale = Real(u.grid.wavenumber_scale());
  auto out = BasicSpectralField<Real, 1>::zero(u.grid);
  const std::complex<Real> i(0, 1);
  for (int kx = -n; kx <= n; ++kx)
    for (int ky = -n; ky <= n; ++ky)
      out.at(0, kx, ky) = i * scale * (Real(kx) * u.at(1, kx, ky) - Real(ky) * u.at(0, kx, ky));
  return out;
}

/// Perpendicular gradient (-d_y psi, d_x psi); divergence-free and mean-zero exactly.
template <typename Real>
BasicSpectralField<Real, 2> perp_gradient(const BasicSpectralField<Real, 1>& psi) {
  const int n = psi.n();
  const Real scale = Real(psi.grid.wavenumber_scale());
  auto out = BasicSpectralField<Real, 2>::zero(psi.grid);
  const std::complex<Real> i(0, 1);
  for (int kx = -n; kx <= n; ++kx)
    for (int ky = -n; ky <= n; ++ky) {
      out.at(0, kx, ky) = -i * scale * Real(ky) * psi.at(0, kx, ky);
      out.at(1, kx, ky) = i * scale * Real(kx) * psi.at(0, kx, ky);
    }
  out.is_divergence_free = true;
  out.is_mean_zero = true;
  return out;
}

/// Stream function of a divergence-free field: psi = -(-Lap)^{-1} curl u.
template <typename Real>
BasicSpectralField<Real, 1> stream_function(const BasicSpectralField<Real, 2>& u) {
  auto w = curl(u);
  remove_mean(w);
  auto psi = fractional_multiplier(w, Real(-2));
  psi *= Real(-1);
  return psi;
}

}  // namespace vectormix
