#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "vectormix/grid.hpp"

namespace vectormix {

template <typename Real>
using CoeffMatrix =
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Real>
using SampleMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Fourier coefficients of a real periodic field with `Components` components.
///
/// Each component is a (2N+1) x (2N+1) row-major matrix; entry (a, b) holds the
/// coefficient of wavevector k = (a - N, b - N). The full symmetric lattice is
/// stored, and real-valuedness is the Hermitian constraint c(-k) = conj(c(k)).
template <typename Real, int Components>
struct BasicSpectralField {
  using Scalar = std::complex<Real>;
  using Matrix = CoeffMatrix<Real>;
  static constexpr int components = Components;

  GridSpec grid;
  std::array<Matrix, Components> comp;
  bool is_divergence_free = false;
  bool is_mean_zero = false;

  static BasicSpectralField zero(const GridSpec& g) {
    BasicSpectralField f;
    f.grid = g;
    for (auto& c : f.comp) c = Matrix::Zero(g.modes(), g.modes());
    f.is_divergence_free = true;
    f.is_mean_zero = true;
    return f;
  }

  int n() const { return grid.n_cutoff; }

  Scalar& at(int c, int kx, int ky) { return comp[c](kx + n(), ky + n()); }
  const Scalar& at(int c, int kx, int ky) const { return comp[c](kx + n(), ky + n()); }

  BasicSpectralField& operator+=(const BasicSpectralField& o) {
    require_same_lattice(grid, o.grid, "operator+=");
    for (int c = 0; c < Components; ++c) comp[c] += o.comp[c];
    is_divergence_free = is_divergence_free && o.is_divergence_free;
    is_mean_zero = is_mean_zero && o.is_mean_zero;
    return *this;
  }
  BasicSpectralField& operator-=(const BasicSpectralField& o) {
    require_same_lattice(grid, o.grid, "operator-=");
    for (int c = 0; c < Components; ++c) comp[c] -= o.comp[c];
    is_divergence_free = is_divergence_free && o.is_divergence_free;
    is_mean_zero = is_mean_zero && o.is_mean_zero;
    return *this;
  }
  BasicSpectralField& operator*=(Real s) {
    for (auto& c : comp) c *= s;
    return *this;
  }
};

template <typename Real, int C>
BasicSpectralField<Real, C> operator+(BasicSpectralField<Real, C> a,
                                      const BasicSpectralField<Real, C>& b) {
  return a += b;
}
template <typename Real, int C>
BasicSpectralField<Real, C> operator-(BasicSpectralField<Real, C> a,
                                      const BasicSpectralField<Real, C>& b) {
  return a -= b;
}
template <typename Real, int C>
BasicSpectralField<Real, C> operator*(Real s, BasicSpectralField<Real, C> a) {
  return a *= s;
}

using SpectralField = BasicSpectralField<double, 2>;
using ScalarSpectralField = BasicSpectralField<double, 1>;
/// Velocity gradient; component 2*i + j holds d_j u_i.
using GradientField = BasicSpectralField<double, 4>;

/// Real samples on a size x size uniform grid; sample (i, j) sits at (iL/size, jL/size).
template <typename Real, int Components>
struct BasicPhysicalField {
  GridSpec grid;
  int size = 0;
  std::array<SampleMatrix<Real>, Components> samples;

  Real spacing() const { return static_cast<Real>(grid.side_length) / size; }
  Eigen::Index sample_count() const { return Eigen::Index(Components) * size * size; }
};

using PhysicalField = BasicPhysicalField<double, 2>;
using ScalarPhysicalField = BasicPhysicalField<double, 1>;
using PhysicalGradient = BasicPhysicalField<double, 4>;

}  // namespace vectormix
