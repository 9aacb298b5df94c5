#pragma once

#include <cmath>
#include <limits>
#include <memory>

#include "vectormix/spectral_field.hpp"

namespace vectormix {

/// Real 2-D FFT pair on a size x size grid, backed by FFTW.
///
/// Plans use FFTW_ESTIMATE so that results are bit-reproducible between runs.
/// An instance owns its buffers and must not be shared across threads; use
/// transform_workspace() for a per-thread cached instance.
class FourierTransform {
 public:
  explicit FourierTransform(int size);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  int size() const { return size_; }

  /// Evaluates sum_k c_k exp(2 pi i k.x / L) at the grid points.
  /// `coeffs` is a full (2n+1)^2 lattice and must satisfy 2n + 1 <= size.
  void backward(const CoeffMatrix<double>& coeffs, SampleMatrix<double>& out);

  /// Discrete Fourier coefficients for |k|_inf <= n; the result is exactly Hermitian.
  void forward(const SampleMatrix<double>& samples, int n, CoeffMatrix<double>& out);

 private:
  struct Plans;
  int size_;
  std::unique_ptr<Plans> plans_;
};

/// Thread-local cached transform for the given size.
FourierTransform& transform_workspace(int size);

/// Number of threads FFTW may use, read from VECTORMIX_THREADS (unset = 1, 0 = auto).
int transform_threads();

/// Samples of f on a pad x pad grid. Throws RepresentabilityError if pad < 2N+1.
template <int C>
BasicPhysicalField<double, C> to_physical(const BasicSpectralField<double, C>& f, int pad) {
  if (pad < 2 * f.n() + 1)
    throw RepresentabilityError("pad " + std::to_string(pad) + " cannot represent N = " +
                                std::to_string(f.n()));
  BasicPhysicalField<double, C> out;
  out.grid = f.grid;
  out.size = pad;
  auto& fft = transform_workspace(pad);
  for (int c = 0; c < C; ++c) fft.backward(f.comp[c], out.samples[c]);
  return out;
}

/// Coefficients of the samples restricted to |k|_inf <= n_cutoff.
template <int C>
BasicSpectralField<double, C> to_spectral(const BasicPhysicalField<double, C>& p, int n_cutoff) {
  if (p.size < 2 * n_cutoff + 1)
    throw RepresentabilityError("grid of size " + std::to_string(p.size) +
                                " cannot resolve N = " + std::to_string(n_cutoff));
  GridSpec g = p.grid;
  g.n_cutoff = n_cutoff;
  if (g.phys_size < 2 * n_cutoff + 1) g.phys_size = p.size;
  BasicSpectralField<double, C> out;
  out.grid = g;
  auto& fft = transform_workspace(p.size);
  for (int c = 0; c < C; ++c) fft.forward(p.samples[c], n_cutoff, out.comp[c]);
  return out;
}

template <int C>
BasicSpectralField<double, C> to_spectral(const BasicPhysicalField<double, C>& p) {
  return to_spectral(p, p.grid.n_cutoff);
}

/// Rectangle-rule L^p norm of the pointwise Euclidean magnitude; p = inf gives the grid max.
template <int C>
double lebesgue_norm(const BasicPhysicalField<double, C>& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lebesgue_norm: p must lie in [1, inf]");
  SampleMatrix<double> mag2 = SampleMatrix<double>::Zero(f.size, f.size);
  for (const auto& s : f.samples) mag2.array() += s.array().square();
  if (std::isinf(p)) return std::sqrt(mag2.maxCoeff());
  const double cell = f.spacing() * f.spacing();
  if (p == 2.0) return std::sqrt(mag2.sum() * cell);
  return std::pow(mag2.array().pow(0.5 * p).sum() * cell, 1.0 / p);
}

}  // namespace vectormix
