#include "vectormix/initial_conditions.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "vectormix/snapshot.hpp"
#include "vectormix/spectral_ops.hpp"
#include "vectormix/transform.hpp"

namespace vectormix {

double dipole_p1(double z) {
  const double w = z * (1.0 - z);
  return 256.0 * w * w * w * w;
}

double dipole_p2(double z) {
  const double w = z * (1.0 - z);
  return (8192.0 / 27.0) * w * w * w * (1.0 - 2.0 * z);
}

double dipole_stream(double x, double y) {
  const double two_pi = 2.0 * std::numbers::pi;
  return dipole_p1(x / two_pi) * dipole_p2(y / two_pi);
}

ScalarSpectralField stream_from_modes(const GridSpec& grid, const std::vector<StreamMode>& modes) {
  auto psi = ScalarSpectralField::zero(grid);
  std::vector<bool> set(std::size_t(grid.modes() * grid.modes()), false);
  const int n = grid.n_cutoff;
  auto slot = [&](int kx, int ky) { return std::size_t((kx + n) * grid.modes() + (ky + n)); };
  for (const auto& m : modes) {
    if (std::max(std::abs(m.kx), std::abs(m.ky)) > n)
      throw std::invalid_argument("stream mode (" + std::to_string(m.kx) + "," +
                                  std::to_string(m.ky) + ") outside the lattice");
    if (m.kx == 0 && m.ky == 0) {
      if (m.amplitude != 0.0) throw std::invalid_argument("stream mode k = 0 must be zero");
      continue;
    }
    const bool here = set[slot(m.kx, m.ky)], there = set[slot(-m.kx, -m.ky)];
    if (here && psi.at(0, m.kx, m.ky) != m.amplitude)
      throw std::invalid_argument("stream mode listed twice with different amplitudes");
    if (there && !here && psi.at(0, -m.kx, -m.ky) != std::conj(m.amplitude))
      throw std::invalid_argument("stream modes are not Hermitian-symmetric");
    psi.at(0, m.kx, m.ky) = m.amplitude;
    psi.at(0, -m.kx, -m.ky) = std::conj(m.amplitude);
    set[slot(m.kx, m.ky)] = set[slot(-m.kx, -m.ky)] = true;
  }
  return psi;
}

SpectralField velocity_from_stream(const ScalarSpectralField& psi) { return perp_gradient(psi); }

ScalarSpectralField dipole_stream_field(const GridSpec& grid) {
  if (std::abs(grid.side_length - 2.0 * std::numbers::pi) > 1e-12)
    throw std::invalid_argument("dipole initial data requires side_length = 2 pi");
  const int m = dipole_sampling_size(grid.n_cutoff);
  ScalarPhysicalField samples;
  samples.grid = grid;
  samples.size = m;
  std::vector<double> p1(static_cast<std::size_t>(m)), p2(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    p1[std::size_t(i)] = dipole_p1(double(i) / m);
    p2[std::size_t(i)] = dipole_p2(double(i) / m);
  }
  samples.samples[0].resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) samples.samples[0](i, j) = p1[std::size_t(i)] * p2[std::size_t(j)];
  auto psi = to_spectral(samples, grid.n_cutoff);
  psi.grid = grid;
  return psi;
}

SpectralField build_initial(const InitSpec& spec) {
  SpectralField u;
  switch (spec.kind) {
    case InitKind::Dipole:
      u = velocity_from_stream(dipole_stream_field(spec.grid));
      break;
    case InitKind::StreamModes:
      u = velocity_from_stream(stream_from_modes(spec.grid, spec.modes));
      break;
    case InitKind::Snapshot: {
      const Snapshot snap = read_snapshot(spec.path);
      if (!snap.field.grid.same_lattice(spec.grid))
        throw ShapeError("snapshot lattice (N=" + std::to_string(snap.field.n()) +
                         ") does not match the configured grid (N=" +
                         std::to_string(spec.grid.n_cutoff) + ")");
      u = snap.field;
      u.grid = spec.grid;
      remove_mean(u);
      // Stored states already satisfy the divergence invariant; keep them bit-exact.
      if (divergence_ratio(u) <= kDivergenceTolerance) {
        u.is_divergence_free = true;
        return u;
      }
      break;
    }
  }
  u = project_divfree_truncate(u, spec.grid.n_cutoff);
  remove_mean(u);
  return u;
}

SpectralField random_solenoidal_field(const GridSpec& grid, std::uint64_t seed, int k_max,
                                      double decay) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto u = SpectralField::zero(grid);
  const int kmax = std::min(k_max, grid.n_cutoff);
  for (int kx = -kmax; kx <= kmax; ++kx)
    for (int ky = -kmax; ky <= kmax; ++ky) {
      const double amp = std::pow(1.0 + kx * kx + ky * ky, -0.5 * decay);
      for (int c = 0; c < 2; ++c) u.at(c, kx, ky) = amp * std::complex<double>(normal(rng), normal(rng));
    }
  remove_mean(u);
  enforce_hermitian(u);
  u = leray_project(u);
  remove_mean(u);
  return u;
}

SpectralField cellular_flow(const GridSpec& grid, double amplitude) {
  // sin x sin y = -(1/4)(e^{i(x+y)} + e^{-i(x+y)} - e^{i(x-y)} - e^{-i(x-y)})
  const double a = 0.25 * amplitude;
  auto psi = stream_from_modes(grid, {{1, 1, -a}, {1, -1, a}});
  return velocity_from_stream(psi);
}

}  // namespace vectormix
