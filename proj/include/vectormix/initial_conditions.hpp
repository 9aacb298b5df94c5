#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "vectormix/spectral_field.hpp"

namespace vectormix {

enum class InitKind { Dipole, StreamModes, Snapshot };

/// One stream-function Fourier mode; the conjugate partner at -k is implied.
struct StreamMode {
  int kx = 0;
  int ky = 0;
  std::complex<double> amplitude;
};

struct InitSpec {
  InitKind kind = InitKind::Dipole;
  GridSpec grid;
  std::vector<StreamMode> modes;  ///< StreamModes only
  std::string path;               ///< Snapshot only
};

/// 256 z^4 (1 - z)^4
double dipole_p1(double z);
/// (8192 / 27) z^3 (1 - z)^3 (1 - 2 z)
double dipole_p2(double z);
/// p1(x / 2pi) p2(y / 2pi) on [0, 2pi)^2.
double dipole_stream(double x, double y);

/// Sampling size used to project the (non band-limited) dipole onto N modes.
inline int dipole_sampling_size(int n_cutoff) { return std::max(4 * n_cutoff, 512); }

/// Scalar field with the given stream modes and their conjugate partners.
/// Throws std::invalid_argument on out-of-lattice modes, a nonzero k = 0
/// amplitude, or an explicitly listed partner that is not the conjugate.
ScalarSpectralField stream_from_modes(const GridSpec& grid, const std::vector<StreamMode>& modes);

/// u = (-d_y psi, d_x psi). The mean of psi is ignored.
SpectralField velocity_from_stream(const ScalarSpectralField& psi);

/// Dipole stream function projected onto the lattice of `grid` (requires L = 2pi).
ScalarSpectralField dipole_stream_field(const GridSpec& grid);

/// Initial datum P_N u_0: mean-zero, divergence-free, Hermitian.
/// Snapshot input keeps its coefficients apart from removing any mean.
SpectralField build_initial(const InitSpec& spec);

/// Random divergence-free, mean-zero field with modes |k|_inf <= k_max and
/// amplitudes decaying like (1 + |k|^2)^{-decay/2}. Deterministic in `seed`.
SpectralField random_solenoidal_field(const GridSpec& grid, std::uint64_t seed, int k_max,
                                      double decay = 2.0);

/// Steady cellular flow perp-grad(sin(2pi x/L) sin(2pi y/L)) times `amplitude`.
SpectralField cellular_flow(const GridSpec& grid, double amplitude = 1.0);

}  // namespace vectormix
