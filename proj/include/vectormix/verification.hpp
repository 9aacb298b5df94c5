#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "vectormix/bounds.hpp"
#include "vectormix/simulation.hpp"

namespace vectormix {

/// Outcome of one check. `metrics` are the measured margins.
struct CheckReport {
  std::string check;
  bool passed = false;
  std::string message;
  std::vector<std::pair<std::string, double>> metrics;

  double metric(const std::string& name) const;
  /// One JSON object, no trailing newline.
  std::string json() const;
};

/// Relative energy drift of a run must stay within `tol` (10 rtol by default).
CheckReport check_energy(const NormSeries& run, double tol);

/// Divergence ratio of the state at every row must stay within `tol`.
CheckReport check_divergence(const NormSeries& run, double tol);

/// Order 1: |grad u(t)| <= |grad u0| exp(int |grad U|_inf).
/// Order 2: |grad^2 u(t)| <= |grad^2 u0| exp(int |Lap U|_3 + |grad U|_inf).
/// Both in L^2, with multiplicative slack (1 + slack).
CheckReport check_sobolev_growth(const NormSeries& run, int order, double slack = 0.05);

/// |u(t)|_{H^-1} >= |u0|_{H^-1} exp(-int |grad U|_inf) (1 - slack) at every row.
CheckReport check_groenwall_envelope(const NormSeries& run, double slack = 0.05);

/// Evolves u0 and v0 under the same provider (which must not depend on the
/// state) and checks |u - v|_{L^2} stays constant to `tol` relative.
CheckReport check_stability(const SimConfig& cfg, const SpectralField& u0, const SpectralField& v0,
                            const VelocityProvider& provider, double tol);

/// Initial datum and advecting field for one resolution.
struct ConvergenceCase {
  std::function<SpectralField(const GridSpec&)> initial;
  std::function<VelocityProvider(const GridSpec&)> provider;
};

/// Self-convergence against a run at n_ref: e(N) = |u_ref(T) - u_N(T)|_{L^2}
/// must at least halve at each doubling of N.
CheckReport check_convergence(const SimConfig& cfg, const ConvergenceCase& cc, const std::vector<int>& levels,
                              int n_ref);

/// U = (c, 0), u0 = (0, sin x): the exact solution is (0, sin(x - c t)).
CheckReport check_translation(int n_cutoff, double c, double t_end, double rtol, double tol);

/// Centered difference of (1/2)|u|^2_{H^-alpha} along the frozen optimal field
/// against -decay_rate, plus the unit-seminorm normalisation.
CheckReport check_optimizer_identity(const SpectralField& u, double alpha, double delta, double rel_tol,
                                     double norm_tol);

/// u = (0, sin x) has a pure-gradient drive field; the optimizer must flag it.
CheckReport check_degenerate(int n_cutoff, double alpha);

/// Sign and position of the discrete local extrema of the stream function of U
/// on a cells x cells box-averaged scan.
struct StreamExtremum {
  int i, j;  // cell indices along x, y
  double value;
  bool maximum;
};
std::vector<StreamExtremum> scan_stream_extrema(const SpectralField& U, int cells);

/// The optimal field of u has four extrema of alternating sign on an 8 x 8 scan.
CheckReport check_four_cells(const SpectralField& u, double alpha);

/// Unity-parameter minimal mixing times and the envelope's endpoint behaviour.
CheckReport check_bounds_unity();

/// Least-squares exponential fit of the mix norm over [t_lo, t_hi].
CheckReport check_exponential_fit(const NormSeries& run, double t_lo, double t_hi, double min_r2);

/// Run parameters of the `verify` suites.
struct VerifyParams {
  int n_cutoff = 64;
  double t_end = 5.0;
  double growth_t_end = 2.0;
  double rtol = 1e-8;
  std::vector<int> levels{16, 32, 64};
  int n_ref = 256;
  double converge_t_end = 1.0;
};

/// Runs one named suite ("energy", "growth", "stability", "converge",
/// "groenwall" or "all"). Throws std::invalid_argument on an unknown name.
std::vector<CheckReport> run_suite(const std::string& suite, const VerifyParams& params);

/// Dipole datum with the optimal provider at alpha, as used by the suites.
SimConfig dipole_config(int n_cutoff, double alpha, double t_end, double rtol);

}  // namespace vectormix
