#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "vectormix/spectral_field.hpp"

namespace vectormix {

/// One output time of a run. The first seven members are the CSV columns.
struct NormRow {
  double t = 0.0;
  double dt = 0.0;
  double h_neg_alpha = 0.0;
  double energy = 0.0;
  double grad_U_l2 = 0.0;
  double grad_U_linf = 0.0;
  double decay_rate_inst = 0.0;

  /// Trapezoid quadrature over accepted steps of |grad U|_{L^inf}.
  double int_grad_U_linf = 0.0;
  /// Trapezoid quadrature of |Lap U|_{L^3} + |grad U|_{L^inf}.
  double int_h2_growth = 0.0;
  /// (|U|_{L^2}^2 + |grad U|_{L^2}^2)^{1/2}
  double U_w12 = 0.0;
  double grad_u_l2 = 0.0;
  double hess_u_l2 = 0.0;
  double divergence_ratio = 0.0;
};

struct NormSeries {
  double alpha = 1.0;
  std::vector<NormRow> rows;

  static constexpr const char* csv_header =
      "t,dt,h_neg_alpha,energy,gradU_l2,gradU_linf,decay_rate_inst";

  std::vector<double> times() const;
  std::vector<double> mix_norms() const;
  /// Largest |E(t) - E(0)| / E(0); 0 for an empty or zero-energy series.
  double max_energy_drift() const;
};

/// One CSV line (no newline) with round-trip precision.
std::string csv_row(const NormRow& row);
void write_csv(std::ostream& os, const NormSeries& series);

/// Grid maximum over the 3/2-padded grid of the spectral norm of grad U.
double gradient_linf(const SpectralField& U);

/// |Lap U|_{L^3} by rectangle quadrature on the 3/2-padded grid.
double laplacian_l3(const SpectralField& U);

/// Pressure p solving grad p + (I - P)((U . grad) u) = 0, with zero mean.
ScalarSpectralField recover_pressure(const SpectralField& u, const SpectralField& U);

struct ExponentialFit {
  double rate = 0.0;
  double r_squared = 0.0;
  std::size_t samples = 0;
};

class FitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Least-squares line through (t, log h) for rows with t in [t_lo, t_hi].
/// A response with zero variance reports R^2 = 1.
ExponentialFit fit_exponential(const NormSeries& series, double t_lo, double t_hi);

}  // namespace vectormix
