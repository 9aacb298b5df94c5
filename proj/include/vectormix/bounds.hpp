#pragma once

// Lower bounds on the H^{-alpha} mix norm under a budget on the advecting
// field. The Sobolev-embedding constants are not computed; they enter as the
// user-supplied constant C (C_r in the critical case).

#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string_view>

namespace vectormix {

enum class Regime {
  Subcritical,    // q(1 - alpha) < d, or alpha = 1 with q finite
  Supercritical,  // q(1 - alpha) > d, or q = inf with alpha < 1
  Critical,       // q(1 - alpha) = d
  Exponential,    // q = inf and alpha = 1
};

std::string_view to_string(Regime r);

class RegimeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Classifies (q, alpha, d). Throws RegimeError for q <= 1, alpha outside
/// [1/2, 1] or d < 1.
Regime regime_select(double q, double alpha, int d);

struct BoundInput {
  double q = 2.0;
  double alpha = 1.0;
  int d = 2;
  double h_norm0 = 1.0;   ///< |u_0|_{H^-alpha}
  double l2_norm0 = 1.0;  ///< |u_0|_{L^2}
  /// |grad U|_{L^inf_t L^q_x}, or |U|_{L^inf_t W^{1,q}_x} in the supercritical case.
  double budget = 1.0;
  double C = 1.0;
  /// Free exponent of the critical case; must exceed max(2, d / alpha).
  double r = 8.0;
};

struct BoundResult {
  Regime regime = Regime::Subcritical;
  double t_min = kInfinity;
  /// The exponent e with envelope(t) = [h^e - t K l^e]_+^{1/e}; 0 for the exponential regime.
  double exponent = 0.0;
  std::function<double(double)> envelope;
};

/// Minimal mixing time and lower envelope t -> bound on |u(t)|_{H^-alpha}.
/// The exponential regime uses `budget` as a constant |grad U|_{L^inf};
/// use groenwall_envelope() for a measured series.
BoundResult tmin(const BoundInput& in);

/// h0 * exp(-integral) evaluated pointwise.
double groenwall_envelope(double h_norm0, double integral_grad_linf);

/// Smallest constant C (resp. C_r) for which the algebraic envelope of `in`
/// stays below the measured samples h(t). Returns 0 when none of the samples
/// can violate the bound.
double calibrate_constant(const BoundInput& in, std::span<const double> times,
                          std::span<const double> h_norms);

}  // namespace vectormix
