#include "vectormix/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vectormix {

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Subcritical: return "subcritical";
    case Regime::Supercritical: return "supercritical";
    case Regime::Critical: return "critical";
    case Regime::Exponential: return "exponential";
  }
  return "unknown";
}

Regime regime_select(double q, double alpha, int d) {
  if (!(q > 1.0)) throw RegimeError("q must lie in (1, inf]");
  if (!(alpha >= 0.5 && alpha <= 1.0)) throw RegimeError("alpha must lie in [1/2, 1]");
  if (d < 1) throw RegimeError("dimension must be positive");
  if (std::isinf(q)) return alpha == 1.0 ? Regime::Exponential : Regime::Supercritical;
  if (alpha == 1.0) return Regime::Subcritical;
  const double lhs = q * (1.0 - alpha);
  if (lhs < d) return Regime::Subcritical;
  if (lhs > d) return Regime::Supercritical;
  return Regime::Critical;
}

namespace {

struct AlgebraicForm {
  double exponent;  // e
  double rate;      // K, so that h(t)^e >= h0^e - t K C B l^e
};

AlgebraicForm algebraic_form(const BoundInput& in, Regime regime) {
  const double a = in.alpha, d = in.d;
  switch (regime) {
    case Regime::Subcritical:
      return {d / (a * in.q), 1.0 / a};
    case Regime::Supercritical: {
      if (a == 1.0) throw RegimeError("supercritical bound needs alpha < 1");
      const double e = (1.0 - a) / a;
      return {e, e};
    }
    case Regime::Critical: {
      if (a == 1.0) throw RegimeError("critical bound needs alpha < 1");
      if (!(in.r > std::max(2.0, d / a)))
        throw RegimeError("critical bound needs r > max(2, d / alpha)");
      const double e = (1.0 - a) / a + d / (a * in.r);
      return {e, e};
    }
    case Regime::Exponential: break;
  }
  throw RegimeError("no algebraic form for the exponential regime");
}

void check_input(const BoundInput& in) {
  if (!(in.h_norm0 > 0.0) || !(in.l2_norm0 > 0.0) || !(in.budget > 0.0))
    throw RegimeError("norms and budget must be positive");
  if (!(in.C > 0.0)) throw RegimeError("constant C must be positive");
}

}  // namespace

double groenwall_envelope(double h_norm0, double integral_grad_linf) {
  return h_norm0 * std::exp(-integral_grad_linf);
}

BoundResult tmin(const BoundInput& in) {
  check_input(in);
  BoundResult out;
  out.regime = regime_select(in.q, in.alpha, in.d);
  if (out.regime == Regime::Exponential) {
    out.t_min = kInfinity;
    out.exponent = 0.0;
    out.envelope = [h = in.h_norm0, g = in.budget](double t) {
      return groenwall_envelope(h, g * std::max(t, 0.0));
    };
    return out;
  }
  const auto form = algebraic_form(in, out.regime);
  const double e = form.exponent;
  const double he = std::pow(in.h_norm0, e);
  const double slope = form.rate * in.C * in.budget * std::pow(in.l2_norm0, e);
  out.exponent = e;
  out.t_min = he / slope;
  out.envelope = [he, slope, e, h0 = in.h_norm0](double t) {
    if (t <= 0.0) return h0;
    const double bracket = he - t * slope;
    return bracket > 0.0 ? std::pow(bracket, 1.0 / e) : 0.0;
  };
  return out;
}

double calibrate_constant(const BoundInput& in, std::span<const double> times,
                          std::span<const double> h_norms) {
  check_input(in);
  if (times.size() != h_norms.size()) throw std::invalid_argument("series length mismatch");
  const Regime regime = regime_select(in.q, in.alpha, in.d);
  const auto form = algebraic_form(in, regime);
  const double e = form.exponent;
  const double he = std::pow(in.h_norm0, e);
  const double per_unit = form.rate * in.budget * std::pow(in.l2_norm0, e);
  double c_min = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) continue;
    const double drop = he - std::pow(std::max(h_norms[i], 0.0), e);
    c_min = std::max(c_min, drop / (times[i] * per_unit));
  }
  return c_min;
}

}  // namespace vectormix
