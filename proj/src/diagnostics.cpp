#include "vectormix/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "vectormix/spectral_ops.hpp"
#include "vectormix/transform.hpp"
#include "vectormix/transport.hpp"

namespace vectormix {

std::vector<double> NormSeries::times() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.t);
  return out;
}

std::vector<double> NormSeries::mix_norms() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.h_neg_alpha);
  return out;
}

double NormSeries::max_energy_drift() const {
  if (rows.empty() || rows.front().energy == 0.0) return 0.0;
  const double e0 = rows.front().energy;
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.energy - e0) / e0);
  return worst;
}

std::string csv_row(const NormRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.t, r.dt,
                r.h_neg_alpha, r.energy, r.grad_U_l2, r.grad_U_linf, r.decay_rate_inst);
  return buf;
}

void write_csv(std::ostream& os, const NormSeries& series) {
  os << NormSeries::csv_header << '\n';
  for (const auto& r : series.rows) os << csv_row(r) << '\n';
}

double gradient_linf(const SpectralField& U) {
  const auto g = to_physical(gradient(U), U.grid.padded_size());
  // sigma_max of [[a, b], [c, d]] = (|(a + d, c - b)| + |(a - d, b + c)|) / 2
  const auto& a = g.samples[0].array();
  const auto& b = g.samples[1].array();
  const auto& c = g.samples[2].array();
  const auto& d = g.samples[3].array();
  const Eigen::ArrayXXd conformal = ((a + d).square() + (c - b).square()).sqrt();
  const Eigen::ArrayXXd anti = ((a - d).square() + (b + c).square()).sqrt();
  return 0.5 * (conformal + anti).maxCoeff();
}

double laplacian_l3(const SpectralField& U) {
  auto lap = fractional_multiplier(U, 2.0);
  return lebesgue_norm(to_physical(lap, U.grid.padded_size()), 3.0);
}

ScalarSpectralField recover_pressure(const SpectralField& u, const SpectralField& U) {
  const SpectralField G = convective_term(u, U);
  const int n = u.n();
  const double scale = u.grid.wavenumber_scale();
  auto p = ScalarSpectralField::zero(u.grid);
  const std::complex<double> i(0.0, 1.0);
  for (int kx = -n; kx <= n; ++kx)
    for (int ky = -n; ky <= n; ++ky) {
      if (kx == 0 && ky == 0) continue;
      const double k2 = double(kx * kx + ky * ky);
      const auto dot = G.at(0, kx, ky) * double(kx) + G.at(1, kx, ky) * double(ky);
      p.at(0, kx, ky) = i * dot / (scale * k2);
    }
  return p;
}

ExponentialFit fit_exponential(const NormSeries& series, double t_lo, double t_hi) {
  std::vector<double> ts, ys;
  for (const auto& r : series.rows) {
    if (r.t < t_lo || r.t > t_hi) continue;
    if (!(r.h_neg_alpha > 0.0)) throw FitError("fit_exponential: nonpositive norm in window");
    ts.push_back(r.t);
    ys.push_back(std::log(r.h_neg_alpha));
  }
  if (ts.size() < 10) throw FitError("fit_exponential: fewer than 10 samples in window");
  const double n = double(ts.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    mt += ts[k];
    my += ys[k];
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0, spread = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    stt += (ts[k] - mt) * (ts[k] - mt);
    sty += (ts[k] - mt) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
    spread = std::max(spread, std::abs(ys[k] - my));
  }
  if (stt == 0.0) throw FitError("fit_exponential: window has a single distinct time");
  ExponentialFit fit;
  fit.samples = ts.size();
  // A response constant up to rounding in its mean counts as zero variance.
  if (spread <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(my))) {
    fit.rate = 0.0;
    fit.r_squared = 1.0;
  } else {
    fit.rate = sty / stt;
    double ssr = 0.0;
    const double icpt = my - fit.rate * mt;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double res = ys[k] - (icpt + fit.rate * ts[k]);
      ssr += res * res;
    }
    fit.r_squared = 1.0 - ssr / syy;
  }
  return fit;
}

}  // namespace vectormix
