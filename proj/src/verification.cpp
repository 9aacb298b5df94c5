#include "vectormix/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "vectormix/optimal_mixer.hpp"
#include "vectormix/spectral_ops.hpp"
#include "vectormix/transform.hpp"

namespace vectormix {

double CheckReport::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics)
    if (k == name) return v;
  throw std::out_of_range("no metric '" + name + "' in " + check);
}

std::string CheckReport::json() const {
  nlohmann::ordered_json j;
  j["check"] = check;
  j["passed"] = passed;
  j["message"] = message;
  auto& m = j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metrics) {
    if (std::isfinite(v))
      m[k] = v;
    else
      m[k] = nullptr;
  }
  return j.dump();
}

namespace {

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

CheckReport empty_run(const char* name) {
  return {name, false, "run has no rows", {}};
}

// States at every output time of a run.
struct Trajectory {
  std::vector<double> t;
  std::vector<SpectralField> u;
};

Trajectory record(const SimConfig& cfg, const SpectralField& u0, const VelocityProvider& provider) {
  Trajectory tr;
  EvolveSinks sinks;
  sinks.row = [&tr](const NormRow&, const SimState& s, const SpectralField&) {
    tr.t.push_back(s.t);
    tr.u.push_back(s.u);
  };
  evolve(cfg, u0, provider, sinks);
  return tr;
}

SpectralField final_state(const SimConfig& cfg, const SpectralField& u0, const VelocityProvider& provider) {
  SpectralField last;
  EvolveSinks sinks;
  sinks.row = [&last](const NormRow&, const SimState& s, const SpectralField&) { last = s.u; };
  evolve(cfg, u0, provider, sinks);
  return last;
}

}  // namespace

CheckReport check_energy(const NormSeries& run, double tol) {
  if (run.rows.empty()) return empty_run("energy");
  const double e0 = run.rows.front().energy;
  double worst = 0.0, t_worst = run.rows.front().t;
  for (const auto& r : run.rows) {
    const double d = e0 > 0.0 ? std::abs(r.energy - e0) / e0 : std::abs(r.energy);
    if (d > worst) {
      worst = d;
      t_worst = r.t;
    }
  }
  CheckReport rep{"energy", worst <= tol, "", {{"max_drift", worst}, {"t_max_drift", t_worst}, {"tol", tol}}};
  rep.message = format("max relative drift %.3e at t=%.6g", worst, t_worst);
  return rep;
}

CheckReport check_divergence(const NormSeries& run, double tol) {
  if (run.rows.empty()) return empty_run("divergence");
  double worst = 0.0, t_worst = 0.0;
  for (const auto& r : run.rows)
    if (r.divergence_ratio >= worst) {
      worst = r.divergence_ratio;
      t_worst = r.t;
    }
  CheckReport rep{"divergence", worst <= tol, "", {{"max_ratio", worst}, {"t_max_ratio", t_worst}, {"tol", tol}}};
  rep.message = format("max |k.u_k|/max|u_k| = %.3e at t=%.6g", worst, t_worst);
  return rep;
}

CheckReport check_sobolev_growth(const NormSeries& run, int order, double slack) {
  if (order != 1 && order != 2) throw std::invalid_argument("growth order must be 1 or 2");
  const std::string name = order == 1 ? "sobolev_growth_1" : "sobolev_growth_2";
  if (run.rows.empty()) return empty_run(name.c_str());
  const auto& r0 = run.rows.front();
  const double base = order == 1 ? r0.grad_u_l2 : r0.hess_u_l2;
  double worst = 0.0, t_worst = 0.0;
  for (const auto& r : run.rows) {
    const double lhs = order == 1 ? r.grad_u_l2 : r.hess_u_l2;
    const double rhs = base * std::exp(order == 1 ? r.int_grad_U_linf : r.int_h2_growth);
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? kInfinity : 0.0);
    if (ratio >= worst) {
      worst = ratio;
      t_worst = r.t;
    }
  }
  const auto& rn = run.rows.back();
  const double final_ratio = (order == 1 ? rn.grad_u_l2 : rn.hess_u_l2) /
                             (base * std::exp(order == 1 ? rn.int_grad_U_linf : rn.int_h2_growth));
  CheckReport rep{name, worst <= 1.0 + slack, "",
                  {{"worst_ratio", worst}, {"t_worst", t_worst}, {"final_ratio", final_ratio}, {"slack", slack}}};
  rep.message = format("worst lhs/rhs = %.6f at t=%.6g", worst, t_worst) +
                format(", final %.6f at t=%.6g", final_ratio, rn.t);
  return rep;
}

CheckReport check_groenwall_envelope(const NormSeries& run, double slack) {
  if (run.rows.empty()) return empty_run("groenwall");
  const double h0 = run.rows.front().h_neg_alpha;
  double worst = kInfinity, t_worst = 0.0;
  for (const auto& r : run.rows) {
    const double env = groenwall_envelope(h0, r.int_grad_U_linf);
    const double ratio = env > 0.0 ? r.h_neg_alpha / env : kInfinity;
    if (ratio <= worst) {
      worst = ratio;
      t_worst = r.t;
    }
  }
  const auto& rn = run.rows.back();
  const double final_ratio = rn.h_neg_alpha / groenwall_envelope(h0, rn.int_grad_U_linf);
  CheckReport rep{"groenwall", worst >= 1.0 - slack, "",
                  {{"min_ratio", worst}, {"t_min_ratio", t_worst}, {"final_ratio", final_ratio}, {"slack", slack}}};
  rep.message = format("min h/envelope = %.6f at t=%.6g", worst, t_worst) +
                format(", final %.6f at t=%.6g", final_ratio, rn.t);
  return rep;
}

CheckReport check_stability(const SimConfig& cfg, const SpectralField& u0, const SpectralField& v0,
                            const VelocityProvider& provider, double tol) {
  const Trajectory a = record(cfg, u0, provider);
  const Trajectory b = record(cfg, v0, provider);
  if (a.t != b.t) return {"stability", false, "runs produced different output times", {}};
  const double d0 = sobolev_norm(a.u.front() - b.u.front(), 0.0);
  double worst = 0.0, t_worst = 0.0;
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    const double d = sobolev_norm(a.u[i] - b.u[i], 0.0);
    const double rel = d0 > 0.0 ? std::abs(d - d0) / d0 : d;
    if (rel >= worst) {
      worst = rel;
      t_worst = a.t[i];
    }
  }
  CheckReport rep{"stability", worst <= tol, "",
                  {{"initial_distance", d0}, {"max_rel_change", worst}, {"t_worst", t_worst}, {"tol", tol}}};
  rep.message = format("|u-v| changes by at most %.3e relative (t=%.6g)", worst, t_worst);
  return rep;
}

CheckReport check_convergence(const SimConfig& cfg, const ConvergenceCase& cc, const std::vector<int>& levels,
                              int n_ref) {
  if (levels.empty()) throw std::invalid_argument("no convergence levels");
  if (!std::is_sorted(levels.begin(), levels.end()) || n_ref < 2 * levels.back())
    throw std::invalid_argument("levels must increase and n_ref must be at least twice the finest level");
  auto run_at = [&](int n) {
    SimConfig c = cfg;
    c.n_cutoff = n;
    const GridSpec g = c.grid();
    return final_state(c, cc.initial(g), cc.provider(g));
  };
  const SpectralField ref = run_at(n_ref);
  CheckReport rep{"convergence", true, "", {}};
  std::vector<double> errors;
  for (int n : levels) {
    const double e = sobolev_norm(ref - resize_lattice(run_at(n), n_ref), 0.0);
    errors.push_back(e);
    rep.metrics.emplace_back("e_N" + std::to_string(n), e);
  }
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const double order = std::log(errors[i - 1] / errors[i]) / std::log(double(levels[i]) / levels[i - 1]);
    rep.metrics.emplace_back("order_N" + std::to_string(levels[i]), order);
    const bool halves = levels[i] == 2 * levels[i - 1] ? errors[i] <= 0.5 * errors[i - 1] : errors[i] < errors[i - 1];
    rep.passed = rep.passed && halves;
  }
  std::string msg = "e(N) =";
  for (double e : errors) msg += format(" %.3e", e);
  rep.message = msg;
  return rep;
}

CheckReport check_translation(int n_cutoff, double c, double t_end, double rtol, double tol) {
  SimConfig cfg;
  cfg.alpha = 1.0;
  cfg.n_cutoff = n_cutoff;
  cfg.t_end = t_end;
  cfg.rtol = rtol;
  cfg.atol = rtol * 1e-2;
  cfg.output_interval = t_end;
  const GridSpec g = cfg.grid();

  SpectralField u0 = SpectralField::zero(g);
  u0.at(1, 1, 0) = {0.0, -0.5};
  u0.at(1, -1, 0) = {0.0, 0.5};
  SpectralField U = SpectralField::zero(g);
  U.at(0, 0, 0) = c;

  const SpectralField u = final_state(cfg, u0, constant_velocity(U));
  // sin(x - ct) = Im e^{i(x - ct)}
  SpectralField exact = SpectralField::zero(g);
  const std::complex<double> phase = std::polar(1.0, -c * t_end);
  exact.at(1, 1, 0) = std::complex<double>(0.0, -0.5) * phase;
  exact.at(1, -1, 0) = std::conj(exact.at(1, 1, 0));
  const double err = sobolev_norm(u - exact, 0.0);
  CheckReport rep{"translation", err <= tol, "", {{"l2_error", err}, {"tol", tol}}};
  rep.message = format("L2 error against sin(x - ct) = %.3e", err);
  return rep;
}

CheckReport check_optimizer_identity(const SpectralField& u, double alpha, double delta, double rel_tol,
                                     double norm_tol) {
  const OptimalUResult opt = optimal_velocity(u, alpha);
  if (opt.degenerate) return {"optimizer_identity", false, "initial state is degenerate", {}};
  const double identity = instantaneous_decay_identity(u, alpha);

  StepControl ctrl;
  ctrl.dt_init = delta;
  ctrl.dt_max = delta;
  ctrl.rtol = 1e-13;
  ctrl.atol = 1e-16;
  auto advance = [&](const SpectralField& U) {
    SimState s{0.0, u, 0.0, delta};
    return rk45_step(s, constant_velocity(U), ctrl, delta).u;
  };
  const SpectralField fwd = advance(opt.U);
  const SpectralField bwd = advance(-1.0 * opt.U);
  const double hp = sobolev_norm(fwd, -alpha), hm = sobolev_norm(bwd, -alpha);
  const double fd = (0.5 * hp * hp - 0.5 * hm * hm) / (2.0 * delta);
  const double rel = std::abs(fd - identity) / std::abs(identity);
  const double seminorm = sobolev_norm(opt.U, 1.0);
  const double norm_err = std::abs(seminorm - 1.0);
  CheckReport rep{"optimizer_identity", rel <= rel_tol && norm_err <= norm_tol, "",
                  {{"identity", identity},
                   {"finite_difference", fd},
                   {"rel_error", rel},
                   {"grad_U_l2", seminorm},
                   {"norm_error", norm_err}}};
  rep.message = format("rate %.12g vs FD rel error %.3e", identity, rel) + format(", |grad U| - 1 = %.3e", norm_err);
  return rep;
}

CheckReport check_degenerate(int n_cutoff, double alpha) {
  const GridSpec g = GridSpec::with_cutoff(n_cutoff);
  SpectralField u = SpectralField::zero(g);
  u.at(1, 1, 0) = {0.0, -0.5};
  u.at(1, -1, 0) = {0.0, 0.5};
  const SpectralField pf = leray_project(drive_field(u, alpha));
  const double pf_max = max_coefficient(pf);
  const OptimalUResult opt = optimal_velocity(u, alpha);
  const double u_max = max_coefficient(opt.U);
  CheckReport rep{"degenerate", opt.degenerate && u_max == 0.0 && opt.decay_rate <= kDegeneracyThreshold,
                  "",
                  {{"max_PF", pf_max}, {"decay_rate", opt.decay_rate}, {"max_U", u_max}}};
  rep.message = std::string(opt.degenerate ? "flagged degenerate" : "NOT flagged degenerate") +
                format(", max|PF_k| = %.3e", pf_max);
  return rep;
}

std::vector<StreamExtremum> scan_stream_extrema(const SpectralField& U, int cells) {
  const auto psi = to_physical(stream_function(U), U.grid.padded_size());
  const int m = psi.size;
  std::vector<double> box(std::size_t(cells) * cells, 0.0);
  std::vector<int> count(box.size(), 0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const int i = a * cells / m, j = b * cells / m;
      box[std::size_t(i) * cells + j] += psi.samples[0](a, b);
      ++count[std::size_t(i) * cells + j];
    }
  for (std::size_t c = 0; c < box.size(); ++c) box[c] /= count[c];

  auto at = [&](int i, int j) {
    i = ((i % cells) + cells) % cells;
    j = ((j % cells) + cells) % cells;
    return box[std::size_t(i) * cells + j];
  };
  std::vector<StreamExtremum> out;
  for (int i = 0; i < cells; ++i)
    for (int j = 0; j < cells; ++j) {
      const double v = at(i, j);
      bool is_max = true, is_min = true;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const double w = at(i + di, j + dj);
          is_max = is_max && v > w;
          is_min = is_min && v < w;
        }
      if (is_max || is_min) out.push_back({i, j, v, is_max});
    }
  return out;
}

CheckReport check_four_cells(const SpectralField& u, double alpha) {
  constexpr int kCells = 8;
  const OptimalUResult opt = optimal_velocity(u, alpha);
  const auto ext = scan_stream_extrema(opt.U, kCells);
  // Each extremum's nearest neighbour among the others has the opposite sign.
  bool alternating = ext.size() == 4;
  for (std::size_t a = 0; a < ext.size() && alternating; ++a) {
    double best = kInfinity;
    bool opposite = false;
    for (std::size_t b = 0; b < ext.size(); ++b) {
      if (a == b) continue;
      auto wrap = [](int d) { return std::min(std::abs(d), kCells - std::abs(d)); };
      const double dist = std::hypot(wrap(ext[a].i - ext[b].i), wrap(ext[a].j - ext[b].j));
      if (dist < best) {
        best = dist;
        opposite = (ext[a].value > 0.0) != (ext[b].value > 0.0) && ext[a].maximum != ext[b].maximum;
      } else if (dist == best) {
        opposite = opposite && (ext[a].value > 0.0) != (ext[b].value > 0.0);
      }
    }
    alternating = opposite && (ext[a].maximum == (ext[a].value > 0.0));
  }
  CheckReport rep{"four_cells", alternating, "", {{"extrema", double(ext.size())}}};
  rep.message = std::to_string(ext.size()) + " extrema on an 8x8 scan:";
  for (const auto& e : ext) {
    char buf[96];
    std::snprintf(buf, sizeof buf, " (%d,%d)%s%.3g", e.i, e.j, e.maximum ? "max" : "min", e.value);
    rep.message += buf;
  }
  return rep;
}

CheckReport check_bounds_unity() {
  CheckReport rep{"bounds_unity", true, "", {}};
  auto expect = [&](const char* name, const BoundInput& in, Regime regime, double t_expected) {
    const BoundResult r = tmin(in);
    const bool ok = r.regime == regime && r.t_min == t_expected && r.envelope(0.0) == in.h_norm0 &&
                    r.envelope(r.t_min) == 0.0 && r.envelope(2.0 * r.t_min) == 0.0 &&
                    r.envelope(0.5 * r.t_min) > 0.0 && r.envelope(0.5 * r.t_min) < in.h_norm0;
    rep.metrics.emplace_back(std::string("t_min_") + name, r.t_min);
    rep.passed = rep.passed && ok;
    if (!ok) rep.message += std::string(name) + " mismatch; ";
  };
  BoundInput sub;
  sub.q = 2.0;
  sub.alpha = 1.0;
  sub.d = 2;
  expect("subcritical", sub, Regime::Subcritical, 1.0);
  BoundInput sup = sub;
  sup.q = kInfinity;
  sup.alpha = 0.5;
  expect("supercritical", sup, Regime::Supercritical, 1.0);
  BoundInput crit = sub;
  crit.q = 4.0;
  crit.alpha = 0.5;
  crit.r = 8.0;
  expect("critical", crit, Regime::Critical, 2.0 / 3.0);

  BoundInput expo = sub;
  expo.q = kInfinity;
  expo.budget = 0.7;
  const BoundResult e = tmin(expo);
  const bool exp_ok = e.regime == Regime::Exponential && std::isinf(e.t_min) && e.envelope(0.0) == 1.0 &&
                      std::abs(e.envelope(2.0) - std::exp(-1.4)) <= 1e-15;
  rep.passed = rep.passed && exp_ok;
  if (!exp_ok) rep.message += "exponential mismatch; ";
  if (rep.message.empty()) rep.message = "subcritical 1, supercritical 1, critical 2/3, exponential inf";
  return rep;
}

CheckReport check_exponential_fit(const NormSeries& run, double t_lo, double t_hi, double min_r2) {
  const std::string name = "exponential_fit_alpha_" + format("%g", run.alpha);
  try {
    const ExponentialFit fit = fit_exponential(run, t_lo, t_hi);
    CheckReport rep{name, fit.rate < 0.0 && fit.r_squared >= min_r2, "",
                    {{"rate", fit.rate}, {"r_squared", fit.r_squared}, {"samples", double(fit.samples)}}};
    rep.message = format("rate %.6f, R^2 %.6f", fit.rate, fit.r_squared);
    return rep;
  } catch (const FitError& e) {
    return {name, false, e.what(), {}};
  }
}

SimConfig dipole_config(int n_cutoff, double alpha, double t_end, double rtol) {
  SimConfig cfg;
  cfg.alpha = alpha;
  cfg.n_cutoff = n_cutoff;
  cfg.t_end = t_end;
  cfg.rtol = rtol;
  cfg.atol = rtol * 1e-2;
  cfg.init.kind = InitKind::Dipole;
  cfg.init.grid = cfg.grid();
  cfg.u_provider.kind = ProviderKind::Optimal;
  return cfg;
}

std::vector<CheckReport> run_suite(const std::string& suite, const VerifyParams& p) {
  static const std::vector<std::string> kSuites{"energy", "growth", "stability", "converge", "groenwall"};
  if (suite == "all") {
    std::vector<CheckReport> all;
    for (const auto& s : kSuites)
      for (auto& r : run_suite(s, p)) all.push_back(std::move(r));
    return all;
  }
  if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end())
    throw std::invalid_argument("unknown suite '" + suite + "'");

  const double tol = 10.0 * p.rtol;
  auto cellular = [](const GridSpec& g) { return constant_velocity(cellular_flow(g)); };

  if (suite == "energy" || suite == "groenwall") {
    const SimConfig cfg = dipole_config(p.n_cutoff, 1.0, p.t_end, p.rtol);
    const NormSeries run = evolve(cfg, make_provider(cfg));
    if (suite == "groenwall") return {check_groenwall_envelope(run)};
    return {check_energy(run, tol), check_divergence(run, 1e-11)};
  }
  if (suite == "growth") {
    SimConfig cfg = dipole_config(p.n_cutoff, 1.0, p.growth_t_end, p.rtol);
    const GridSpec g = cfg.grid();
    const NormSeries run = evolve(cfg, build_initial(cfg.init), cellular(g));
    return {check_sobolev_growth(run, 1), check_sobolev_growth(run, 2)};
  }
  if (suite == "stability") {
    SimConfig cfg = dipole_config(p.n_cutoff, 1.0, p.growth_t_end, p.rtol);
    const GridSpec g = cfg.grid();
    const int k_max = std::max(1, std::min(8, p.n_cutoff));
    return {check_stability(cfg, random_solenoidal_field(g, 1, k_max), random_solenoidal_field(g, 2, k_max),
                            cellular(g), tol)};
  }
  // converge
  SimConfig cfg = dipole_config(p.levels.front(), 1.0, p.converge_t_end, p.rtol);
  ConvergenceCase cc;
  cc.initial = [](const GridSpec& g) {
    InitSpec s;
    s.kind = InitKind::Dipole;
    s.grid = g;
    return build_initial(s);
  };
  cc.provider = cellular;
  return {check_convergence(cfg, cc, p.levels, p.n_ref), check_translation(16, 1.0, 1.0, 1e-10, 1e-8)};
}

}  // namespace vectormix
