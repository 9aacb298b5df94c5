#include "vectormix/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vectormix/bounds.hpp"
#include "vectormix/optimal_mixer.hpp"
#include "vectormix/simulation.hpp"
#include "vectormix/snapshot.hpp"
#include "vectormix/spectral_ops.hpp"
#include "vectormix/verification.hpp"

namespace vectormix {

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kNumerical = 2;

void print_kv(const char* key, double v) { std::printf("%s=%.17g\n", key, v); }

double parse_real(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw std::invalid_argument(std::string("bad value for ") + what + ": " + s);
  return v;
}

int report_run(const NormSeries& series) {
  if (series.rows.empty()) return kOk;
  const auto& last = series.rows.back();
  print_kv("t", last.t);
  print_kv("h_neg_alpha", last.h_neg_alpha);
  print_kv("energy_drift", series.max_energy_drift());
  return kOk;
}

int simulate(const fs::path& config_path) {
  const SimConfig cfg = load_config(config_path);
  OutputWriter out{cfg, config_path, {}, 0};
  fs::create_directories(cfg.out_dir);
  try {
    const NormSeries series = evolve(cfg, make_provider(cfg), out.sinks());
    out.flush_csv();
    return report_run(series);
  } catch (const EvolveError&) {
    out.flush_csv();
    throw;
  }
}

int resume(const fs::path& sidecar) {
  const Checkpoint ck = read_checkpoint(sidecar);
  const SimConfig cfg = load_config(ck.config_path);
  if (cfg.hash() != ck.config_hash) {
    std::fprintf(stderr, "error: config %s no longer matches the checkpoint (hash mismatch)\n",
                 ck.config_path.c_str());
    return kInvalid;
  }
  OutputWriter out{cfg, ck.config_path, {}, ck.snapshot_index};
  const fs::path csv = fs::path(cfg.out_dir) / "series.csv";
  out.rows = read_csv_rows(csv);
  if (out.rows.size() < ck.rows) throw std::runtime_error(csv.string() + " has fewer rows than the checkpoint");
  out.rows.resize(ck.rows);

  RunPoint start = ck.point;
  start.state.u.grid = cfg.grid();
  require_same_lattice(ck.point.state.u.grid, cfg.grid(), "checkpoint state");
  try {
    evolve_from(cfg, start, make_provider(cfg), out.sinks(), false);
    out.flush_csv();
  } catch (const EvolveError&) {
    out.flush_csv();
    throw;
  }
  NormSeries series;
  series.rows = out.rows;
  return report_run(series);
}

int bounds(const std::string& q_text, double alpha, int d, double h, double l, double budget, double c,
           double r) {
  BoundInput in;
  in.q = parse_real(q_text, "--q");
  in.alpha = alpha;
  in.d = d;
  in.h_norm0 = h;
  in.l2_norm0 = l;
  in.budget = budget;
  in.C = c;
  in.r = r;
  const BoundResult res = tmin(in);
  std::printf("regime=%s\n", std::string(to_string(res.regime)).c_str());
  print_kv("t_min", res.t_min);
  print_kv("exponent", res.exponent);
  return kOk;
}

int optimal_field(const fs::path& in, double alpha, const fs::path& out) {
  const Snapshot s = read_snapshot(in);
  SpectralField u = s.field;
  remove_mean(u);
  const OptimalUResult res = optimal_velocity(u, alpha);
  write_snapshot(out, {res.U, s.t, alpha});
  print_kv("decay_rate", res.decay_rate);
  print_kv("grad_U_l2", sobolev_norm(res.U, 1.0));
  print_kv("U_w12", std::hypot(sobolev_norm(res.U, 0.0), sobolev_norm(res.U, 1.0)));
  std::printf("degenerate=%d\n", res.degenerate ? 1 : 0);
  return kOk;
}

int pressure(const fs::path& in_u, const fs::path& in_U, const fs::path& out) {
  const Snapshot su = read_snapshot(in_u);
  const Snapshot sU = read_snapshot(in_U);
  require_same_lattice(su.field.grid, sU.field.grid, "pressure inputs");
  if (su.t != sU.t) throw std::invalid_argument("u and U snapshots are at different times");
  write_snapshot(out, {scalar_as_snapshot_field(recover_pressure(su.field, sU.field)), su.t, su.alpha});
  return kOk;
}

int verify(const std::string& suite, const VerifyParams& params) {
  bool ok = true;
  for (const auto& rep : run_suite(suite, params)) {
    std::printf("%s\n", rep.json().c_str());
    ok = ok && rep.passed;
  }
  std::fflush(stdout);
  return ok ? kOk : kNumerical;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Optimal-stirring mixing simulator for divergence-free fields on the 2-torus"};
  app.require_subcommand(1);

  std::string config_path;
  auto* sim = app.add_subcommand("simulate", "Run a simulation described by a config file");
  sim->add_option("--config", config_path, "Config file")->required();

  std::string q_text;
  double alpha = 1.0, h = 1.0, l = 1.0, budget = 1.0, c = 1.0, r = 8.0;
  int d = 2;
  auto* bnd = app.add_subcommand("bounds", "Minimal mixing time lower bound");
  bnd->add_option("--q", q_text, "Integrability exponent (inf allowed)")->required();
  bnd->add_option("--alpha", alpha)->required();
  bnd->add_option("--d", d)->required();
  bnd->add_option("--h-norm", h, "|u0| in H^-alpha")->required();
  bnd->add_option("--l2-norm", l, "|u0| in L^2")->required();
  bnd->add_option("--budget", budget, "Norm of U")->required();
  bnd->add_option("--c", c, "Embedding constant");
  bnd->add_option("--r", r, "Free exponent of the critical case");

  std::string in_path, out_path, in_U;
  auto* opt = app.add_subcommand("optimal-field", "Optimal stirring field of a snapshot");
  opt->add_option("--in", in_path)->required();
  opt->add_option("--alpha", alpha)->required();
  opt->add_option("--out", out_path)->required();

  auto* prs = app.add_subcommand("pressure", "Pressure of a (u, U) snapshot pair");
  prs->add_option("--in-u", in_path)->required();
  prs->add_option("--in-U", in_U)->required();
  prs->add_option("--out", out_path)->required();

  std::string suite;
  VerifyParams vp;
  auto* ver = app.add_subcommand("verify", "Run verification suites, one JSON line per check");
  ver->add_option("--suite", suite)
      ->required()
      ->check(CLI::IsMember({"energy", "growth", "stability", "converge", "groenwall", "all"}));
  ver->add_option("--n", vp.n_cutoff, "Cutoff of the dipole runs");
  ver->add_option("--t-end", vp.t_end, "Length of the energy and envelope runs");
  ver->add_option("--growth-t-end", vp.growth_t_end, "Length of the growth and stability runs");
  ver->add_option("--rtol", vp.rtol);
  ver->add_option("--levels", vp.levels, "Convergence cutoffs");
  ver->add_option("--n-ref", vp.n_ref, "Reference cutoff");
  ver->add_option("--converge-t-end", vp.converge_t_end);

  std::string checkpoint;
  auto* res = app.add_subcommand("resume", "Continue a run from a checkpoint sidecar");
  res->add_option("--checkpoint", checkpoint)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*sim) return simulate(config_path);
    if (*bnd) return bounds(q_text, alpha, d, h, l, budget, c, r);
    if (*opt) return optimal_field(in_path, alpha, out_path);
    if (*prs) return pressure(in_path, in_U, out_path);
    if (*ver) return verify(suite, vp);
    if (*res) return resume(checkpoint);
  } catch (const EvolveError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const StiffnessError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const NonintegrableModeError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalid;
  }
  return kInvalid;
}

}  // namespace vectormix
