#include "vectormix/simulation.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "vectormix/optimal_mixer.hpp"
#include "vectormix/snapshot.hpp"
#include "vectormix/spectral_ops.hpp"

namespace vectormix {

namespace fs = std::filesystem;

NormRow measure(const SpectralField& u, const SpectralField& U, double alpha) {
  NormRow r;
  r.h_neg_alpha = sobolev_norm(u, -alpha);
  const double l2 = sobolev_norm(u, 0.0);
  r.energy = l2 * l2;
  r.grad_U_l2 = sobolev_norm(U, 1.0);
  r.grad_U_linf = gradient_linf(U);
  r.U_w12 = std::hypot(sobolev_norm(U, 0.0), r.grad_U_l2);
  r.decay_rate_inst = -mix_norm_rate(u, U, alpha);
  r.grad_u_l2 = sobolev_norm(u, 1.0);
  r.hess_u_l2 = sobolev_norm(u, 2.0);
  r.divergence_ratio = divergence_ratio(u);
  return r;
}

namespace {

// Smallest multiple of h strictly beyond t (ignoring rounding-level gaps).
double next_multiple(double t, double h) {
  double k = std::floor(t / h);
  while (k * h <= t + 1e-12 * std::max(1.0, std::abs(t))) k += 1.0;
  return k * h;
}

bool reached(double t, double target) { return t == target; }

}  // namespace

NormSeries evolve_from(const SimConfig& cfg, const RunPoint& start, const VelocityProvider& provider,
                       const EvolveSinks& sinks, bool emit_first) {
  cfg.validate();
  const StepControl ctrl = cfg.step_control();
  ctrl.validate();

  RunPoint pt = start;
  NormSeries series;
  series.alpha = cfg.alpha;

  StepCache cache;
  SpectralField U = provider.velocity(pt.state.t, pt.state.u);
  cache.t = pt.state.t;
  cache.has_velocity = true;
  cache.velocity = U;

  auto make_row = [&](const SpectralField& vel) {
    NormRow r = measure(pt.state.u, vel, cfg.alpha);
    r.t = pt.state.t;
    r.dt = pt.state.dt_last;
    r.int_grad_U_linf = pt.int_grad_U_linf;
    r.int_h2_growth = pt.int_h2_growth;
    return r;
  };

  NormRow first = make_row(U);
  series.rows.push_back(first);
  if (emit_first) {
    if (sinks.row) sinks.row(first, pt.state, U);
    if (sinks.snapshot && cfg.snapshot_interval > 0.0) sinks.snapshot(pt, U);
  }
  double g_prev = first.grad_U_linf;
  double h2_prev = laplacian_l3(U) + g_prev;

  while (pt.state.t < cfg.t_end) {
    const double t = pt.state.t;
    const double t_out = cfg.output_interval > 0.0
                             ? std::min(next_multiple(t, cfg.output_interval), cfg.t_end)
                             : cfg.t_end;
    const double t_snap = cfg.snapshot_interval > 0.0
                              ? std::min(next_multiple(t, cfg.snapshot_interval), cfg.t_end)
                              : cfg.t_end;
    try {
      pt.state = rk45_step(pt.state, provider, ctrl, std::min(t_out, t_snap), &cache);
    } catch (const StiffnessError& e) {
      throw EvolveError(e.what(), series);
    }
    if (cache.valid_at(pt.state.t)) {
      U = cache.velocity;
    } else {
      U = provider.velocity(pt.state.t, pt.state.u);
      cache.t = pt.state.t;
      cache.has_velocity = true;
      cache.has_rhs = false;
      cache.velocity = U;
    }
    const double g = gradient_linf(U);
    const double h2 = laplacian_l3(U) + g;
    const double dt = pt.state.dt_last;
    pt.int_grad_U_linf += 0.5 * dt * (g_prev + g);
    pt.int_h2_growth += 0.5 * dt * (h2_prev + h2);
    g_prev = g;
    h2_prev = h2;

    if (reached(pt.state.t, t_out)) {
      NormRow r = make_row(U);
      series.rows.push_back(r);
      if (sinks.row) sinks.row(r, pt.state, U);
    }
    if (cfg.snapshot_interval > 0.0 && reached(pt.state.t, t_snap) && sinks.snapshot)
      sinks.snapshot(pt, U);
  }
  return series;
}

NormSeries evolve(const SimConfig& cfg, const SpectralField& u0, const VelocityProvider& provider,
                  const EvolveSinks& sinks) {
  RunPoint start;
  start.state.t = 0.0;
  start.state.u = u0;
  return evolve_from(cfg, start, provider, sinks, true);
}

NormSeries evolve(const SimConfig& cfg, const VelocityProvider& provider, const EvolveSinks& sinks) {
  InitSpec init = cfg.init;
  init.grid = cfg.grid();
  return evolve(cfg, build_initial(init), provider, sinks);
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string indexed(const char* stem, int index, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%06d%s", stem, index, ext);
  return buf;
}

}  // namespace

EvolveSinks OutputWriter::sinks() {
  EvolveSinks s;
  s.row = [this](const NormRow& r, const SimState&, const SpectralField&) { rows.push_back(r); };
  s.snapshot = [this](const RunPoint& pt, const SpectralField& U) {
    ++snapshot_index;
    const fs::path dir = cfg.out_dir;
    const double t = pt.state.t;
    write_snapshot(dir / indexed("u", snapshot_index, ".vmxs"), {pt.state.u, t, cfg.alpha});
    write_snapshot(dir / indexed("U", snapshot_index, ".vmxs"), {U, t, cfg.alpha});
    write_snapshot(dir / indexed("p", snapshot_index, ".vmxs"),
                   {scalar_as_snapshot_field(recover_pressure(pt.state.u, U)), t, cfg.alpha});
    flush_csv();
    write_checkpoint(pt, dir / indexed("checkpoint", snapshot_index, ".txt"));
    write_checkpoint(pt, dir / "checkpoint.txt");
  };
  return s;
}

void OutputWriter::flush_csv() const {
  NormSeries series;
  series.alpha = cfg.alpha;
  series.rows = rows;
  std::ostringstream os;
  write_csv(os, series);
  write_file_atomic(fs::path(cfg.out_dir) / "series.csv", os.str());
}

void OutputWriter::write_checkpoint(const RunPoint& point, const fs::path& sidecar) const {
  fs::path snap = sidecar;
  snap.replace_extension(".vmxs");
  write_snapshot(snap, {point.state.u, point.state.t, cfg.alpha});
  std::string text;
  text += "t = " + fmt(point.state.t) + "\n";
  text += "dt_last = " + fmt(point.state.dt_last) + "\n";
  text += "dt_next = " + fmt(point.state.dt_next) + "\n";
  text += "int_grad_U_linf = " + fmt(point.int_grad_U_linf) + "\n";
  text += "int_h2_growth = " + fmt(point.int_h2_growth) + "\n";
  text += "rows = " + std::to_string(rows.size()) + "\n";
  text += "snapshot_index = " + std::to_string(snapshot_index) + "\n";
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(cfg.hash()));
  text += "config_hash = " + std::string(hash) + "\n";
  text += "config_path = " + fs::absolute(config_path).string() + "\n";
  write_file_atomic(sidecar, text);
}

Checkpoint read_checkpoint(const fs::path& sidecar) {
  std::ifstream is(sidecar);
  if (!is) throw std::runtime_error("cannot open checkpoint " + sidecar.string());
  std::map<std::string, std::string> kv;
  for (std::string line; std::getline(is, line);) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  auto need = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error(std::string("checkpoint is missing '") + key + "'");
    return it->second;
  };
  Checkpoint c;
  c.point.state.t = std::stod(need("t"));
  c.point.state.dt_last = std::stod(need("dt_last"));
  c.point.state.dt_next = std::stod(need("dt_next"));
  c.point.int_grad_U_linf = std::stod(need("int_grad_U_linf"));
  c.point.int_h2_growth = std::stod(need("int_h2_growth"));
  c.rows = std::stoul(need("rows"));
  c.snapshot_index = std::stoi(need("snapshot_index"));
  c.config_hash = std::stoull(need("config_hash"), nullptr, 16);
  c.config_path = need("config_path");
  fs::path snap = sidecar;
  snap.replace_extension(".vmxs");
  const Snapshot s = read_snapshot(snap);
  if (s.t != c.point.state.t) throw std::runtime_error("checkpoint snapshot time does not match sidecar");
  c.point.state.u = s.field;
  return c;
}

std::vector<NormRow> read_csv_rows(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != NormSeries::csv_header)
    throw std::runtime_error(path.string() + " does not start with the series header");
  std::vector<NormRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double v[7];
    std::size_t pos = 0;
    for (int c = 0; c < 7; ++c) {
      const auto end = c < 6 ? line.find(',', pos) : line.size();
      if (end == std::string::npos) throw std::runtime_error("short CSV row in " + path.string());
      v[c] = std::stod(line.substr(pos, end - pos));
      pos = end + 1;
    }
    NormRow r;
    r.t = v[0];
    r.dt = v[1];
    r.h_neg_alpha = v[2];
    r.energy = v[3];
    r.grad_U_l2 = v[4];
    r.grad_U_linf = v[5];
    r.decay_rate_inst = v[6];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace vectormix
