#include "vectormix/config.hpp"

#include <algorithm>
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

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

double to_double(std::string_view s, int line, std::string_view key) {
  s = trim(s);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError("'" + std::string(key) + "' expects a number, got '" + std::string(s) + "'", line);
  return v;
}

long long to_integer(std::string_view s, int line, std::string_view key) {
  s = trim(s);
  long long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError("'" + std::string(key) + "' expects an integer, got '" + std::string(s) + "'", line);
  return v;
}

std::vector<StreamMode> parse_modes(std::string_view s, int line, std::string_view key) {
  std::vector<StreamMode> modes;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = std::min(s.find(';', start), s.size());
    const auto item = trim(s.substr(start, end - start));
    start = end + 1;
    if (item.empty()) continue;
    const auto tok = split_ws(item);
    if (tok.size() != 4)
      throw ConfigError("'" + std::string(key) + "' modes need 'kx ky re im', got '" + std::string(item) + "'", line);
    StreamMode m;
    m.kx = int(to_integer(tok[0], line, key));
    m.ky = int(to_integer(tok[1], line, key));
    m.amplitude = {to_double(tok[2], line, key), to_double(tok[3], line, key)};
    modes.push_back(m);
  }
  if (modes.empty()) throw ConfigError("'" + std::string(key) + "' lists no modes", line);
  return modes;
}

std::string rest_after_word(std::string_view v) {
  const auto sp = v.find_first_of(" \t");
  return sp == std::string_view::npos ? std::string() : std::string(trim(v.substr(sp)));
}

InitSpec parse_init(std::string_view v, int line) {
  const auto tok = split_ws(v);
  if (tok.empty()) throw ConfigError("'init' is empty", line);
  InitSpec spec;
  if (tok[0] == "dipole") {
    if (tok.size() != 1) throw ConfigError("'init = dipole' takes no arguments", line);
    spec.kind = InitKind::Dipole;
  } else if (tok[0] == "stream_modes") {
    spec.kind = InitKind::StreamModes;
    spec.modes = parse_modes(rest_after_word(v), line, "init");
  } else if (tok[0] == "snapshot") {
    if (tok.size() != 2) throw ConfigError("'init = snapshot' expects one path", line);
    spec.kind = InitKind::Snapshot;
    spec.path = tok[1];
  } else {
    throw ConfigError("unknown init kind '" + tok[0] + "'", line);
  }
  return spec;
}

ProviderSpec parse_provider(std::string_view v, int line) {
  const auto tok = split_ws(v);
  if (tok.empty()) throw ConfigError("'u_provider' is empty", line);
  ProviderSpec spec;
  if (tok[0] == "optimal" && tok.size() == 1) {
    spec.kind = ProviderKind::Optimal;
  } else if (tok[0] == "optimal_frozen_step" && tok.size() == 1) {
    spec.kind = ProviderKind::OptimalFrozenStep;
  } else if (tok[0] == "fixed_stream") {
    spec.kind = ProviderKind::FixedStream;
    spec.modes = parse_modes(rest_after_word(v), line, "u_provider");
  } else if (tok[0] == "file_sequence") {
    if (tok.size() < 3) throw ConfigError("'file_sequence' expects a pattern and at least one time", line);
    spec.kind = ProviderKind::FileSequence;
    spec.pattern = tok[1];
    for (std::size_t i = 2; i < tok.size(); ++i) spec.times.push_back(to_double(tok[i], line, "u_provider"));
    if (!std::is_sorted(spec.times.begin(), spec.times.end()))
      throw ConfigError("'file_sequence' times must be increasing", line);
  } else {
    throw ConfigError("unknown u_provider '" + std::string(trim(v)) + "'", line);
  }
  return spec;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string modes_text(const std::vector<StreamMode>& modes) {
  std::string s;
  for (const auto& m : modes)
    s += std::to_string(m.kx) + " " + std::to_string(m.ky) + " " + fmt(m.amplitude.real()) + " " +
         fmt(m.amplitude.imag()) + ";";
  return s;
}

}  // namespace

StepControl SimConfig::step_control() const {
  StepControl c;
  c.rtol = rtol;
  c.atol = atol;
  c.dt_init = 1e-2;
  c.dt_min = 1e-12;
  c.dt_max = 0.25;
  c.safety = 0.9;
  return c;
}

void SimConfig::validate() const {
  if (!(alpha >= 0.5 && alpha <= 1.0)) throw ConfigError("alpha must lie in [1/2, 1]", 0);
  if (n_cutoff < 1) throw ConfigError("n_cutoff must be at least 1", 0);
  if (!(side_length > 0.0)) throw ConfigError("side_length must be positive", 0);
  if (!(t_end >= 0.0)) throw ConfigError("t_end must be non-negative", 0);
  if (!(rtol > 0.0) || !(atol > 0.0)) throw ConfigError("rtol and atol must be positive", 0);
  if (!(output_interval >= 0.0) || !(snapshot_interval >= 0.0))
    throw ConfigError("intervals must be non-negative", 0);
  if (t_end > 0.0 && (output_interval > t_end || snapshot_interval > t_end))
    throw ConfigError("output and snapshot intervals must not exceed t_end", 0);
  if (init.kind == InitKind::Dipole && std::abs(side_length - 2.0 * std::numbers::pi) > 1e-12)
    throw ConfigError("init = dipole requires side_length = 2 pi", 0);
}

std::string SimConfig::canonical() const {
  std::string s;
  s += "alpha=" + fmt(alpha) + "\n";
  s += "n_cutoff=" + std::to_string(n_cutoff) + "\n";
  s += "side_length=" + fmt(side_length) + "\n";
  s += "rtol=" + fmt(rtol) + "\n";
  s += "atol=" + fmt(atol) + "\n";
  s += "output_interval=" + fmt(output_interval) + "\n";
  s += "snapshot_interval=" + fmt(snapshot_interval) + "\n";
  s += "init=" + std::to_string(int(init.kind)) + ":" + init.path + ":" + modes_text(init.modes) + "\n";
  s += "u_provider=" + std::to_string(int(u_provider.kind)) + ":" + u_provider.pattern + ":" +
       modes_text(u_provider.modes);
  for (double t : u_provider.times) s += fmt(t) + ",";
  s += "\nseed=" + std::to_string(seed) + "\n";
  return s;
}

std::uint64_t SimConfig::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

SimConfig parse_config(std::string_view text) {
  SimConfig cfg;
  std::map<std::string, int> seen;
  int line_no = 0;
  std::size_t pos = 0;
  int init_line = 0;
  while (pos <= text.size()) {
    const auto nl = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (auto it = seen.find(key); it != seen.end())
      throw ConfigError("duplicate key '" + key + "' (first set on line " + std::to_string(it->second) +
                            ", again on line " + std::to_string(line_no) + ")",
                        line_no);
    seen[key] = line_no;

    if (key == "alpha") {
      cfg.alpha = to_double(value, line_no, key);
      if (!(cfg.alpha >= 0.5 && cfg.alpha <= 1.0)) throw ConfigError("alpha must lie in [1/2, 1]", line_no);
    } else if (key == "n_cutoff") {
      const auto n = to_integer(value, line_no, key);
      if (n < 1 || n > 100000) throw ConfigError("n_cutoff must lie in [1, 100000]", line_no);
      cfg.n_cutoff = int(n);
    } else if (key == "side_length") {
      cfg.side_length = to_double(value, line_no, key);
      if (!(cfg.side_length > 0.0)) throw ConfigError("side_length must be positive", line_no);
    } else if (key == "t_end") {
      cfg.t_end = to_double(value, line_no, key);
      if (!(cfg.t_end >= 0.0)) throw ConfigError("t_end must be non-negative", line_no);
    } else if (key == "rtol" || key == "atol") {
      const double v = to_double(value, line_no, key);
      if (!(v > 0.0)) throw ConfigError(key + " must be positive", line_no);
      (key == "rtol" ? cfg.rtol : cfg.atol) = v;
    } else if (key == "output_interval" || key == "snapshot_interval") {
      const double v = to_double(value, line_no, key);
      if (!(v >= 0.0)) throw ConfigError(key + " must be non-negative", line_no);
      (key == "output_interval" ? cfg.output_interval : cfg.snapshot_interval) = v;
    } else if (key == "init") {
      cfg.init = parse_init(value, line_no);
      init_line = line_no;
    } else if (key == "u_provider") {
      cfg.u_provider = parse_provider(value, line_no);
    } else if (key == "out_dir") {
      if (value.empty()) throw ConfigError("out_dir is empty", line_no);
      cfg.out_dir = std::string(value);
    } else if (key == "seed") {
      cfg.seed = to_integer(value, line_no, key);
    } else {
      throw ConfigError("unknown key '" + key + "'", line_no);
    }
  }
  for (const char* required : {"alpha", "n_cutoff", "t_end", "init"})
    if (!seen.count(required)) throw ConfigError(std::string("missing required key '") + required + "'", 0);
  cfg.init.grid = cfg.grid();
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    const bool about_init = std::string_view(e.what()).find("dipole") != std::string_view::npos;
    int line = about_init ? init_line : seen.count("t_end") ? seen["t_end"] : 0;
    throw ConfigError(e.what(), line);
  }
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string(), 0);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

VelocityProvider make_provider(const SimConfig& cfg) {
  const GridSpec grid = cfg.grid();
  switch (cfg.u_provider.kind) {
    case ProviderKind::Optimal:
    case ProviderKind::OptimalFrozenStep: {
      return optimal_provider(cfg.alpha, cfg.u_provider.kind == ProviderKind::OptimalFrozenStep);
    }
    case ProviderKind::FixedStream:
      return constant_velocity(velocity_from_stream(stream_from_modes(grid, cfg.u_provider.modes)));
    case ProviderKind::FileSequence: {
      std::vector<SpectralField> fields;
      for (std::size_t i = 0; i < cfg.u_provider.times.size(); ++i) {
        std::string path = cfg.u_provider.pattern;
        if (const auto at = path.find("{i}"); at != std::string::npos) path.replace(at, 3, std::to_string(i));
        auto U = read_snapshot(path).field;
        require_same_lattice(U.grid, grid, "file_sequence velocity");
        U.grid = grid;
        remove_mean(U);
        fields.push_back(leray_project(U));
      }
      return {[fields, times = cfg.u_provider.times](double t, const SpectralField&) {
                const auto it = std::upper_bound(times.begin(), times.end(), t);
                const std::size_t idx = it == times.begin() ? 0 : std::size_t(it - times.begin()) - 1;
                return fields[idx];
              },
              false};
    }
  }
  throw std::logic_error("unhandled provider kind");
}

}  // namespace vectormix
