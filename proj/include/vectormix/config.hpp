#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vectormix/initial_conditions.hpp"
#include "vectormix/transport.hpp"

namespace vectormix {

enum class ProviderKind { Optimal, OptimalFrozenStep, FixedStream, FileSequence };

struct ProviderSpec {
  ProviderKind kind = ProviderKind::Optimal;
  std::vector<StreamMode> modes;  ///< FixedStream
  std::string pattern;            ///< FileSequence; "{i}" is replaced by the index
  std::vector<double> times;      ///< FileSequence; start time of each file
};

/// Full description of a run.
///
/// Text form is one `key = value` per line, `#` starts a comment:
///
///     alpha = 1
///     n_cutoff = 64
///     t_end = 5
///     init = dipole                      # or: stream_modes kx ky re im; ...
///                                        # or: snapshot path.vmxs
///     u_provider = optimal               # optimal_frozen_step,
///                                        # fixed_stream kx ky re im; ...,
///                                        # file_sequence pattern t0 t1 ...
struct SimConfig {
  double alpha = 1.0;
  int n_cutoff = 0;
  double side_length = 2.0 * std::numbers::pi;
  double t_end = 0.0;
  double rtol = 1e-8;
  double atol = 1e-10;
  double output_interval = 0.01;
  double snapshot_interval = 0.0;
  InitSpec init;
  ProviderSpec u_provider;
  std::string out_dir = "out";
  std::int64_t seed = 0;  ///< reserved

  GridSpec grid() const { return GridSpec::with_cutoff(n_cutoff, side_length); }
  StepControl step_control() const;
  /// Throws ConfigError (line 0) on invariant violations.
  void validate() const;
  /// Stable text form of everything that affects the trajectory.
  std::string canonical() const;
  /// FNV-1a 64 of canonical().
  std::uint64_t hash() const;
};

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& what, int line)
      : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line(line) {}
  int line;
};

SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::filesystem::path& path);

/// Builds the advecting-field provider a config asks for.
VelocityProvider make_provider(const SimConfig& cfg);

}  // namespace vectormix
