#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>

#include "vectormix/config.hpp"
#include "vectormix/diagnostics.hpp"
#include "vectormix/transport.hpp"

namespace vectormix {

/// Integrator position plus the running quadratures needed to continue a run.
struct RunPoint {
  SimState state;
  double int_grad_U_linf = 0.0;
  double int_h2_growth = 0.0;
};

/// Callbacks invoked synchronously from the time loop.
struct EvolveSinks {
  /// At t = 0 (or the resume time) and every output time, including t_end.
  std::function<void(const NormRow&, const SimState&, const SpectralField& U)> row;
  /// At t = 0, every multiple of snapshot_interval and t_end (only when
  /// snapshot_interval > 0).
  std::function<void(const RunPoint&, const SpectralField& U)> snapshot;
};

/// A step failed; `partial` holds every row produced before the failure.
class EvolveError : public std::runtime_error {
 public:
  EvolveError(const std::string& what, NormSeries partial)
      : std::runtime_error(what), partial(std::move(partial)) {}
  NormSeries partial;
};

/// Diagnostics of state u under advecting field U.
NormRow measure(const SpectralField& u, const SpectralField& U, double alpha);

/// Advances from the config's initial datum to t_end.
NormSeries evolve(const SimConfig& cfg, const VelocityProvider& provider, const EvolveSinks& sinks = {});

/// Advances from u0 at t = 0 to cfg.t_end.
NormSeries evolve(const SimConfig& cfg, const SpectralField& u0, const VelocityProvider& provider,
                  const EvolveSinks& sinks = {});

/// Continues from `start` to cfg.t_end. The row at the start time is included
/// in the returned series but is only passed to the row sink if `emit_first`.
NormSeries evolve_from(const SimConfig& cfg, const RunPoint& start, const VelocityProvider& provider,
                       const EvolveSinks& sinks, bool emit_first);

/// Writes series.csv and per-snapshot u/U/p files plus checkpoints under
/// cfg.out_dir. `config_path` is recorded in the checkpoint sidecar.
struct OutputWriter {
  SimConfig cfg;
  std::filesystem::path config_path;
  std::vector<NormRow> rows;
  int snapshot_index = 0;

  EvolveSinks sinks();
  void flush_csv() const;
  void write_checkpoint(const RunPoint& point, const std::filesystem::path& sidecar) const;
};

struct Checkpoint {
  RunPoint point;
  std::filesystem::path config_path;
  std::uint64_t config_hash = 0;
  std::size_t rows = 0;
  int snapshot_index = 0;
};

Checkpoint read_checkpoint(const std::filesystem::path& sidecar);

/// Reads back the seven CSV columns of a series file.
std::vector<NormRow> read_csv_rows(const std::filesystem::path& path);

}  // namespace vectormix
