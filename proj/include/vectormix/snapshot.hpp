#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "vectormix/spectral_field.hpp"

namespace vectormix {

/// Binary snapshot layout (little-endian):
///   "VMXS" | u32 version = 1 | u64 N | u64 M | f64 L | f64 t | f64 alpha |
///   2 (2N+1)^2 coefficient pairs (re, im) as f64, component-major, each
///   component row-major over k from (-N, -N) to (N, N).
/// Scalar fields (pressure) are stored in component 0 with component 1 zero.
struct Snapshot {
  SpectralField field;
  double t = 0.0;
  double alpha = 1.0;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> encode_snapshot(const Snapshot& snap);
Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes);

/// Writes through a temporary file followed by a rename.
void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Embeds a scalar field as component 0 of a snapshot field.
SpectralField scalar_as_snapshot_field(const ScalarSpectralField& p);

/// Writes `contents` atomically (temporary file + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace vectormix
