#include "vectormix/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace vectormix {

namespace {

constexpr char kMagic[4] = {'V', 'M', 'X', 'S'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 8 + 8 + 8 + 8 + 8;

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(std::uint8_t(bits >> (8 * b)));
}

template <typename T>
T get_le(const std::vector<std::uint8_t>& in, std::size_t& pos) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  if (pos + sizeof(U) > in.size()) throw FormatError("snapshot truncated");
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) bits |= U(in[pos + b]) << (8 * b);
  pos += sizeof(U);
  return std::bit_cast<T>(bits);
}

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const Snapshot& snap) {
  const auto& f = snap.field;
  const std::size_t m = std::size_t(f.grid.modes());
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 2 * m * m * 16);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_le(out, kSnapshotVersion);
  put_le(out, std::uint64_t(f.grid.n_cutoff));
  put_le(out, std::uint64_t(f.grid.phys_size));
  put_le(out, f.grid.side_length);
  put_le(out, snap.t);
  put_le(out, snap.alpha);
  for (const auto& c : f.comp)
    for (Eigen::Index a = 0; a < c.rows(); ++a)
      for (Eigen::Index b = 0; b < c.cols(); ++b) {
        put_le(out, c(a, b).real());
        put_le(out, c(a, b).imag());
      }
  return out;
}

Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw FormatError("not a snapshot file (bad magic)");
  std::size_t pos = 4;
  const auto version = get_le<std::uint32_t>(bytes, pos);
  if (version != kSnapshotVersion)
    throw FormatError("unsupported snapshot version " + std::to_string(version));
  const auto n = get_le<std::uint64_t>(bytes, pos);
  const auto m = get_le<std::uint64_t>(bytes, pos);
  Snapshot snap;
  const double side = get_le<double>(bytes, pos);
  snap.t = get_le<double>(bytes, pos);
  snap.alpha = get_le<double>(bytes, pos);
  if (n > (1u << 20) || m > (1u << 24)) throw FormatError("snapshot dimensions out of range");
  const std::size_t modes = 2 * std::size_t(n) + 1;
  if (bytes.size() != kHeaderBytes + 2 * modes * modes * 16)
    throw FormatError("snapshot size does not match its header");
  try {
    snap.field = SpectralField::zero(GridSpec(int(n), int(m), side));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid snapshot grid: ") + e.what());
  }
  for (auto& c : snap.field.comp)
    for (Eigen::Index a = 0; a < c.rows(); ++a)
      for (Eigen::Index b = 0; b < c.cols(); ++b) {
        const double re = get_le<double>(bytes, pos);
        const double im = get_le<double>(bytes, pos);
        c(a, b) = {re, im};
      }
  snap.field.is_divergence_free = false;
  snap.field.is_mean_zero = false;
  return snap;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os.write(contents.data(), std::streamsize(contents.size()));
    if (!os) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  const auto bytes = encode_snapshot(snap);
  write_file_atomic(path, std::string(bytes.begin(), bytes.end()));
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open snapshot " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

SpectralField scalar_as_snapshot_field(const ScalarSpectralField& p) {
  auto f = SpectralField::zero(p.grid);
  f.comp[0] = p.comp[0];
  f.is_divergence_free = false;
  f.is_mean_zero = true;
  return f;
}

}  // namespace vectormix
