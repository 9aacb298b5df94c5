#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace vectormix {

/// Thrown when a field cannot be represented on a requested grid.
class RepresentabilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when two fields that must share a lattice do not.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Smallest integer >= n whose prime factors are all in {2, 3, 5, 7}.
inline int good_fft_size(int n) {
  if (n < 1) n = 1;
  for (int m = n;; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

/// Size of the alias-free product grid for cutoff n (3/2-rule, >= 3n + 1).
inline int dealiased_size(int n_cutoff) { return good_fft_size(3 * n_cutoff + 1); }

/// Truncated mode lattice on the 2-torus of side L: modes with |k|_inf <= N.
struct GridSpec {
  int n_cutoff = 0;
  int phys_size = 1;
  double side_length = 2.0 * std::numbers::pi;

  GridSpec() = default;
  GridSpec(int n, int m, double l) : n_cutoff(n), phys_size(m), side_length(l) { validate(); }

  /// Grid with the physical size set to the alias-free product size.
  static GridSpec with_cutoff(int n, double l = 2.0 * std::numbers::pi) {
    return GridSpec(n, dealiased_size(n), l);
  }

  static constexpr int dims = 2;

  int modes() const { return 2 * n_cutoff + 1; }
  int padded_size() const { return dealiased_size(n_cutoff); }
  double wavenumber_scale() const { return 2.0 * std::numbers::pi / side_length; }
  /// L^d, the factor relating coefficient sums to physical integrals.
  double volume() const { return side_length * side_length; }

  void validate() const {
    if (n_cutoff < 0) throw std::invalid_argument("n_cutoff must be non-negative");
    if (!(side_length > 0.0)) throw std::invalid_argument("side_length must be positive");
    if (phys_size < 2 * n_cutoff + 1)
      throw RepresentabilityError("phys_size " + std::to_string(phys_size) + " < 2N+1 = " +
                                  std::to_string(2 * n_cutoff + 1));
  }

  bool same_lattice(const GridSpec& o) const {
    return n_cutoff == o.n_cutoff && side_length == o.side_length;
  }
  bool operator==(const GridSpec&) const = default;
};

inline void require_same_lattice(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!a.same_lattice(b))
    throw ShapeError(std::string(what) + ": fields live on different mode lattices (N=" +
                     std::to_string(a.n_cutoff) + " vs " + std::to_string(b.n_cutoff) + ")");
}

}  // namespace vectormix
