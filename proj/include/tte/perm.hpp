#pragma once

// Permutations and partial permutations of {0, ..., m-1}.
//
// Points are 0-based everywhere in the library. The text formats
// ("(1 2 3)(4)" cycles, "1>2,2>3" arcs) and JSON use 1-based points.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tte {

inline constexpr int kUndefined = -1;

/// Injection from a domain D subset of [m] into [m], stored as an image array
/// with kUndefined outside D.
class PartialPermutation {
 public:
  PartialPermutation() = default;
  /// Empty-domain partial permutation on m points.
  explicit PartialPermutation(int m);
  /// Validates injectivity and range; throws InputError.
  static PartialPermutation from_images(std::vector<int> images);

  int size() const { return static_cast<int>(map_.size()); }
  bool defined(int i) const { return map_[i] != kUndefined; }
  int operator()(int i) const { return map_[i]; }
  std::span<const int> images() const { return map_; }

  int domain_size() const;
  bool is_full() const { return domain_size() == size(); }
  bool in_image(int j) const;

  bool operator==(const PartialPermutation&) const = default;

 private:
  std::vector<int> map_;
};

/// Bijection of [m].
class Permutation {
 public:
  Permutation() = default;
  /// Throws InputError unless `p` is total.
  explicit Permutation(const PartialPermutation& p);

  static Permutation identity(int m);
  static Permutation from_images(std::vector<int> images);
  /// Cycles given with 0-based points; omitted points are fixed.
  static Permutation from_cycles(int m, const std::vector<std::vector<int>>& cycles);
  /// The full cycle 0 -> 1 -> ... -> m-1 -> 0.
  static Permutation increasing_cycle(int m);

  int size() const { return static_cast<int>(map_.size()); }
  int operator()(int i) const { return map_[i]; }
  std::span<const int> images() const { return map_; }

  operator PartialPermutation() const { return PartialPermutation::from_images(map_); }

  bool operator==(const Permutation&) const = default;
  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<int> map_;
};

// --- text formats -------------------------------------------------------

/// Parses "(1 2 3)(4)" (full; omitted points fixed, "()" is the identity) or
/// "1>2,2>3" (partial; "" is the empty domain). Throws InputError.
PartialPermutation parse_permutation(std::string_view text, int m);
/// Largest point mentioned in `text` (1-based), 0 if none; does not validate.
int max_point(std::string_view text);

std::string to_cycle_string(const Permutation& p);
std::string to_arc_string(const PartialPermutation& p);

// --- algebra ------------------------------------------------------------

/// Cycles in order of their minimal element, each starting at its minimum.
std::vector<std::vector<int>> cycles(const Permutation& p);
int cycle_count(const Permutation& p);

PartialPermutation invert(const PartialPermutation& p);
Permutation invert(const Permutation& p);
/// (a o b)(i) = a(b(i)).
Permutation compose(const Permutation& a, const Permutation& b);

/// #{ i in D(p) : p(i) <= i }.
int backward_count(const PartialPermutation& p);

/// theta o p o theta^-1. Throws InputError on size mismatch.
Permutation conjugate(const Permutation& p, const Permutation& theta);

struct ConjugationResult {
  Permutation theta;
  int total = 0;
};

/// Minimises sum_j backward_count(theta p_j theta^-1) over all theta by
/// enumeration; ties go to the lexicographically smallest theta.
/// Throws CapExceeded when m > max_m.
ConjugationResult min_conjugate_backward(std::span<const Permutation> ps, int max_m = 8);

/// Interval-merging count K: intervals (p(i), i] for descents i < m-1
/// (0-based: i in [0, m-2]), greedily merged pairwise while disjoint,
/// in ascending order of left endpoint.
int interval_K(const Permutation& p);
/// Smallest K reachable by any merge order. Throws CapExceeded for m > 8.
int interval_K_min(const Permutation& p);

// --- ranks of permutations of [k] ------------------------------------------

/// Lexicographic rank in [0, k!).
std::uint32_t perm_rank(std::span<const int> images);
/// Inverse of perm_rank.
std::vector<int> perm_unrank(int k, std::uint32_t rank);
std::uint64_t factorial(int k);

}  // namespace tte
