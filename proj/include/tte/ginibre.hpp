#pragma once

// Ginibre-conjugated words: Wick pairing sums for
// E (tr (x) Id)(A'_1 (X (x) I) B'_1 (X* (x) I) ... A'_m (X (x) I) B'_m (X* (x) I))
// and their circular (non-crossing) limit.

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "tte/caps.hpp"
#include "tte/extremal.hpp"
#include "tte/perm.hpp"
#include "tte/tensor.hpp"

namespace tte {

/// All m! pairings theta (the i-th X with the theta(i)-th X*) in
/// lexicographic order. Throws CapExceeded for m > 8.
std::vector<Permutation> enumerate_theta(int m);

/// Chords {2i, 2 theta(i) + 1} on [2m] (0-based) do not interleave.
bool is_noncrossing(const Permutation& theta);

/// sigma(2i) = 2 sigma'(i), sigma(2i+1) = 2 sigma''(i) + 1 with
/// sigma'(i) = theta(i) + 1 mod m and sigma''(theta(i)) = i (0-based).
Permutation theta_to_sigma(const Permutation& theta);
/// i -> i + 1 on [2m - 1], undefined at the last point.
PartialPermutation tau_chain(int m);

std::uint64_t catalan(int m);
/// m! - Catalan(m).
std::uint64_t crossing_count(int m);

struct TermExponent {
  Permutation theta;
  bool noncrossing = false;
  int M = 0;
  int expected = 0;  // d1 (1 + m) when non-crossing, else the upper bound d1 m + min(d1, d2)
  bool ok = false;
};
/// M of (sigma_theta repeated d1 times, tau repeated d2 times) and the
/// matching dichotomy check.
TermExponent pairing_term_exponent(const Permutation& theta, int d1, int d2, const Caps& caps = {});

struct GinibreModel {
  int m = 1;
  int d1 = 1;
  int d2 = 1;
  int N = 2;
  std::vector<DenseMatrix> a;  // A'_1..A'_m, each N^{d1+d2} square
  std::vector<DenseMatrix> b;  // B'_1..B'_m

  int n() const;      // N^d1
  int p_dim() const;  // N^d2
  void validate() const;
};

/// Normalized contribution N^{-d1(1+m)} (Tr_sigma^{(x)d1} (x) Tr_tau^{(x)d2})(A'_1, B'_1, ...).
Mat pairing_term(const GinibreModel& model, const Permutation& theta, const Caps& caps = {});
/// Sum of pairing_term over all theta.
Mat exact_expectation(const GinibreModel& model, const Caps& caps = {});
/// Sum over non-crossing theta only.
Mat free_limit(const GinibreModel& model, const Caps& caps = {});

struct BoundCheck {
  bool applicable = false;  // requires d1 > d2
  double deviation_norm = 0;
  double bound = 0;
  bool pass = false;
};
BoundCheck compare_bound(const GinibreModel& model, const Caps& caps = {});

struct MonteCarlo {
  Mat estimate;
  Eigen::MatrixXd stderr_re;
  Eigen::MatrixXd stderr_im;
  int samples = 0;
};
/// Samples are drawn in blocks of `kMcBlock`; block b uses an mt19937_64
/// seeded with seed_seq{seed_lo, seed_hi, b} and blocks are summed in order,
/// so the result does not depend on `threads`.
inline constexpr int kMcBlock = 1000;
MonteCarlo mc_expectation(const GinibreModel& model, int samples, std::uint64_t seed, int threads = 1);

/// Largest entrywise |exact - mc| / stderr over real and imaginary parts.
double max_z(const Mat& exact, const MonteCarlo& mc);

/// Model with seeded random unitary inputs.
GinibreModel random_model(int m, int d1, int d2, int N, std::uint64_t seed);
/// Model with identity inputs.
GinibreModel identity_model(int m, int d1, int d2, int N);

}  // namespace tte
