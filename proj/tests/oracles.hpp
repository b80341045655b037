#pragma once

// Independent reference implementations used only by the tests. They work
// straight from the permutations and never touch TensorGraph or the
// contraction engine.

#include <algorithm>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tte/perm.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;

/// Cycles of the closed walk system: blue step in(r, c) -> out(r, pi[r][c]),
/// then the colour-c' edge out(r, c') -> in(sigma_c'(r), c') when defined.
inline int cycles(const std::vector<tte::PartialPermutation>& s, const std::vector<std::vector<int>>& pi) {
  const int k = static_cast<int>(s.size());
  const int m = s.front().size();
  auto next = [&](int v) {  // v = r * k + c, an in-vertex; -1 at an open end
    const int r = v / k, c = v % k;
    const int out = pi[r][c];
    if (!s[out].defined(r)) return -1;
    return s[out](r) * k + out;
  };
  // in-vertices reachable from an open in-vertex lie on paths
  std::vector<char> on_path(static_cast<std::size_t>(m * k), 0);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < k; ++c) {
      if (s[c].in_image(r)) continue;
      for (int v = r * k + c; v != -1; v = next(v)) on_path[v] = 1;
    }
  }
  std::vector<char> seen = on_path;
  int count = 0;
  for (int v0 = 0; v0 < m * k; ++v0) {
    if (seen[v0]) continue;
    ++count;
    for (int v = v0; !seen[v]; v = next(v)) seen[v] = 1;
  }
  return count;
}

/// Max of cycles() over every pairing, by odometer over std::next_permutation.
inline int max_cycles(const std::vector<tte::PartialPermutation>& s) {
  const int k = static_cast<int>(s.size());
  const int m = s.front().size();
  std::vector<int> id(static_cast<std::size_t>(k));
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::vector<int>> pi(static_cast<std::size_t>(m), id);
  int best = 0;
  while (true) {
    best = std::max(best, cycles(s, pi));
    int r = m - 1;
    while (r >= 0 && !std::next_permutation(pi[r].begin(), pi[r].end())) --r;
    if (r < 0) break;
  }
  return best;
}

/// One-leg trace of full sigma: product over cycles of Tr(A_i A_sigma(i) ...).
inline std::complex<double> trace_one_leg(const tte::Permutation& p, const std::vector<Mat>& a) {
  std::complex<double> out = 1.0;
  std::vector<char> seen(static_cast<std::size_t>(p.size()), 0);
  for (int i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    Mat prod = Mat::Identity(a[i].rows(), a[i].cols());
    for (int j = i; !seen[j]; j = p(j)) {
      seen[j] = 1;
      prod = prod * a[j];
    }
    out *= prod.trace();
  }
  return out;
}

inline tte::Permutation random_perm(int m, std::mt19937_64& rng) {
  std::vector<int> v(static_cast<std::size_t>(m));
  std::iota(v.begin(), v.end(), 0);
  std::shuffle(v.begin(), v.end(), rng);
  return tte::Permutation::from_images(v);
}

/// Random permutation with each point dropped from the domain with probability 1/3.
inline tte::PartialPermutation random_partial(int m, std::mt19937_64& rng) {
  const tte::Permutation p = random_perm(m, rng);
  std::vector<int> img(p.images().begin(), p.images().end());
  for (auto& x : img) {
    if (rng() % 3 == 0) x = -1;
  }
  return tte::PartialPermutation::from_images(img);
}

inline Mat random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  }
  return a;
}

inline std::vector<tte::Permutation> all_perms(int m) {
  std::vector<int> v(static_cast<std::size_t>(m));
  std::iota(v.begin(), v.end(), 0);
  std::vector<tte::Permutation> out;
  do {
    out.push_back(tte::Permutation::from_images(v));
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

}  // namespace oracle
