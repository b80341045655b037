#pragma once

// Dense oracle: partial traces of explicit complex matrices by direct
// index enumeration, the unitaries U_pi, moments and norms.
//
// Matrices act on (C^N)^{(x)k}; leg 1 is the most significant tensor factor,
// so the row index of a leg tuple (i_1, ..., i_k) is sum_c i_c N^{k-1-c}.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "tte/caps.hpp"
#include "tte/graph.hpp"
#include "tte/perm.hpp"

namespace tte {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

struct LegDim {
  int leg = 0;  // 0-based leg index
  int rows = 1;
  int cols = 1;
};

struct DenseMatrix {
  Mat data;
  std::vector<LegDim> legs;  // empty when no factorization is recorded

  int rows() const { return static_cast<int>(data.rows()); }
  int cols() const { return static_cast<int>(data.cols()); }
  bool is_unitary(double tol = 1e-12) const;
};

/// One open index of an evaluation: the leg and rectangle it sits on.
struct OpenSlot {
  int leg = 0;
  int rect = 0;
};

struct EvalResult {
  DenseMatrix value;
  std::vector<OpenSlot> row_slots;  // open in-vertices, leg-major then rectangle
  std::vector<OpenSlot> col_slots;  // open out-vertices, same order

  bool scalar() const { return row_slots.empty() && col_slots.empty(); }
};

/// The sum of E_{i_1 i_pi(1)} (x) ... (x) E_{i_k i_pi(k)}.
/// Throws CapExceeded when N^k exceeds `dim_cap`.
DenseMatrix make_u_pi(const Permutation& pi, int N, std::uint64_t dim_cap = Caps{}.dim);
/// The matrix whose contraction realizes the blue edges in c -> out pi(c);
/// equals make_u_pi(pi^-1).
DenseMatrix u_for_pairing(const Permutation& pi, int N, std::uint64_t dim_cap = Caps{}.dim);
/// One u_for_pairing matrix per rectangle of `b`.
std::vector<DenseMatrix> u_tuple(const BluePairing& b, int N, std::uint64_t dim_cap = Caps{}.dim);

// --- contraction engine ------------------------------------------------------

struct Factor {
  const Mat* mat = nullptr;
  std::vector<int> row_vars;  // one variable per leg, leg 1 first
  std::vector<int> col_vars;
};

/// Sum over all assignments of `num_vars` variables in [0, N) of the
/// product of factor entries, accumulated into the entry of the output
/// addressed by the output variables. Throws CapExceeded past `term_cap`.
Mat contract(int N, int num_vars, const std::vector<Factor>& factors, const std::vector<int>& out_row_vars,
             const std::vector<int>& out_col_vars, std::uint64_t term_cap = Caps{}.terms);

/// (Tr_{sigma_1} (x) ... (x) Tr_{sigma_k})(A_1, ..., A_m).
EvalResult evaluate(std::span<const PartialPermutation> sigmas, std::span<const DenseMatrix> mats, int N,
                    std::uint64_t term_cap = Caps{}.terms);

/// max |Y^dagger - Y*| where Y* is evaluated from the inverted partial
/// permutations on A_i^dagger.
double adjoint_consistency(std::span<const PartialPermutation> sigmas, std::span<const DenseMatrix> mats, int N,
                           std::uint64_t term_cap = Caps{}.terms);

/// Tr((Y Y^dagger)^p).
double moment_trace(const Mat& Y, int p);

struct NormResult {
  double value = 0;
  double lower = 0;  // certified bracket
  double upper = 0;
  int iterations = 0;
  bool converged = true;
};
/// Largest singular value: dense SVD up to dimension 512, power iteration on
/// Y Y^dagger beyond, with a residual bracket.
NormResult operator_norm(const Mat& Y, int max_iter = 10000, double rel_tol = 1e-10);

struct PartialGraphValue {
  DenseMatrix tensor;  // rows: free in-slots, cols: free out-slots
  double frobenius_sq = 0;
};
/// Contracts the selected rectangles along the selected edges; every other
/// vertex of a selected rectangle is a free index. `mats` has one matrix per
/// rectangle of g.
PartialGraphValue evaluate_partial_graph(const TensorGraph& g, const Selection& s, std::span<const DenseMatrix> mats,
                                         int N, std::uint64_t term_cap = Caps{}.terms);

/// Q from a Householder QR of a seeded complex Gaussian matrix, with the
/// phases of diag(R) moved into Q.
DenseMatrix random_unitary(int dim, std::uint64_t seed);

DenseMatrix identity_matrix(int dim);

nlohmann::json matrix_to_json(const Mat& m);
/// Reads {"rows":..., "cols":..., "re":[...], "im":[...]} in row-major order.
Mat matrix_from_json(const nlohmann::json& j);

}  // namespace tte
