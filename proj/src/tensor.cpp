#include "tte/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tte/errors.hpp"

namespace tte {

namespace {

std::uint64_t ipow(std::uint64_t base, int e, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (int i = 0; i < e; ++i) {
    if (v > cap / std::max<std::uint64_t>(base, 1)) return cap + 1;
    v *= base;
  }
  return v;
}

int leg_dim(int N, int k, std::uint64_t dim_cap) {
  const std::uint64_t d = ipow(static_cast<std::uint64_t>(N), k, dim_cap);
  if (d > dim_cap) {
    throw CapExceeded("matrix dimension " + std::to_string(N) + "^" + std::to_string(k) + " exceeds " +
                      std::to_string(dim_cap));
  }
  return static_cast<int>(d);
}

}  // namespace

bool DenseMatrix::is_unitary(double tol) const {
  if (data.rows() != data.cols()) return false;
  Mat d = data.adjoint() * data - Mat::Identity(data.rows(), data.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

DenseMatrix make_u_pi(const Permutation& pi, int N, std::uint64_t dim_cap) {
  const int k = pi.size();
  if (N < 1) throw InputError("N must be positive");
  const int dim = leg_dim(N, k, dim_cap);
  DenseMatrix u{Mat::Zero(dim, dim), {}};
  for (int c = 0; c < k; ++c) u.legs.push_back({c, N, N});
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  for (int row = 0; row < dim; ++row) {
    // row digits i_1..i_k; column digit of leg c is i_{pi(c)}
    int rem = row;
    for (int c = k - 1; c >= 0; --c) {
      idx[c] = rem % N;
      rem /= N;
    }
    int col = 0;
    for (int c = 0; c < k; ++c) col = col * N + idx[pi(c)];
    u.data(row, col) = 1.0;
  }
  return u;
}

DenseMatrix u_for_pairing(const Permutation& pi, int N, std::uint64_t dim_cap) {
  return make_u_pi(invert(pi), N, dim_cap);
}

std::vector<DenseMatrix> u_tuple(const BluePairing& b, int N, std::uint64_t dim_cap) {
  std::vector<DenseMatrix> out;
  for (int r = 0; r < b.num_rects(); ++r) out.push_back(u_for_pairing(Permutation::from_images(b.perm(r)), N, dim_cap));
  return out;
}

// --- contraction engine ------------------------------------------------------

Mat contract(int N, int num_vars, const std::vector<Factor>& factors, const std::vector<int>& out_row_vars,
             const std::vector<int>& out_col_vars, std::uint64_t term_cap) {
  const std::uint64_t terms = ipow(static_cast<std::uint64_t>(N), num_vars, term_cap);
  if (terms > term_cap) {
    throw CapExceeded("contraction needs " + std::to_string(N) + "^" + std::to_string(num_vars) + " terms, cap is " +
                      std::to_string(term_cap));
  }
  const int F = static_cast<int>(factors.size());
  const int out_rows = static_cast<int>(ipow(N, static_cast<int>(out_row_vars.size()), UINT64_MAX / 2));
  const int out_cols = static_cast<int>(ipow(N, static_cast<int>(out_col_vars.size()), UINT64_MAX / 2));
  Mat out = Mat::Zero(out_rows, out_cols);

  // Index slots: 2 per factor (row, col), then the output row and col.
  const int slots = 2 * F + 2;
  struct Effect {
    int slot;
    long stride;
  };
  std::vector<std::vector<Effect>> effects(static_cast<std::size_t>(num_vars));
  auto add = [&](const std::vector<int>& vars, int slot) {
    long stride = 1;
    for (int c = static_cast<int>(vars.size()) - 1; c >= 0; --c) {
      if (vars[c] < 0 || vars[c] >= num_vars) throw InputError("contraction variable out of range");
      effects[vars[c]].push_back({slot, stride});
      stride *= N;
    }
  };
  std::vector<const cd*> data(static_cast<std::size_t>(F));
  std::vector<long> ld(static_cast<std::size_t>(F));
  for (int f = 0; f < F; ++f) {
    const Mat& m = *factors[f].mat;
    const long want_r = static_cast<long>(ipow(N, static_cast<int>(factors[f].row_vars.size()), UINT64_MAX / 2));
    const long want_c = static_cast<long>(ipow(N, static_cast<int>(factors[f].col_vars.size()), UINT64_MAX / 2));
    if (m.rows() != want_r || m.cols() != want_c) {
      throw InputError("factor " + std::to_string(f) + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                       ", expected " + std::to_string(want_r) + "x" + std::to_string(want_c));
    }
    data[f] = m.data();
    ld[f] = m.rows();
    add(factors[f].row_vars, 2 * f);
    add(factors[f].col_vars, 2 * f + 1);
  }
  add(out_row_vars, 2 * F);
  add(out_col_vars, 2 * F + 1);

  std::vector<long> idx(static_cast<std::size_t>(slots), 0);
  std::vector<int> value(static_cast<std::size_t>(num_vars), 0);
  cd* out_data = out.data();
  const long out_ld = out.rows();
  for (std::uint64_t t = 0; t < terms; ++t) {
    cd prod = 1.0;
    for (int f = 0; f < F && prod != 0.0; ++f) prod *= data[f][idx[2 * f] + idx[2 * f + 1] * ld[f]];
    out_data[idx[2 * F] + idx[2 * F + 1] * out_ld] += prod;
    // odometer, last variable fastest
    for (int v = num_vars - 1; v >= 0; --v) {
      if (value[v] + 1 < N) {
        ++value[v];
        for (const auto& e : effects[v]) idx[e.slot] += e.stride;
        break;
      }
      for (const auto& e : effects[v]) idx[e.slot] -= e.stride * (N - 1);
      value[v] = 0;
    }
  }
  return out;
}

EvalResult evaluate(std::span<const PartialPermutation> sigmas, std::span<const DenseMatrix> mats, int N,
                    std::uint64_t term_cap) {
  if (sigmas.empty()) throw InputError("at least one leg is required");
  if (N < 1) throw InputError("N must be positive");
  const int k = static_cast<int>(sigmas.size());
  const int m = sigmas.front().size();
  for (const auto& s : sigmas) {
    if (s.size() != m) throw InputError("permutations of different sizes");
  }
  if (static_cast<int>(mats.size()) != m) {
    throw InputError("expected " + std::to_string(m) + " matrices, got " + std::to_string(mats.size()));
  }
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(k), -1));
  std::vector<std::vector<int>> cols = rows;
  EvalResult res;
  std::vector<int> out_rows, out_cols;
  int nv = 0;
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < m; ++i) {
      if (sigmas[j].defined(i)) {
        cols[i][j] = nv;
        rows[sigmas[j](i)][j] = nv;
        ++nv;
      }
    }
  }
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < m; ++i) {
      if (!sigmas[j].in_image(i)) {
        rows[i][j] = nv;
        out_rows.push_back(nv++);
        res.row_slots.push_back({j, i});
      }
    }
  }
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < m; ++i) {
      if (!sigmas[j].defined(i)) {
        cols[i][j] = nv;
        out_cols.push_back(nv++);
        res.col_slots.push_back({j, i});
      }
    }
  }
  std::vector<Factor> factors;
  for (int i = 0; i < m; ++i) factors.push_back({&mats[i].data, rows[i], cols[i]});
  res.value.data = contract(N, nv, factors, out_rows, out_cols, term_cap);
  return res;
}

double adjoint_consistency(std::span<const PartialPermutation> sigmas, std::span<const DenseMatrix> mats, int N,
                           std::uint64_t term_cap) {
  const EvalResult y = evaluate(sigmas, mats, N, term_cap);
  std::vector<PartialPermutation> inv;
  for (const auto& s : sigmas) inv.push_back(invert(s));
  std::vector<DenseMatrix> adj;
  for (const auto& a : mats) adj.push_back({a.data.adjoint(), a.legs});
  const EvalResult ys = evaluate(inv, adj, N, term_cap);
  const Mat yd = y.value.data.adjoint();
  if (yd.rows() != ys.value.data.rows() || yd.cols() != ys.value.data.cols()) {
    throw VerificationFailure("adjoint formula has the wrong shape");
  }
  if (yd.size() == 0) return 0.0;
  return (yd - ys.value.data).cwiseAbs().maxCoeff();
}

double moment_trace(const Mat& Y, int p) {
  if (p < 1) throw InputError("moment order p must be positive");
  const Mat B = Y * Y.adjoint();
  Mat P = B;
  for (int i = 1; i < p; ++i) P = P * B;
  return P.trace().real();
}

NormResult operator_norm(const Mat& Y, int max_iter, double rel_tol) {
  NormResult res;
  if (Y.size() == 0) return res;
  if (std::max(Y.rows(), Y.cols()) <= 512) {
    Eigen::JacobiSVD<Mat> svd(Y);
    res.value = res.lower = res.upper = svd.singularValues()(0);
    return res;
  }
  const Mat B = Y.rows() <= Y.cols() ? Mat(Y * Y.adjoint()) : Mat(Y.adjoint() * Y);
  Eigen::VectorXcd x(B.rows());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = cd(1.0 + 0.001 * static_cast<double>(i % 97), 0.0);
  x.normalize();
  double lambda = 0;
  res.converged = false;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXcd y = B * x;
    const double next = x.dot(y).real();
    const double ny = y.norm();
    if (ny == 0) {
      lambda = 0;
      res.iterations = it;
      res.converged = true;
      break;
    }
    const double resid = (y - next * x).norm();
    x = y / ny;
    res.iterations = it;
    if (std::abs(next - lambda) <= rel_tol * std::abs(next) && resid <= std::sqrt(rel_tol) * std::abs(next)) {
      lambda = next;
      res.converged = true;
      break;
    }
    lambda = next;
  }
  const Eigen::VectorXcd y = B * x;
  const double rq = x.dot(y).real();
  const double resid = (y - rq * x).norm();
  res.value = std::sqrt(std::max(rq, 0.0));
  res.lower = res.value;
  res.upper = std::min(std::sqrt(rq + resid), Y.norm());
  return res;
}

PartialGraphValue evaluate_partial_graph(const TensorGraph& g, const Selection& s, std::span<const DenseMatrix> mats,
                                         int N, std::uint64_t term_cap) {
  validate(g, s);
  if (static_cast<int>(mats.size()) != g.num_rects()) throw InputError("expected one matrix per rectangle");
  const int k = g.k();
  const int n = g.num_rects();
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(k), -1));
  std::vector<std::vector<int>> cols = rows;
  int nv = 0;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    if (!s.edges[e]) continue;
    const Edge& ed = g.edges()[e];
    cols[ed.src][ed.color] = nv;
    rows[ed.dst][ed.color] = nv;
    ++nv;
  }
  std::vector<int> out_rows, out_cols;
  for (int c = 0; c < k; ++c) {
    for (int r = 0; r < n; ++r) {
      if (s.rects[r] && rows[r][c] < 0) {
        rows[r][c] = nv;
        out_rows.push_back(nv++);
      }
    }
  }
  for (int c = 0; c < k; ++c) {
    for (int r = 0; r < n; ++r) {
      if (s.rects[r] && cols[r][c] < 0) {
        cols[r][c] = nv;
        out_cols.push_back(nv++);
      }
    }
  }
  std::vector<Factor> factors;
  for (int r = 0; r < n; ++r) {
    if (s.rects[r]) factors.push_back({&mats[r].data, rows[r], cols[r]});
  }
  PartialGraphValue v;
  v.tensor.data = contract(N, nv, factors, out_rows, out_cols, term_cap);
  v.frobenius_sq = v.tensor.data.squaredNorm();
  return v;
}

DenseMatrix random_unitary(int dim, std::uint64_t seed) {
  if (dim < 1) throw InputError("dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat z(dim, dim);
  for (int c = 0; c < dim; ++c) {
    for (int r = 0; r < dim; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z(r, c) = cd(re, im);
    }
  }
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ();
  const Mat& rmat = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const cd d = rmat(j, j);
    const double a = std::abs(d);
    if (a > 0) q.col(j) *= d / a;
  }
  return {q, {}};
}

DenseMatrix identity_matrix(int dim) { return {Mat::Identity(dim, dim), {}}; }

nlohmann::json matrix_to_json(const Mat& m) {
  std::vector<double> re, im;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

Mat matrix_from_json(const nlohmann::json& j) {
  try {
    const long rows = j.at("rows").get<long>();
    const long cols = j.at("cols").get<long>();
    const auto re = j.at("re").get<std::vector<double>>();
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("im")) im = j.at("im").get<std::vector<double>>();
    if (rows < 1 || cols < 1 || re.size() != static_cast<std::size_t>(rows * cols) || im.size() != re.size()) {
      throw InputError("matrix entry count does not match rows*cols");
    }
    Mat m(rows, cols);
    for (long r = 0; r < rows; ++r) {
      for (long c = 0; c < cols; ++c) m(r, c) = cd(re[r * cols + c], im[r * cols + c]);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed matrix JSON: ") + e.what());
  }
}

}  // namespace tte
