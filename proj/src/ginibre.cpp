#include "tte/ginibre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "tte/errors.hpp"

namespace tte {

std::vector<Permutation> enumerate_theta(int m) {
  if (m < 1) throw InputError("m must be positive");
  if (m > 8) throw CapExceeded("pairing enumeration is limited to m <= 8");
  std::vector<int> p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation::from_images(p));
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

bool is_noncrossing(const Permutation& theta) {
  const int m = theta.size();
  std::vector<std::pair<int, int>> chords;
  for (int i = 0; i < m; ++i) {
    int a = 2 * i, b = 2 * theta(i) + 1;
    if (a > b) std::swap(a, b);
    chords.emplace_back(a, b);
  }
  for (const auto& [a, b] : chords) {
    for (const auto& [c, d] : chords) {
      if (a < c && c < b && b < d) return false;
    }
  }
  return true;
}

Permutation theta_to_sigma(const Permutation& theta) {
  const int m = theta.size();
  std::vector<int> s1(static_cast<std::size_t>(m)), s2(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    s1[i] = (theta(i) + 1) % m;
    s2[theta(i)] = i;
  }
  std::vector<int> s(static_cast<std::size_t>(2 * m));
  for (int i = 0; i < m; ++i) {
    s[2 * i] = 2 * s1[i];
    s[2 * i + 1] = 2 * s2[i] + 1;
  }
  return Permutation::from_images(std::move(s));
}

PartialPermutation tau_chain(int m) {
  std::vector<int> t(static_cast<std::size_t>(2 * m), kUndefined);
  for (int i = 0; i + 1 < 2 * m; ++i) t[i] = i + 1;
  return PartialPermutation::from_images(std::move(t));
}

std::uint64_t catalan(int m) {
  std::uint64_t c = 1;
  for (int i = 0; i < m; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

std::uint64_t crossing_count(int m) { return factorial(m) - catalan(m); }

TermExponent pairing_term_exponent(const Permutation& theta, int d1, int d2, const Caps& caps) {
  if (d1 < 1 || d2 < 1) throw InputError("leg multiplicities must be positive");
  const int m = theta.size();
  const std::vector<PartialPermutation> legs{theta_to_sigma(theta), tau_chain(m)};
  const std::vector<int> mult{d1, d2};
  ReportOptions opt;
  opt.mode = SearchMode::exhaustive;
  opt.caps = caps;
  opt.certificate = false;
  const ExtremalResult r = exponent_report(legs, mult, opt);
  TermExponent t;
  t.theta = theta;
  t.noncrossing = is_noncrossing(theta);
  t.M = r.M;
  if (t.noncrossing) {
    t.expected = d1 * (1 + m);
    t.ok = t.M == t.expected;
  } else {
    t.expected = d1 * m + std::min(d1, d2);
    t.ok = t.M <= t.expected;
  }
  return t;
}

// --- model -------------------------------------------------------------------

int GinibreModel::n() const { return static_cast<int>(std::pow(N, d1) + 0.5); }
int GinibreModel::p_dim() const { return static_cast<int>(std::pow(N, d2) + 0.5); }

void GinibreModel::validate() const {
  if (m < 1 || d1 < 1 || d2 < 1 || N < 1) throw InputError("model parameters must be positive");
  if (static_cast<int>(a.size()) != m || static_cast<int>(b.size()) != m) {
    throw InputError("expected " + std::to_string(m) + " matrices A' and B'");
  }
  const int dim = n() * p_dim();
  for (const auto* list : {&a, &b}) {
    for (const auto& x : *list) {
      if (x.rows() != dim || x.cols() != dim) throw InputError("model matrices must be " + std::to_string(dim) + " square");
    }
  }
}

Mat pairing_term(const GinibreModel& model, const Permutation& theta, const Caps& caps) {
  model.validate();
  const int m = model.m;
  std::vector<PartialPermutation> legs;
  const PartialPermutation sigma = theta_to_sigma(theta);
  for (int t = 0; t < model.d1; ++t) legs.push_back(sigma);
  for (int t = 0; t < model.d2; ++t) legs.push_back(tau_chain(m));
  std::vector<DenseMatrix> mats;
  for (int i = 0; i < m; ++i) {
    mats.push_back(model.a[i]);
    mats.push_back(model.b[i]);
  }
  const EvalResult y = evaluate(legs, mats, model.N, caps.terms);
  return y.value.data * std::pow(static_cast<double>(model.N), -model.d1 * (1 + m));
}

Mat exact_expectation(const GinibreModel& model, const Caps& caps) {
  Mat sum = Mat::Zero(model.p_dim(), model.p_dim());
  for (const auto& theta : enumerate_theta(model.m)) sum += pairing_term(model, theta, caps);
  return sum;
}

Mat free_limit(const GinibreModel& model, const Caps& caps) {
  Mat sum = Mat::Zero(model.p_dim(), model.p_dim());
  for (const auto& theta : enumerate_theta(model.m)) {
    if (is_noncrossing(theta)) sum += pairing_term(model, theta, caps);
  }
  return sum;
}

BoundCheck compare_bound(const GinibreModel& model, const Caps& caps) {
  BoundCheck bc;
  bc.applicable = model.d1 > model.d2;
  bc.deviation_norm = operator_norm(exact_expectation(model, caps) - free_limit(model, caps)).value;
  bc.bound = static_cast<double>(crossing_count(model.m)) *
             std::pow(static_cast<double>(model.N), -model.d1 + std::min(model.d1, model.d2));
  bc.pass = bc.deviation_norm <= bc.bound + 1e-9;
  return bc;
}

// --- Monte Carlo -------------------------------------------------------------

namespace {

struct BlockSums {
  Mat sum;
  Eigen::MatrixXd sq_re;
  Eigen::MatrixXd sq_im;
};

// (X (x) I_p) with row index x p + a.
Mat kron_identity(const Mat& x, int p) {
  const int n = static_cast<int>(x.rows());
  Mat out = Mat::Zero(n * p, n * p);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      for (int a = 0; a < p; ++a) out(r * p + a, c * p + a) = x(r, c);
    }
  }
  return out;
}

BlockSums run_block(const GinibreModel& model, int count, std::uint64_t seed, int block) {
  const int n = model.n();
  const int p = model.p_dim();
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss(0.0, std::sqrt(1.0 / (2.0 * n)));
  BlockSums s{Mat::Zero(p, p), Eigen::MatrixXd::Zero(p, p), Eigen::MatrixXd::Zero(p, p)};
  Mat x(n, n);
  for (int t = 0; t < count; ++t) {
    for (int c = 0; c < n; ++c) {
      for (int r = 0; r < n; ++r) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        x(r, c) = cd(re, im);
      }
    }
    const Mat xk = kron_identity(x, p);
    const Mat xs = xk.adjoint();
    Mat w = Mat::Identity(n * p, n * p);
    for (int i = 0; i < model.m; ++i) w = w * model.a[i].data * xk * model.b[i].data * xs;
    Mat v = Mat::Zero(p, p);
    for (int xi = 0; xi < n; ++xi) v += w.block(xi * p, xi * p, p, p);
    v /= static_cast<double>(n);
    s.sum += v;
    s.sq_re += v.real().cwiseAbs2();
    s.sq_im += v.imag().cwiseAbs2();
  }
  return s;
}

}  // namespace

MonteCarlo mc_expectation(const GinibreModel& model, int samples, std::uint64_t seed, int threads) {
  model.validate();
  if (samples < 100) throw InputError("Monte Carlo needs at least 100 samples");
  const int blocks = (samples + kMcBlock - 1) / kMcBlock;
  std::vector<BlockSums> parts(static_cast<std::size_t>(blocks));
  auto work = [&](int w, int nw) {
    for (int b = w; b < blocks; b += nw) {
      const int count = std::min(kMcBlock, samples - b * kMcBlock);
      parts[b] = run_block(model, count, seed, b);
    }
  };
  const int nw = std::clamp(threads, 1, blocks);
  if (nw == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(work, w, nw);
    for (auto& t : pool) t.join();
  }
  const int p = model.p_dim();
  BlockSums total{Mat::Zero(p, p), Eigen::MatrixXd::Zero(p, p), Eigen::MatrixXd::Zero(p, p)};
  for (const auto& part : parts) {
    total.sum += part.sum;
    total.sq_re += part.sq_re;
    total.sq_im += part.sq_im;
  }
  MonteCarlo mc;
  mc.samples = samples;
  const double s = samples;
  mc.estimate = total.sum / s;
  auto stderr_of = [&](const Eigen::MatrixXd& sq, const Eigen::MatrixXd& mean) {
    Eigen::MatrixXd var = (sq / s - mean.cwiseAbs2()) * (s / (s - 1));
    return Eigen::MatrixXd(var.cwiseMax(0.0).cwiseSqrt() / std::sqrt(s));
  };
  mc.stderr_re = stderr_of(total.sq_re, mc.estimate.real());
  mc.stderr_im = stderr_of(total.sq_im, mc.estimate.imag());
  return mc;
}

double max_z(const Mat& exact, const MonteCarlo& mc) {
  double worst = 0;
  auto z = [](double diff, double se) {
    if (se > 0) return std::abs(diff) / se;
    return std::abs(diff) <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
  };
  for (Eigen::Index r = 0; r < exact.rows(); ++r) {
    for (Eigen::Index c = 0; c < exact.cols(); ++c) {
      const cd d = exact(r, c) - mc.estimate(r, c);
      worst = std::max({worst, z(d.real(), mc.stderr_re(r, c)), z(d.imag(), mc.stderr_im(r, c))});
    }
  }
  return worst;
}

GinibreModel random_model(int m, int d1, int d2, int N, std::uint64_t seed) {
  GinibreModel model{m, d1, d2, N, {}, {}};
  const int dim = model.n() * model.p_dim();
  for (int i = 0; i < m; ++i) {
    model.a.push_back(random_unitary(dim, seed * 1000 + 2 * i));
    model.b.push_back(random_unitary(dim, seed * 1000 + 2 * i + 1));
  }
  return model;
}

GinibreModel identity_model(int m, int d1, int d2, int N) {
  GinibreModel model{m, d1, d2, N, {}, {}};
  const int dim = model.n() * model.p_dim();
  for (int i = 0; i < m; ++i) {
    model.a.push_back(identity_matrix(dim));
    model.b.push_back(identity_matrix(dim));
  }
  return model;
}

}  // namespace tte
