#include "tte/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <thread>

#include "tte/errors.hpp"
#include "tte/extremal.hpp"
#include "tte/ginibre.hpp"
#include "tte/graph.hpp"
#include "tte/perm.hpp"
#include "tte/tensor.hpp"

namespace tte {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  const int nw = std::clamp(threads, 1, std::max(n, 1));
  if (nw == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nw));
  std::vector<std::thread> pool;
  for (int w = 0; w < nw; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

using nlohmann::json;

std::vector<Permutation> all_perms(int m) {
  std::vector<int> p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation::from_images(p));
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// All k-tuples over `perms`, as index vectors in lexicographic order.
std::vector<std::vector<int>> tuples(int count, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> t(static_cast<std::size_t>(k), 0);
  while (true) {
    out.push_back(t);
    int j = k - 1;
    while (j >= 0 && ++t[j] == count) t[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

// Scalar value equals `target` after rounding, with negligible imaginary part.
bool exact_integer(cd v, double target) {
  const double scale = std::max(1.0, std::abs(v));
  if (std::abs(v.imag()) > 1e-9 * scale) return false;
  const double r = std::round(v.real());
  return std::abs(v.real() - r) <= 1e-9 * scale && r == target;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(c)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// Dense oracle with the optional self-test corruption.
cd oracle_scalar(std::span<const PartialPermutation> sigmas, std::span<const DenseMatrix> mats, int N,
                 const VerifyOptions& opt) {
  cd v = evaluate(sigmas, mats, N, opt.caps.terms).value.data(0, 0);
  if (opt.inject_fault) v *= 1.5;
  return v;
}

// --- 1, 2: U_pi maximizers and sampled upper bound ----------------------------

struct InstanceCheck {
  int M = 0;
  bool identity_ok = true;  // every U_pi tuple evaluates to N^{#cycles}
  bool max_ok = false;      // max over tuples equals N^M
  double max_random = 0;    // largest |value| over random unitary tuples
  bool random_ok = true;
};

InstanceCheck check_instance(const std::vector<PartialPermutation>& sigmas, int N, int random_tuples,
                             std::uint64_t seed, const VerifyOptions& opt) {
  const int m = sigmas.front().size();
  const int k = static_cast<int>(sigmas.size());
  const TensorGraph g = build(sigmas, m);
  InstanceCheck ic;
  ic.M = m_exhaustive(g, {opt.caps.pairings}).M;
  const double target = std::pow(static_cast<double>(N), ic.M);
  double best = 0;
  BluePairing b(k, m);
  do {
    const auto mats = u_tuple(b, N, opt.caps.dim);
    const cd v = oracle_scalar(sigmas, mats, N, opt);
    if (!exact_integer(v, std::pow(static_cast<double>(N), cycle_count(g, b)))) ic.identity_ok = false;
    best = std::max(best, std::abs(v));
  } while (b.next());
  ic.max_ok = exact_integer(best, target);
  const int dim = static_cast<int>(std::pow(N, k) + 0.5);
  for (int t = 0; t < random_tuples; ++t) {
    std::vector<DenseMatrix> mats;
    for (int i = 0; i < m; ++i) mats.push_back(random_unitary(dim, mix(seed, t, i)));
    const double a = std::abs(oracle_scalar(sigmas, mats, N, opt));
    ic.max_random = std::max(ic.max_random, a);
    if (a > target + 1e-6) ic.random_ok = false;
  }
  return ic;
}

CriterionResult criterion1(const VerifyOptions& opt) {
  const auto perms = all_perms(3);
  const auto pairs = tuples(static_cast<int>(perms.size()), 2);
  std::vector<InstanceCheck> res(pairs.size());
  parallel_for(static_cast<int>(pairs.size()), opt.threads, [&](int i) {
    std::vector<PartialPermutation> s{perms[pairs[i][0]], perms[pairs[i][1]]};
    res[i] = check_instance(s, opt.N, 100, mix(opt.seed, 1, i), opt);
  });
  int identity_fail = 0, max_fail = 0, random_fail = 0;
  double worst_ratio = 0;
  json table = json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    identity_fail += !res[i].identity_ok;
    max_fail += !res[i].max_ok;
    random_fail += !res[i].random_ok;
    worst_ratio = std::max(worst_ratio, res[i].max_random / std::pow(opt.N, res[i].M));
    table.push_back({to_cycle_string(perms[pairs[i][0]]), to_cycle_string(perms[pairs[i][1]]), res[i].M});
  }
  CriterionResult r{1, "two legs: max over U_pi tuples equals N^M, random unitaries stay below", false, {}};
  r.details = {{"pairs", pairs.size()},          {"N", opt.N},
               {"u_tuples_per_pair", 8},         {"identity_failures", identity_fail},
               {"max_failures", max_fail},       {"random_violations", random_fail},
               {"max_random_over_bound", worst_ratio}, {"M_table", table}};
  r.pass = identity_fail == 0 && max_fail == 0 && random_fail == 0;
  return r;
}

CriterionResult criterion2(const VerifyOptions& opt) {
  std::mt19937_64 rng(mix(opt.seed, 2));
  std::vector<std::vector<PartialPermutation>> cases;
  for (int t = 0; t < 20; ++t) {
    const int m = 2 + t % 2;
    const auto perms = all_perms(m);
    std::vector<PartialPermutation> s;
    for (int j = 0; j < 3; ++j) s.push_back(perms[rng() % perms.size()]);
    cases.push_back(std::move(s));
  }
  std::vector<InstanceCheck> res(cases.size());
  parallel_for(static_cast<int>(cases.size()), opt.threads,
               [&](int i) { res[i] = check_instance(cases[i], opt.N, 20, mix(opt.seed, 2, i), opt); });
  int fails = 0;
  json table = json::array();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const bool ok = res[i].identity_ok && res[i].max_ok && res[i].random_ok;
    fails += !ok;
    json legs = json::array();
    for (const auto& s : cases[i]) legs.push_back(to_cycle_string(Permutation(s)));
    table.push_back({{"sigmas", legs}, {"M", res[i].M}, {"ok", ok}});
  }
  CriterionResult r{2, "three legs: U_pi tuples evaluate to N^#cycles, maximum N^M", fails == 0, {}};
  r.details = {{"triples", cases.size()}, {"N", opt.N}, {"failures", fails}, {"cases", table}};
  return r;
}

// --- 3, 4: closed forms -----------------------------------------------------------

CriterionResult criterion3(const VerifyOptions& opt) {
  int fails = 0;
  const auto perms = all_perms(4);
  for (const auto& p : perms) {
    const std::vector<PartialPermutation> s{p};
    const int M = m_exhaustive(build(s, 4), {opt.caps.pairings}).M;
    std::vector<DenseMatrix> ids(4, identity_matrix(opt.N));
    const cd v = oracle_scalar(s, ids, opt.N, opt);
    const int cyc = cycle_count(p);
    if (M != cyc || !exact_integer(v, std::pow(static_cast<double>(opt.N), cyc))) ++fails;
  }
  CriterionResult r{3, "one leg: M = #cycles and identities give N^#cycles", fails == 0, {}};
  r.details = {{"permutations", perms.size()}, {"N", opt.N}, {"failures", fails}};
  return r;
}

CriterionResult criterion4(const VerifyOptions& opt) {
  const Permutation s1(parse_permutation("(1 6 4 2 5 3)", 6));
  const Permutation s2(parse_permutation("(1 2 3 4 5 6)", 6));
  const Permutation theta(parse_permutation("(1 5)(2 6)", 6));
  const std::vector<PartialPermutation> legs{s1, s2};
  const int r1 = backward_count(s1), r2 = backward_count(s2);
  const int bound = backward_upper_bound(legs);
  const Permutation c1 = conjugate(s1, theta), c2 = conjugate(s2, theta);
  const int rc1 = backward_count(c1), rc2 = backward_count(c2);
  const std::vector<Permutation> ps{s1, s2};
  const ConjugationResult best = min_conjugate_backward(ps, opt.caps.conjugation_m);
  const int M = m_exhaustive(build(legs, 6), {opt.caps.pairings}).M;
  CriterionResult r{4, "backward bounds on the six-point example", false, {}};
  r.details = {{"R_sigma1", r1},
               {"R_sigma2", r2},
               {"backward_bound", bound},
               {"conjugate_sigma1", to_cycle_string(c1)},
               {"R_conjugates", {rc1, rc2}},
               {"conjugated_bound", rc1 + rc2},
               {"min_conjugate_total", best.total},
               {"min_conjugator", to_cycle_string(best.theta)},
               {"M", M}};
  r.pass = r1 == 4 && r2 == 1 && bound == 5 && rc1 == 2 && rc2 == 2 && best.total == 4 && M <= 4 &&
           M <= best.total && c1 == Permutation(parse_permutation("(5 2 4 6 1 3)", 6));
  return r;
}

// --- 5, 6: partial graphs -------------------------------------------------------

struct PartialJob {
  const TensorGraph* g;
  Selection s;
};

// Every partial graph of g: rectangle subsets, then edge subsets among them.
template <class F>
void for_each_selection(const TensorGraph& g, F&& fn) {
  const int n = g.num_rects();
  const int E = static_cast<int>(g.edges().size());
  for (int rm = 0; rm < (1 << n); ++rm) {
    std::vector<int> inside;
    for (int e = 0; e < E; ++e) {
      const Edge& ed = g.edges()[e];
      if ((rm >> ed.src & 1) && (rm >> ed.dst & 1)) inside.push_back(e);
    }
    for (int em = 0; em < (1 << inside.size()); ++em) {
      Selection s = Selection::empty(g);
      for (int r = 0; r < n; ++r) s.rects[r] = static_cast<char>(rm >> r & 1);
      for (std::size_t t = 0; t < inside.size(); ++t) s.edges[inside[t]] = static_cast<char>(em >> t & 1);
      fn(s);
    }
  }
}

std::string selection_key(const TensorGraph& g, const Selection& s) {
  std::string key;
  for (int r = 0; r < g.num_rects(); ++r) key += s.rects[r] ? std::to_string(g.rects()[r].index) + "," : "";
  key += "|";
  std::vector<std::tuple<int, int, int>> es;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    if (s.edges[e]) es.emplace_back(g.edges()[e].src, g.edges()[e].dst, g.edges()[e].color);
  }
  std::sort(es.begin(), es.end());
  for (auto [a, b, c] : es) key += std::to_string(a) + ">" + std::to_string(b) + ":" + std::to_string(c) + ";";
  return key;
}

CriterionResult criterion5(const VerifyOptions& opt) {
  const int k = 2;
  std::vector<TensorGraph> graphs;
  for (int m = 1; m <= opt.max_m; ++m) {
    const auto perms = all_perms(m);
    for (const auto& t : tuples(static_cast<int>(perms.size()), k)) {
      std::vector<PartialPermutation> s;
      for (int j : t) s.push_back(perms[j]);
      graphs.push_back(build(s, m));
    }
  }
  // Partial graphs with the same rectangles and edges evaluate identically.
  std::vector<PartialJob> jobs;
  std::set<std::string> seen;
  std::uint64_t simple_total = 0;
  for (const auto& g : graphs) {
    for_each_selection(g, [&](const Selection& s) {
      if (!is_simple(g, s)) return;
      ++simple_total;
      if (seen.insert(std::to_string(g.num_rects()) + "#" + selection_key(g, s)).second) jobs.push_back({&g, s});
    });
  }
  json per_n = json::array();
  bool pass = true;
  for (int N : {opt.N, opt.N + 1}) {
    const int dim = N * N;
    std::vector<DenseMatrix> unitaries;
    for (int i = 0; i < opt.max_m; ++i) unitaries.push_back(random_unitary(dim, mix(opt.seed, 5, N, i)));
    std::vector<double> err(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), opt.threads, [&](int j) {
      const TensorGraph& g = *jobs[j].g;
      std::vector<DenseMatrix> mats;
      for (const auto& l : g.rects()) mats.push_back(unitaries[l.index]);
      const auto v = evaluate_partial_graph(g, jobs[j].s, mats, N, opt.caps.terms);
      const double expect = std::pow(static_cast<double>(N), k * jobs[j].s.num_rects() - jobs[j].s.num_edges());
      const double fro = opt.inject_fault ? v.frobenius_sq * 1.5 : v.frobenius_sq;
      err[j] = std::abs(fro - expect) / expect;
    });
    const double worst = jobs.empty() ? 0.0 : *std::max_element(err.begin(), err.end());
    const auto bad = std::count_if(err.begin(), err.end(), [](double e) { return e > 1e-9; });
    pass = pass && bad == 0;
    per_n.push_back({{"N", N}, {"max_rel_error", worst}, {"failures", bad}});
  }
  CriterionResult r{5, "Frobenius norm of simple partial graphs is N^(kn-e)", pass, {}};
  r.details = {{"graphs", graphs.size()},
               {"simple_partial_graphs", simple_total},
               {"distinct_evaluated", jobs.size()},
               {"by_N", per_n}};
  return r;
}

CriterionResult criterion6(const VerifyOptions& opt) {
  std::vector<TensorGraph> graphs;
  for (int k = 1; k <= opt.max_k; ++k) {
    for (int m = 1; m <= opt.max_m; ++m) {
      const auto perms = all_perms(m);
      for (const auto& t : tuples(static_cast<int>(perms.size()), k)) {
        std::vector<PartialPermutation> s;
        for (int j : t) s.push_back(perms[j]);
        graphs.push_back(build(s, m));
      }
    }
  }
  std::vector<std::uint64_t> checked(graphs.size()), disagree(graphs.size()), simple(graphs.size());
  parallel_for(static_cast<int>(graphs.size()), opt.threads, [&](int i) {
    for_each_selection(graphs[i], [&](const Selection& s) {
      ++checked[i];
      const bool a = is_simple(graphs[i], s);
      const bool b = !brute_force_has_cycle(graphs[i], s, opt.caps.brute_force);
      simple[i] += a;
      disagree[i] += (a != b) || opt.inject_fault;
    });
  });
  const auto sum = [](const std::vector<std::uint64_t>& v) { return std::accumulate(v.begin(), v.end(), std::uint64_t{0}); };
  CriterionResult r{6, "peeling simplicity test agrees with brute force", sum(disagree) == 0, {}};
  r.details = {{"graphs", graphs.size()},
               {"partial_graphs", sum(checked)},
               {"simple", sum(simple)},
               {"disagreements", sum(disagree)}};
  return r;
}

// --- 7: moments ---------------------------------------------------------------

CriterionResult criterion7(const VerifyOptions& opt) {
  const int m = 3;
  const std::vector<PartialPermutation> s{parse_permutation("1>2,2>3", m), parse_permutation("(1 2 3)", m),
                                          parse_permutation("(1 2 3)", m)};
  const TensorGraph g = build(s, m);
  const ExtremalResult ex = m_exhaustive(g, {opt.caps.pairings});
  const auto mats = u_tuple(ex.witness, opt.N, opt.caps.dim);
  Mat Y = evaluate(s, mats, opt.N, opt.caps.terms).value.data;
  if (opt.inject_fault) Y *= 1.5;
  bool pass = true;
  json moments = json::array();
  const NormResult norm = operator_norm(Y);
  for (int p = 1; p <= 3; ++p) {
    const double t = moment_trace(Y, p);
    const double expect = std::pow(static_cast<double>(opt.N), moment_exponent(s, p, ex.M));
    const double rel = rel_err(t, expect);
    const bool sandwich = std::pow(norm.value, 2 * p) <= t * (1 + 1e-9) &&
                          t <= static_cast<double>(Y.rows()) * std::pow(norm.value, 2 * p) * (1 + 1e-9);
    pass = pass && rel <= 1e-9 && sandwich;
    moments.push_back({{"p", p}, {"trace", t}, {"expected", expect}, {"rel_error", rel}, {"sandwich_ok", sandwich}});
  }
  const double norm_expect = std::pow(static_cast<double>(opt.N), ex.M);
  const double norm_rel = rel_err(norm.value, norm_expect);
  pass = pass && norm_rel <= 1e-9;
  json graph_checks = json::array();
  for (int p = 1; p <= 2; ++p) {
    const TensorGraph gm = build_moment(s, m, p);
    const ExtremalResult local = m_local_search(gm, 32, mix(opt.seed, 7, p));
    SearchOptions so;
    so.node_limit = opt.caps.pairings;
    so.incumbent = &local.witness;
    const ExtremalResult mm = m_exhaustive(gm, so);
    const int formula = moment_exponent(s, p, ex.M);
    pass = pass && mm.M == formula;
    graph_checks.push_back({{"p", p}, {"moment_graph_M", mm.M}, {"formula", formula}});
  }
  const double adj = adjoint_consistency(s, mats, opt.N, opt.caps.terms);
  pass = pass && adj <= 1e-9;
  json w = json::array();
  for (auto x : ex.witness.ranks()) w.push_back(x);
  CriterionResult r{7, "moments and operator norm at the maximizing U_pi tuple", pass, {}};
  r.details = {{"M", ex.M},           {"witness_ranks", w},      {"N", opt.N},
               {"moments", moments},  {"operator_norm", norm.value}, {"norm_expected", norm_expect},
               {"norm_rel_error", norm_rel}, {"moment_graphs", graph_checks}, {"adjoint_deviation", adj}};
  return r;
}

// --- 8: closed form with increasing cycles -----------------------------------

CriterionResult criterion8(const VerifyOptions& opt) {
  const Permutation sigma(parse_permutation("1>3,2>1,3>2", 3));
  const Permutation gamma = Permutation::increasing_cycle(3);
  const int k = 3;
  const std::vector<PartialPermutation> legs{sigma, gamma, gamma};
  const int M = m_exhaustive(build(legs, 3), {opt.caps.pairings}).M;
  const BackwardFormula f = multi_backward_formula(sigma, k);
  CriterionResult r{8, "M(sigma, gamma, gamma) = R(sigma) + k - 1", false, {}};
  r.details = {{"M", M}, {"R", backward_count(sigma)}, {"K", f.K}, {"applicable", f.applicable}, {"formula", f.value}};
  r.pass = M == 4 && f.value == 4 && f.K == 1 && f.applicable;
  return r;
}

// --- 9-11: Ginibre -------------------------------------------------------------

CriterionResult criterion9(const VerifyOptions& opt) {
  struct Case {
    int m, d1, d2;
  };
  std::vector<Case> cases;
  for (int m = 1; m <= 3; ++m) {
    for (int d1 = 1; d1 <= 2; ++d1) cases.push_back({m, d1, 1});
  }
  std::vector<json> rows(cases.size());
  std::vector<char> ok(cases.size(), 0);
  parallel_for(static_cast<int>(cases.size()), opt.threads, [&](int i) {
    const auto [m, d1, d2] = cases[i];
    std::uint64_t noncrossing = 0;
    bool all_ok = true, r_ok = true;
    json terms = json::array();
    for (const auto& theta : enumerate_theta(m)) {
      const TermExponent t = pairing_term_exponent(theta, d1, d2, opt.caps);
      noncrossing += t.noncrossing;
      all_ok = all_ok && t.ok;
      r_ok = r_ok && backward_count(theta_to_sigma(theta)) == m + 1;
      json th = json::array();
      for (int v : theta.images()) th.push_back(v + 1);
      terms.push_back({{"theta", th}, {"noncrossing", t.noncrossing}, {"M", t.M}, {"expected", t.expected}, {"ok", t.ok}});
    }
    const bool cat_ok = noncrossing == catalan(m);
    ok[i] = all_ok && r_ok && cat_ok;
    rows[i] = {{"m", m}, {"d1", d1}, {"d2", d2}, {"noncrossing", noncrossing}, {"catalan", catalan(m)},
               {"R_ok", r_ok}, {"pairings", terms}};
  });
  CriterionResult r{9, "non-crossing pairings reach d1(1+m), crossing ones stay below d1 m + min(d1,d2)", false, {}};
  r.pass = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
  r.details = {{"cases", rows}};
  return r;
}

CriterionResult criterion10(const VerifyOptions& opt) {
  bool pass = true;
  json small = json::array();
  for (int m = 1; m <= 2; ++m) {
    const GinibreModel model = random_model(m, 2, 1, opt.N, mix(opt.seed, 10, m));
    const BoundCheck bc = compare_bound(model, opt.caps);
    pass = pass && bc.deviation_norm == 0.0;
    small.push_back({{"m", m}, {"deviation_norm", bc.deviation_norm}});
  }
  const GinibreModel model = random_model(3, 2, 1, opt.N, mix(opt.seed, 10, 3));
  const Mat exact = exact_expectation(model, opt.caps);
  const Mat free = free_limit(model, opt.caps);
  Mat crossing = Mat::Zero(exact.rows(), exact.cols());
  for (const auto& theta : enumerate_theta(3)) {
    if (!is_noncrossing(theta)) crossing += pairing_term(model, theta, opt.caps);
  }
  const double split = (exact - free - crossing).cwiseAbs().maxCoeff() / std::max(1.0, exact.cwiseAbs().maxCoeff());
  const BoundCheck bc = compare_bound(model, opt.caps);
  pass = pass && bc.pass && crossing_count(3) == 1 && split <= 1e-9;
  CriterionResult r{10, "distance to the circular limit is at most C(m) N^(d2-d1)", pass, {}};
  r.details = {{"m", 3},           {"d1", 2},        {"d2", 1},         {"N", opt.N},
               {"C", crossing_count(3)}, {"deviation_norm", bc.deviation_norm}, {"bound", bc.bound},
               {"split_error", split}, {"small_m", small}};
  return r;
}

CriterionResult criterion11(const VerifyOptions& opt) {
  int entries = 0, within = 0;
  json runs = json::array();
  for (int t = 0; t < opt.mc_seeds; ++t) {
    const GinibreModel model = random_model(2, 1, 1, opt.N, mix(opt.seed, 11, t));
    Mat exact = exact_expectation(model, opt.caps);
    if (opt.inject_fault) exact *= 1.5;
    const MonteCarlo mc = mc_expectation(model, opt.mc_samples, mix(opt.seed, 111, t), opt.threads);
    int ok = 0;
    for (Eigen::Index r = 0; r < exact.rows(); ++r) {
      for (Eigen::Index c = 0; c < exact.cols(); ++c) {
        const cd d = exact(r, c) - mc.estimate(r, c);
        ++entries;
        if (std::abs(d.real()) <= 4 * mc.stderr_re(r, c) && std::abs(d.imag()) <= 4 * mc.stderr_im(r, c)) ++ok;
      }
    }
    within += ok;
    runs.push_back({{"seed_index", t}, {"max_z", max_z(exact, mc)}, {"entries_within_4se", ok}});
  }
  const double frac = entries ? static_cast<double>(within) / entries : 0.0;
  CriterionResult r{11, "Wick sum agrees with Monte Carlo within 4 standard errors", frac >= 0.95, {}};
  r.details = {{"samples", opt.mc_samples}, {"seeds", opt.mc_seeds}, {"entries", entries},
               {"within_fraction", frac},   {"runs", runs}};
  return r;
}

// --- 12: determinism --------------------------------------------------------------

CriterionResult criterion12(const VerifyOptions& opt) {
  json rows = json::array();
  bool pass = true;
  for (const std::string suite : {"core", "moments", "ginibre"}) {
    VerifyOptions a = opt, b = opt;
    a.threads = 1;
    b.threads = std::max(3, opt.threads);
    const std::string ja = run_suite(suite, a).dump();
    const std::string jb = run_suite(suite, b).dump();
    const std::string jc = run_suite(suite, a).dump();
    const bool same = ja == jb && ja == jc;
    pass = pass && same;
    rows.push_back({{"suite", suite}, {"threads", {a.threads, b.threads}}, {"identical", same}});
  }
  return {12, "suite JSON is identical across runs and thread counts", pass, {{"suites", rows}}};
}

}  // namespace

std::vector<int> suite_criteria(const std::string& suite) {
  if (suite == "core") return {1, 2, 3, 4, 5, 6, 8};
  if (suite == "moments") return {7};
  if (suite == "ginibre") return {9, 10, 11};
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  throw InputError("unknown suite '" + suite + "' (core, moments, ginibre, all)");
}

CriterionResult run_criterion(int id, const VerifyOptions& opt) {
  switch (id) {
    case 1: return criterion1(opt);
    case 2: return criterion2(opt);
    case 3: return criterion3(opt);
    case 4: return criterion4(opt);
    case 5: return criterion5(opt);
    case 6: return criterion6(opt);
    case 7: return criterion7(opt);
    case 8: return criterion8(opt);
    case 9: return criterion9(opt);
    case 10: return criterion10(opt);
    case 11: return criterion11(opt);
    case 12: return criterion12(opt);
  }
  throw InputError("unknown criterion " + std::to_string(id));
}

nlohmann::json run_suite(const std::string& suite, const VerifyOptions& opt,
                         const std::function<void(const CriterionResult&)>& on_result) {
  json list = json::array();
  bool pass = true;
  for (int id : suite_criteria(suite)) {
    CriterionResult r = run_criterion(id, opt);
    if (on_result) on_result(r);
    pass = pass && r.pass;
    list.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"details", r.details}});
  }
  return {{"suite", suite}, {"pass", pass}, {"criteria", list}};
}

}  // namespace tte
