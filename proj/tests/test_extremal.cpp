#include <doctest.h>

#include "oracles.hpp"
#include "tte/errors.hpp"
#include "tte/extremal.hpp"

using namespace tte;

namespace {

std::vector<PartialPermutation> legs(std::initializer_list<const char*> specs, int m) {
  std::vector<PartialPermutation> out;
  for (const char* s : specs) out.push_back(parse_permutation(s, m));
  return out;
}

int exhaustive_M(const std::vector<PartialPermutation>& s) { return m_exhaustive(build(s, s.front().size())).M; }

void check_certificate(const TensorGraph& g, const ExtremalResult& r) {
  const Certificate c = simple_certificate(g, r.witness);
  CHECK(static_cast<int>(c.removed_edges.size()) == r.M);
  CHECK(c.kept.num_rects() == g.num_rects());
  CHECK(c.kept.num_edges() == static_cast<int>(g.edges().size()) - r.M);
  CHECK(is_simple(g, c.kept));
  CHECK_FALSE(brute_force_has_cycle(g, c.kept));
  // one removed edge on each cycle of the witness
  const CycleReport rep = count_cycles(g, r.witness);
  std::vector<int> hits(static_cast<std::size_t>(rep.num_cycles()), 0);
  for (int e : c.removed_edges) {
    for (int i = 0; i < rep.num_cycles(); ++i) {
      const auto& es = rep.cycles[i].edges;
      if (std::find(es.begin(), es.end(), e) != es.end()) ++hits[i];
    }
  }
  for (int h : hits) CHECK(h == 1);
}

}  // namespace

TEST_CASE("one leg: M is the number of cycles") {
  for (const auto& p : oracle::all_perms(4)) {
    const std::vector<PartialPermutation> s{p};
    CHECK(exhaustive_M(s) == cycle_count(p));
  }
}

TEST_CASE("identity legs give M = k m") {
  for (int k = 1; k <= 3; ++k) {
    for (int m = 1; m <= 3; ++m) {
      std::vector<PartialPermutation> s(static_cast<std::size_t>(k), Permutation::identity(m));
      const TensorGraph g = build(s, m);
      CHECK(m_exhaustive(g).M == k * m);
      CHECK(m_local_search(g, 4, 1).M == k * m);
      CHECK(backward_upper_bound(s) == k * m);
    }
  }
}

TEST_CASE("two-leg four-point instance matches plain enumeration") {
  const auto s = legs({"(1 2 3)(4)", "(1 2 3 4)"}, 4);
  const TensorGraph g = build(s, 4);
  const ExtremalResult r = m_exhaustive(g);
  CHECK(r.M == m_enumerate(g).M);
  CHECK(r.M == oracle::max_cycles(s));
  CHECK(cycle_count(g, r.witness) == r.M);
  check_certificate(g, r);
}

TEST_CASE("pruned search equals enumeration and the independent oracle") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 150; ++t) {
    const int k = 1 + static_cast<int>(rng() % 2);
    const int m = 1 + static_cast<int>(rng() % 4);
    std::vector<PartialPermutation> s;
    for (int j = 0; j < k; ++j) s.push_back(rng() % 2 ? PartialPermutation(oracle::random_perm(m, rng)) : oracle::random_partial(m, rng));
    const TensorGraph g = build(s, m);
    const ExtremalResult pruned = m_exhaustive(g);
    const ExtremalResult plain = m_enumerate(g);
    SearchOptions no_prune;
    no_prune.prune = false;
    const ExtremalResult full = m_exhaustive(g, no_prune);
    CHECK(pruned.M == plain.M);
    CHECK(full.M == plain.M);
    CHECK(pruned.M == oracle::max_cycles(s));
    // the witness is the first optimal pairing in rank order
    CHECK(pruned.witness == plain.witness);
    CHECK(pruned.M <= backward_upper_bound(s));
    CHECK(m_local_search(g, 8, t).M <= pruned.M);
  }
}

TEST_CASE("three legs on three points: pruned search equals the oracle") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 40; ++t) {
    std::vector<PartialPermutation> s;
    for (int j = 0; j < 3; ++j) s.push_back(oracle::random_partial(3, rng));
    CHECK(exhaustive_M(s) == oracle::max_cycles(s));
  }
}

TEST_CASE("M is invariant under simultaneous conjugation") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 60; ++t) {
    const int m = 2 + static_cast<int>(rng() % 3);
    const Permutation a = oracle::random_perm(m, rng), b = oracle::random_perm(m, rng), th = oracle::random_perm(m, rng);
    const std::vector<PartialPermutation> s{a, b};
    const std::vector<PartialPermutation> c{conjugate(a, th), conjugate(b, th)};
    CHECK(exhaustive_M(s) == exhaustive_M(c));
  }
}

TEST_CASE("certificates are full simple partial graphs with M edges removed") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 80; ++t) {
    const int k = 1 + static_cast<int>(rng() % 3);
    const int m = 1 + static_cast<int>(rng() % 3);
    std::vector<PartialPermutation> s;
    for (int j = 0; j < k; ++j) s.push_back(oracle::random_partial(m, rng));
    const TensorGraph g = build(s, m);
    check_certificate(g, m_exhaustive(g));
  }
  const TensorGraph chain = build(legs({"(1 2 3 4)"}, 4), 4);
  check_certificate(chain, m_exhaustive(chain));
}

TEST_CASE("the smallest-edge removal is not always simple, the fallback finds one") {
  // sigma_1 = (1)(2 3), sigma_2 = (1 2 3)
  const TensorGraph g = build(legs({"(2 3)", "(1 2 3)"}, 3), 3);
  const ExtremalResult r = m_exhaustive(g);
  const Certificate c = simple_certificate(g, r.witness);
  CHECK_FALSE(c.smallest_rule);
  CHECK(c.tried > 1);
  CHECK(is_simple(g, c.kept));
}

TEST_CASE("a non-optimal witness is rejected") {
  const TensorGraph g = build(legs({"(1)", "(1)"}, 1), 1);
  BluePairing b(2, 1);
  b.next();  // joins the two loops into one cycle
  CHECK_THROWS_AS(simple_certificate(g, b), WitnessNotOptimal);
}

TEST_CASE("the node cap is enforced") {
  const TensorGraph g = build(legs({"(1 2 3)", "(1 3 2)", "(1 2)"}, 3), 3);
  SearchOptions opt;
  opt.node_limit = 3;
  CHECK_THROWS_AS(m_exhaustive(g, opt), CapExceeded);
  CHECK_THROWS_AS(m_enumerate(g, 10), CapExceeded);
}

TEST_CASE("six-point backward bounds") {
  const auto s = legs({"(1 6 4 2 5 3)", "(1 2 3 4 5 6)"}, 6);
  CHECK(backward_upper_bound(s) == 5);
  const Permutation th(parse_permutation("(1 5)(2 6)", 6));
  const std::vector<PartialPermutation> c{conjugate(Permutation(s[0]), th), conjugate(Permutation(s[1]), th)};
  CHECK(backward_upper_bound(c) == 4);
  const int M = exhaustive_M(s);
  CHECK(M <= 4);
  CHECK(M == oracle::max_cycles(s));
}

TEST_CASE("closed form M(sigma, gamma, gamma) = R(sigma) + k - 1") {
  const Permutation sigma(parse_permutation("1>3,2>1,3>2", 3));
  const BackwardFormula f = multi_backward_formula(sigma, 3);
  CHECK(backward_count(sigma) == 2);
  CHECK(f.K == 1);
  CHECK(f.applicable);
  CHECK(f.value == 4);
  const Permutation gamma = Permutation::increasing_cycle(3);
  CHECK(exhaustive_M({sigma, gamma, gamma}) == 4);

  const BackwardFormula id = multi_backward_formula(Permutation::identity(4), 3);
  CHECK(id.value == 4 + 3 - 1);
  CHECK(id.applicable);

  // K = 2 needs k >= 3
  const Permutation two(parse_permutation("(1 2)(3 4)", 5));
  const BackwardFormula f2 = multi_backward_formula(two, 2);
  if (f2.K >= 2) CHECK_FALSE(f2.applicable);
  CHECK_THROWS_AS(multi_backward_formula(sigma, 1), InputError);
}

TEST_CASE("closed form agrees with search whenever it applies") {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 40; ++t) {
    const int m = 2 + static_cast<int>(rng() % 3);
    const int k = 2 + static_cast<int>(rng() % 2);
    const Permutation sigma = oracle::random_perm(m, rng);
    const BackwardFormula f = multi_backward_formula(sigma, k);
    if (!f.applicable) continue;
    std::vector<PartialPermutation> s{sigma};
    for (int j = 1; j < k; ++j) s.push_back(Permutation::increasing_cycle(m));
    CHECK(exhaustive_M(s) == f.value);
  }
}

TEST_CASE("moment exponent matches the search on the moment graph") {
  const auto s = legs({"1>2,2>3", "(1 2 3)", "(1 2 3)"}, 3);
  const int M = exhaustive_M(s);
  CHECK(M == 2);
  for (int p = 1; p <= 2; ++p) {
    const TensorGraph g = build_moment(s, 3, p);
    const ExtremalResult local = m_local_search(g, 16, 7);
    SearchOptions opt;
    opt.incumbent = &local.witness;
    CHECK(m_exhaustive(g, opt).M == moment_exponent(s, p, M));
  }
  CHECK(moment_exponent(legs({""}, 1), 3, 0) == 1);
  const auto full = legs({"(1 2)", "(1)(2)"}, 2);
  CHECK(moment_exponent(full, 2, 3) == 12);
}

TEST_CASE("moment exponent on random small instances") {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 25; ++t) {
    std::vector<PartialPermutation> s{oracle::random_partial(2, rng), oracle::random_partial(2, rng)};
    const int M = exhaustive_M(s);
    CHECK(m_exhaustive(build_moment(s, 2, 1)).M == moment_exponent(s, 1, M));
  }
}

TEST_CASE("multiplicities expand legs") {
  const auto s = legs({"(1 2)", "1>2"}, 2);
  const std::vector<int> ones{1, 1};
  CHECK(exponent_report(s, ones).M == exponent_report(s, {}).M);
  const std::vector<int> twice{2};
  const std::vector<PartialPermutation> one{s[0]};
  CHECK(exponent_report(one, twice).M == exhaustive_M({s[0], s[0]}));
  const std::vector<int> bad{0, 1};
  CHECK_THROWS_AS(expand_legs(s, bad), InputError);
}

TEST_CASE("report modes") {
  const auto s = legs({"(1 2 3)(4)", "(1 2 3 4)"}, 4);
  ReportOptions opt;
  const ExtremalResult r = exponent_report(s, {}, opt);
  CHECK(r.method == Method::exhaustive);
  REQUIRE(r.certificate.has_value());
  opt.mode = SearchMode::local;
  CHECK(exponent_report(s, {}, opt).method == Method::local_search);
  opt.mode = SearchMode::automatic;
  opt.caps.pairings = 1;
  CHECK(exponent_report(s, {}, opt).method == Method::local_search);
  opt.mode = SearchMode::exhaustive;
  CHECK_THROWS_AS(exponent_report(s, {}, opt), CapExceeded);
}

TEST_CASE("local search is reproducible") {
  const TensorGraph g = build(legs({"(1 3 2 4)", "(1 2 3 4)", "(1 4)"}, 4), 4);
  const ExtremalResult a = m_local_search(g, 5, 99), b = m_local_search(g, 5, 99);
  CHECK(a.M == b.M);
  CHECK(a.witness == b.witness);
  CHECK(cycle_count(g, a.witness) == a.M);
}
