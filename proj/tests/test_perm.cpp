#include <doctest.h>

#include "oracles.hpp"
#include "tte/errors.hpp"
#include "tte/perm.hpp"

using namespace tte;

namespace {
Permutation P(std::string_view text, int m) { return Permutation(parse_permutation(text, m)); }
}  // namespace

TEST_CASE("cycle and arc notations parse to the same map") {
  const auto a = parse_permutation("(1 2 3)(4)", 4);
  const auto b = parse_permutation("1>2,2>3,3>1,4>4", 4);
  CHECK(a == b);
  CHECK(a.is_full());
  CHECK(a(0) == 1);
  CHECK(a(2) == 0);
  CHECK(to_cycle_string(Permutation(a)) == "(1 2 3)(4)");
  CHECK(to_arc_string(a) == "1>2,2>3,3>1,4>4");
}

TEST_CASE("omitted points are fixed in cycle notation and undefined in arc notation") {
  CHECK(parse_permutation("(1 3)", 3)(1) == 1);
  CHECK(parse_permutation("()", 3) == PartialPermutation(Permutation::identity(3)));
  const auto p = parse_permutation("1>2", 3);
  CHECK(p.domain_size() == 1);
  CHECK_FALSE(p.defined(1));
  CHECK(p.in_image(1));
  CHECK_FALSE(p.in_image(0));
  CHECK(parse_permutation("", 2).domain_size() == 0);
}

TEST_CASE("malformed permutations are input errors") {
  CHECK_THROWS_AS(parse_permutation("(1 2", 3), InputError);
  CHECK_THROWS_AS(parse_permutation("(1 2)(2 3)", 3), InputError);
  CHECK_THROWS_AS(parse_permutation("(1 4)", 3), InputError);
  CHECK_THROWS_AS(parse_permutation("1>2,3>2", 3), InputError);
  CHECK_THROWS_AS(parse_permutation("1>2,1>3", 3), InputError);
  CHECK_THROWS_AS(parse_permutation("(0 1)", 3), InputError);
  CHECK_THROWS_AS(parse_permutation("1>x", 3), InputError);
  CHECK_THROWS_AS(Permutation(parse_permutation("1>2", 2)), InputError);
}

TEST_CASE("max_point reads the largest mentioned point") {
  CHECK(max_point("(1 5 2)") == 5);
  CHECK(max_point("3>1,2>7") == 7);
  CHECK(max_point("") == 0);
  CHECK(max_point("()") == 0);
}

TEST_CASE("invert is an involution and composes to the identity") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const int m = 1 + static_cast<int>(rng() % 7);
    const auto p = oracle::random_perm(m, rng);
    CHECK(invert(invert(p)) == p);
    CHECK(compose(p, invert(p)) == Permutation::identity(m));
    const auto q = oracle::random_partial(m, rng);
    CHECK(invert(invert(q)) == q);
    for (int i = 0; i < m; ++i) {
      if (q.defined(i)) CHECK(invert(q)(q(i)) == i);
    }
  }
}

TEST_CASE("cycles partition the points") {
  const auto p = P("(1 6 4 2 5 3)", 6);
  CHECK(cycle_count(p) == 1);
  CHECK(cycle_count(Permutation::identity(5)) == 5);
  CHECK(cycle_count(P("(1 2)(3 4)", 5)) == 3);
  CHECK(cycles(P("(2 3)", 3)) == std::vector<std::vector<int>>{{0}, {1, 2}});
}

TEST_CASE("backward_count counts arcs i -> p(i) with p(i) <= i") {
  CHECK(backward_count(P("(1 6 4 2 5 3)", 6)) == 4);
  CHECK(backward_count(P("(1 2 3 4 5 6)", 6)) == 1);
  CHECK(backward_count(Permutation::identity(4)) == 4);
  CHECK(backward_count(parse_permutation("1>2,2>3", 3)) == 0);
  // every cycle has at least one backward arc
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    const auto p = oracle::random_perm(6, rng);
    CHECK(backward_count(p) >= cycle_count(p));
  }
}

TEST_CASE("conjugation relabels points and preserves cycle type") {
  const auto p = P("(1 6 4 2 5 3)", 6);
  const auto theta = P("(1 5)(2 6)", 6);
  const auto q = conjugate(p, theta);
  CHECK(q == P("(1 3 5 2 4 6)", 6));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const auto a = oracle::random_perm(5, rng), th = oracle::random_perm(5, rng);
    CHECK(conjugate(a, th) == compose(compose(th, a), invert(th)));
    CHECK(cycle_count(conjugate(a, th)) == cycle_count(a));
  }
}

TEST_CASE("min_conjugate_backward on the six-point pair") {
  const std::vector<Permutation> ps{P("(1 6 4 2 5 3)", 6), P("(1 2 3 4 5 6)", 6)};
  const auto r = min_conjugate_backward(ps);
  CHECK(r.total == 4);
  int sum = 0;
  for (const auto& p : ps) sum += backward_count(conjugate(p, r.theta));
  CHECK(sum == r.total);
  CHECK_THROWS_AS(min_conjugate_backward(ps, 5), CapExceeded);
}

TEST_CASE("interval_K") {
  // 1 -> 3, 2 -> 1, 3 -> 2
  CHECK(interval_K(Permutation(parse_permutation("1>3,2>1,3>2", 3))) == 1);
  CHECK(interval_K(Permutation::increasing_cycle(4)) == 0);
  CHECK(interval_K(Permutation::identity(4)) == 0);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const auto p = oracle::random_perm(6, rng);
    CHECK(interval_K_min(p) <= interval_K(p));
  }
}

TEST_CASE("rank and unrank are inverse and lexicographic") {
  for (int k = 1; k <= 5; ++k) {
    std::vector<int> v(static_cast<std::size_t>(k));
    std::iota(v.begin(), v.end(), 0);
    std::uint32_t r = 0;
    do {
      CHECK(perm_rank(v) == r);
      CHECK(perm_unrank(k, r) == v);
      ++r;
    } while (std::next_permutation(v.begin(), v.end()));
    CHECK(r == factorial(k));
  }
}
