#include <doctest.h>

#include "oracles.hpp"
#include "tte/errors.hpp"
#include "tte/graph.hpp"

using namespace tte;

namespace {

std::vector<PartialPermutation> legs(std::initializer_list<const char*> specs, int m) {
  std::vector<PartialPermutation> out;
  for (const char* s : specs) out.push_back(parse_permutation(s, m));
  return out;
}

std::vector<std::vector<int>> as_lists(const BluePairing& b) {
  std::vector<std::vector<int>> out;
  for (int r = 0; r < b.num_rects(); ++r) out.push_back(b.perm(r));
  return out;
}

/// Selection from bit masks over rectangles and edges.
Selection from_bits(const TensorGraph& g, std::uint64_t rect_bits, std::uint64_t edge_bits) {
  Selection s = Selection::empty(g);
  for (int r = 0; r < g.num_rects(); ++r) s.rects[r] = (rect_bits >> r) & 1;
  for (std::size_t e = 0; e < g.edges().size(); ++e) s.edges[e] = (edge_bits >> e) & 1;
  return s;
}

bool edges_inside(const TensorGraph& g, const Selection& s) {
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    if (!s.edges[e]) continue;
    if (!s.rects[g.edges()[e].src] || !s.rects[g.edges()[e].dst]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("two-leg four-point graph has 8 edges and no open vertices") {
  const auto s = legs({"(1 2 3)(4)", "(1 2 3 4)"}, 4);
  const TensorGraph g = build(s, 4);
  CHECK(g.num_rects() == 4);
  CHECK(g.edges().size() == 8);
  CHECK(g.count_open_in() == 0);
  CHECK(g.count_open_out() == 0);
}

TEST_CASE("three-leg instance with one partial leg has one open vertex on each side") {
  const auto s = legs({"1>2,2>3", "(1 2 3)", "(1 2 3)"}, 3);
  const TensorGraph g = build(s, 3);
  CHECK(g.edges().size() == 8);
  CHECK(g.count_open_in() == 1);
  CHECK(g.count_open_out() == 1);
  CHECK(g.in_edge(0, 0) == -1);   // A1, colour 1
  CHECK(g.out_edge(2, 0) == -1);  // A3, colour 1

  const TensorGraph a = build_adjoint(s, 3);
  CHECK(a.out_edge(0, 0) == -1);  // A1*, colour 1
  CHECK(a.in_edge(2, 0) == -1);   // A3*, colour 1
  CHECK(a.rects()[0].adjoint);
}

TEST_CASE("empty legs give an edgeless graph with every vertex open") {
  const TensorGraph g = build(legs({""}, 2), 2);
  CHECK(g.edges().empty());
  CHECK(g.count_open_in() == 2);
  CHECK(g.count_open_out() == 2);
}

TEST_CASE("adjoint graph reverses every edge") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    std::vector<PartialPermutation> s{oracle::random_partial(4, rng), oracle::random_partial(4, rng)};
    const TensorGraph g = build(s, 4), a = build_adjoint(s, 4);
    REQUIRE(g.edges().size() == a.edges().size());
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 2; ++c) {
        CHECK((g.in_edge(r, c) == -1) == (a.out_edge(r, c) == -1));
        CHECK((g.out_edge(r, c) == -1) == (a.in_edge(r, c) == -1));
      }
    }
  }
}

TEST_CASE("moment graph edge counts") {
  const auto s = legs({"", "1>2", "(1 2)"}, 2);
  for (int p = 1; p <= 3; ++p) {
    const TensorGraph g = build_moment(s, 2, p);
    CHECK(g.num_rects() == 4 * p);
    CHECK(g.count_edges(EdgeKind::yellow) == 6 * p);
    CHECK(g.count_edges(EdgeKind::plain) == 6 * p);
    CHECK(g.count_open_in() == 0);
    CHECK(g.count_open_out() == 0);
  }
  const TensorGraph full = build_moment(legs({"(1 2)", "(1)(2)"}, 2), 2, 1);
  CHECK(full.count_edges(EdgeKind::yellow) == 0);

  // a single empty one-leg rectangle: four copies on one yellow cycle
  const TensorGraph ring = build_moment(legs({""}, 1), 1, 2);
  CHECK(ring.num_rects() == 4);
  CHECK(ring.count_edges(EdgeKind::yellow) == 4);
  CHECK(cycle_count(ring, BluePairing(1, 4)) == 1);
}

TEST_CASE("moment graph cycles carry no yellow edge or at least 2p of them") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    const int p = 1 + static_cast<int>(t % 2);
    std::vector<PartialPermutation> s{oracle::random_partial(3, rng), oracle::random_partial(3, rng)};
    const TensorGraph g = build_moment(s, 3, p);
    for (int q = 0; q < 20; ++q) {
      const BluePairing b = pairing_at(2, g.num_rects(), rng() % pairing_count(2, g.num_rects()));
      const CycleReport rep = count_cycles(g, b);
      CHECK(rep.open_paths.empty());
      for (int y : rep.yellow_per_cycle) CHECK((y == 0 || y >= 2 * p));
    }
  }
}

TEST_CASE("pairing enumeration visits (k!)^n pairings in rank order") {
  CHECK(pairing_count(2, 2) == 4);
  CHECK(pairing_count(3, 1) == 6);
  CHECK(pairing_count(1, 7) == 1);
  BluePairing b(3, 2);
  std::uint64_t n = 0;
  do {
    CHECK(b == pairing_at(3, 2, n));
    CHECK(BluePairing::from_ranks(3, b.ranks()) == b);
    ++n;
  } while (b.next());
  CHECK(n == 36);
  CHECK(b == BluePairing(3, 2));
  const std::vector<std::uint32_t> bad{6};
  CHECK_THROWS_AS(BluePairing::from_ranks(3, bad), InputError);
}

TEST_CASE("small cycle counts") {
  const TensorGraph chain = build(legs({"(1 2 3 4 5)"}, 5), 5);
  CHECK(cycle_count(chain, BluePairing(1, 5)) == 1);

  const TensorGraph two = build(legs({"(1)", "(1)"}, 1), 1);
  BluePairing b(2, 1);
  CHECK(cycle_count(two, b) == 2);
  b.next();
  CHECK(cycle_count(two, b) == 1);
}

TEST_CASE("cycle walker agrees with the independent oracle") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    const int k = 1 + static_cast<int>(rng() % 3);
    const int m = 1 + static_cast<int>(rng() % 4);
    std::vector<PartialPermutation> s;
    for (int j = 0; j < k; ++j) s.push_back(oracle::random_partial(m, rng));
    const TensorGraph g = build(s, m);
    const BluePairing b = pairing_at(k, m, rng() % pairing_count(k, m));
    const CycleReport rep = count_cycles(g, b);
    CHECK(rep.num_cycles() == oracle::cycles(s, as_lists(b)));
    CHECK(cycle_count(g, b) == rep.num_cycles());
    // open paths pair open in-vertices with open out-vertices
    CHECK(static_cast<int>(rep.open_paths.size()) == g.count_open_in());
    // every cycle without yellow edges has a backward edge
    for (int bk : rep.backward_per_cycle) CHECK(bk >= 1);
  }
}

TEST_CASE("is_simple basics") {
  const TensorGraph lone = build(legs({""}, 1), 1);
  CHECK(is_simple(lone, Selection::full(lone)));
  CHECK_FALSE(brute_force_has_cycle(lone, Selection::full(lone)));

  const TensorGraph loop = build(legs({"(1)"}, 1), 1);
  CHECK_FALSE(is_simple(loop, Selection::full(loop)));
  CHECK(brute_force_has_cycle(loop, Selection::full(loop)));

  const TensorGraph fig = build(legs({"(1 2 3)(4)", "(1 2 3 4)"}, 4), 4);
  CHECK_FALSE(is_simple(fig, Selection::full(fig)));
  Selection no_edges = Selection::full(fig);
  std::fill(no_edges.edges.begin(), no_edges.edges.end(), 0);
  CHECK(is_simple(fig, no_edges));
}

TEST_CASE("peeling agrees with brute force on every partial graph, and subgraphs of simple graphs are simple") {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int t = 0; t < 12; ++t) {
    std::vector<PartialPermutation> s{oracle::random_partial(3, rng), oracle::random_perm(3, rng)};
    const TensorGraph g = build(s, 3);
    const int ne = static_cast<int>(g.edges().size());
    for (std::uint64_t rb = 0; rb < 8; ++rb) {
      for (std::uint64_t eb = 0; eb < (1ULL << ne); ++eb) {
        const Selection sel = from_bits(g, rb, eb);
        if (!edges_inside(g, sel)) continue;
        const bool simple = is_simple(g, sel);
        CHECK(simple == !brute_force_has_cycle(g, sel));
        ++checked;
        if (simple && eb != 0) {
          const int drop = static_cast<int>(rng() % ne);
          const Selection sub = from_bits(g, rb, eb & ~(1ULL << drop));
          CHECK(is_simple(g, sub));
        }
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("complement flips membership and is an involution") {
  const TensorGraph g = build(legs({"(1 2 3)(4)", "(1 2 3 4)"}, 4), 4);
  CHECK(complement(g, Selection::full(g)) == Selection::empty(g));
  CHECK(complement(g, Selection::empty(g)) == Selection::full(g));
  const Selection half = from_bits(g, 0b0011, 0b10100101);
  const Selection other = complement(g, half);
  CHECK(complement(g, other) == half);
  CHECK(half.num_edges() + other.num_edges() == 8);
}

TEST_CASE("validate and induced") {
  const TensorGraph g = build(legs({"(1 2)"}, 2), 2);
  Selection s = Selection::full(g);
  s.rects[1] = 0;
  CHECK_THROWS_AS(validate(g, s), InputError);
  s.edges.assign(s.edges.size(), 0);
  validate(g, s);
  const TensorGraph h = induced(g, s);
  CHECK(h.num_rects() == 1);
  CHECK(h.edges().empty());
  CHECK(h.count_open_in() == 1);
}

TEST_CASE("dot output") {
  const TensorGraph loop = build(legs({"(1)"}, 1), 1);
  const std::string d = to_dot(loop);
  CHECK(d.find("digraph") != std::string::npos);
  CHECK(d.find("r0:o1 -> r0:i1") != std::string::npos);

  const TensorGraph fig = build(legs({"(1 2 3)(4)", "(1 2 3 4)"}, 4), 4);
  const std::string f = to_dot(fig);
  int arrows = 0;
  for (std::size_t p = f.find("->"); p != std::string::npos; p = f.find("->", p + 2)) ++arrows;
  CHECK(arrows == 8);
  const BluePairing b(2, 4);
  CHECK(to_dot(fig, &b).find("blue") != std::string::npos);

  const TensorGraph mom = build_moment(legs({"1>2"}, 2), 2, 1);
  CHECK(to_dot(mom).find("gold") != std::string::npos);
}

TEST_CASE("graph json uses one-based points") {
  const TensorGraph g = build(legs({"1>2"}, 2), 2);
  const auto j = to_json(g);
  CHECK(j.at("k") == 1);
  CHECK(j.at("open_in") == nlohmann::json::parse("[[1], []]"));
  CHECK(j.at("edges").size() == 1);
  const auto p = to_json(parse_permutation("1>2", 2));
  CHECK(p.at("arcs")[0] == nlohmann::json::array({1, 2}));
}
