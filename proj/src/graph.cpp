#include "tte/graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "tte/errors.hpp"

namespace tte {

std::string RectLabel::name() const {
  std::string s = "A" + std::to_string(index + 1) + (adjoint ? "*" : "");
  if (copy >= 0) s = std::to_string(copy + 1) + ":" + s;
  return s;
}

TensorGraph::TensorGraph(int k, std::vector<RectLabel> rects)
    : k_(k),
      rects_(std::move(rects)),
      out_edge_(rects_.size() * static_cast<std::size_t>(k), -1),
      in_edge_(rects_.size() * static_cast<std::size_t>(k), -1) {
  if (k < 1) throw InputError("number of legs must be positive");
}

void TensorGraph::add_edge(int src, int dst, int color, EdgeKind kind) {
  if (src < 0 || src >= num_rects() || dst < 0 || dst >= num_rects() || color < 0 || color >= k_) {
    throw InputError("edge endpoint out of range");
  }
  int& out = out_edge_[src * k_ + color];
  int& in = in_edge_[dst * k_ + color];
  if (out != -1 || in != -1) throw InputError("vertex already carries an edge");
  out = in = static_cast<int>(edges_.size());
  edges_.push_back({src, dst, color, kind});
}

int TensorGraph::count_open_in() const {
  return static_cast<int>(std::count(in_edge_.begin(), in_edge_.end(), -1));
}

int TensorGraph::count_open_out() const {
  return static_cast<int>(std::count(out_edge_.begin(), out_edge_.end(), -1));
}

int TensorGraph::count_edges(EdgeKind kind) const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [&](const Edge& e) { return e.kind == kind; }));
}

int TensorGraph::backward_bound() const {
  int n = 0;
  for (const auto& e : edges_) {
    if (e.kind == EdgeKind::yellow || e.src >= e.dst) ++n;
  }
  return n;
}

bool TensorGraph::operator==(const TensorGraph& o) const {
  return k_ == o.k_ && rects_ == o.rects_ && edges_ == o.edges_;
}

// --- construction ------------------------------------------------------------

namespace {

void check_sigmas(std::span<const PartialPermutation> sigmas, int m) {
  if (sigmas.empty()) throw InputError("at least one leg is required");
  if (m < 1) throw InputError("m must be positive");
  for (const auto& s : sigmas) {
    if (s.size() != m) {
      throw InputError("permutation of size " + std::to_string(s.size()) + " where " + std::to_string(m) + " expected");
    }
  }
}

std::vector<RectLabel> labels(int m, bool adjoint, int copy) {
  std::vector<RectLabel> out;
  for (int i = 0; i < m; ++i) out.push_back({i, adjoint, copy});
  return out;
}

// Edges of G (or G*) with rectangle positions shifted by `offset`.
void add_copy_edges(TensorGraph& g, std::span<const PartialPermutation> sigmas, int offset, bool adjoint) {
  const int k = static_cast<int>(sigmas.size());
  const int m = sigmas.front().size();
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < m; ++i) {
      if (!sigmas[j].defined(i)) continue;
      if (adjoint) {
        g.add_edge(offset + sigmas[j](i), offset + i, j, EdgeKind::plain);
      } else {
        g.add_edge(offset + i, offset + sigmas[j](i), j, EdgeKind::plain);
      }
    }
  }
}

}  // namespace

TensorGraph build(std::span<const PartialPermutation> sigmas, int m) {
  check_sigmas(sigmas, m);
  TensorGraph g(static_cast<int>(sigmas.size()), labels(m, false, -1));
  add_copy_edges(g, sigmas, 0, false);
  return g;
}

TensorGraph build_adjoint(std::span<const PartialPermutation> sigmas, int m) {
  check_sigmas(sigmas, m);
  TensorGraph g(static_cast<int>(sigmas.size()), labels(m, true, -1));
  add_copy_edges(g, sigmas, 0, true);
  return g;
}

TensorGraph build_moment(std::span<const PartialPermutation> sigmas, int m, int p) {
  check_sigmas(sigmas, m);
  if (p < 1) throw InputError("moment order p must be positive");
  const int k = static_cast<int>(sigmas.size());
  std::vector<RectLabel> rects;
  for (int r = 0; r < p; ++r) {
    for (const auto& l : labels(m, false, r)) rects.push_back(l);
    for (const auto& l : labels(m, true, r)) rects.push_back(l);
  }
  TensorGraph g(k, std::move(rects));
  for (int r = 0; r < p; ++r) {
    add_copy_edges(g, sigmas, 2 * r * m, false);
    add_copy_edges(g, sigmas, (2 * r + 1) * m, true);
  }
  for (int r = 0; r < p; ++r) {
    const int base_g = 2 * r * m;
    const int base_star = (2 * r + 1) * m;
    const int base_next = 2 * ((r + 1) % p) * m;
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < m; ++i) {
        if (!sigmas[j].defined(i)) g.add_edge(base_g + i, base_star + i, j, EdgeKind::yellow);
      }
      for (int i = 0; i < m; ++i) {
        if (!sigmas[j].in_image(i)) g.add_edge(base_star + i, base_next + i, j, EdgeKind::yellow);
      }
    }
  }
  return g;
}

// --- pairings ------------------------------------------------------------------

BluePairing::BluePairing(int k, int rects) : k_(k), pi_(static_cast<std::size_t>(k) * rects) {
  if (k < 1 || k > 12) throw InputError("number of legs must lie in 1..12");
  for (int r = 0; r < rects; ++r) {
    for (int c = 0; c < k; ++c) pi_[r * k + c] = static_cast<std::uint8_t>(c);
  }
}

BluePairing BluePairing::from_ranks(int k, std::span<const std::uint32_t> ranks) {
  BluePairing b(k, static_cast<int>(ranks.size()));
  const std::uint64_t f = factorial(k);
  for (std::size_t r = 0; r < ranks.size(); ++r) {
    if (ranks[r] >= f) throw InputError("pairing rank " + std::to_string(ranks[r]) + " out of range for k=" + std::to_string(k));
    auto p = perm_unrank(k, ranks[r]);
    for (int c = 0; c < k; ++c) b.set(static_cast<int>(r), c, p[c]);
  }
  return b;
}

void BluePairing::swap_targets(int r, int c1, int c2) { std::swap(pi_[r * k_ + c1], pi_[r * k_ + c2]); }

std::vector<int> BluePairing::perm(int r) const {
  return std::vector<int>(pi_.begin() + r * k_, pi_.begin() + (r + 1) * k_);
}

std::uint32_t BluePairing::rank(int r) const {
  auto p = perm(r);
  return perm_rank(p);
}

std::vector<std::uint32_t> BluePairing::ranks() const {
  std::vector<std::uint32_t> out;
  for (int r = 0; r < num_rects(); ++r) out.push_back(rank(r));
  return out;
}

bool BluePairing::next() {
  for (int r = num_rects() - 1; r >= 0; --r) {
    auto first = pi_.begin() + r * k_;
    if (std::next_permutation(first, first + k_)) return true;
  }
  return false;
}

std::uint64_t pairing_count(int k, int rects) {
  const std::uint64_t f = factorial(k);
  std::uint64_t n = 1;
  for (int r = 0; r < rects; ++r) {
    if (n > std::numeric_limits<std::uint64_t>::max() / f) return std::numeric_limits<std::uint64_t>::max();
    n *= f;
  }
  return n;
}

BluePairing pairing_at(int k, int rects, std::uint64_t index) {
  const std::uint64_t f = factorial(k);
  std::vector<std::uint32_t> ranks(static_cast<std::size_t>(rects));
  for (int r = rects - 1; r >= 0; --r) {
    ranks[r] = static_cast<std::uint32_t>(index % f);
    index /= f;
  }
  return BluePairing::from_ranks(k, ranks);
}

// --- cycles ------------------------------------------------------------------

namespace {

void check_pairing(const TensorGraph& g, const BluePairing& b) {
  if (b.k() != g.k() || b.num_rects() != g.num_rects()) {
    throw InputError("pairing has " + std::to_string(b.num_rects()) + " rectangles of arity " + std::to_string(b.k()) +
                     ", graph has " + std::to_string(g.num_rects()) + " of arity " + std::to_string(g.k()));
  }
}

// Successor in the functional graph, -1 at an open out-vertex; `edge` gets
// the traversed graph edge or -1 for a blue step.
int successor(const TensorGraph& g, const BluePairing& b, int v, int& edge) {
  const int k = g.k();
  const int r = v / (2 * k);
  const int c = (v / 2) % k;
  if (v % 2 == 0) {
    edge = -1;
    return out_vertex(k, r, b(r, c));
  }
  edge = g.out_edge(r, c);
  if (edge < 0) return -1;
  return in_vertex(k, g.edges()[edge].dst, c);
}

}  // namespace

CycleReport count_cycles(const TensorGraph& g, const BluePairing& b) {
  check_pairing(g, b);
  const int nv = g.num_vertices();
  const int k = g.k();
  CycleReport rep;
  std::vector<int> comp(static_cast<std::size_t>(nv), -1);
  std::vector<Walk> paths;
  for (int r = 0; r < g.num_rects(); ++r) {
    for (int c = 0; c < k; ++c) {
      if (g.in_edge(r, c) >= 0) continue;
      Walk w;
      int v = in_vertex(k, r, c);
      const int id = -2 - static_cast<int>(paths.size());
      while (v >= 0) {
        comp[v] = id;
        w.vertices.push_back(v);
        int e;
        v = successor(g, b, v, e);
        if (e >= 0) w.edges.push_back(e);
      }
      paths.push_back(std::move(w));
    }
  }
  for (int s = 0; s < nv; ++s) {
    if (comp[s] != -1) continue;
    Walk w;
    const int id = static_cast<int>(rep.cycles.size());
    int back = 0, yellow = 0;
    int v = s;
    do {
      comp[v] = id;
      w.vertices.push_back(v);
      int e;
      v = successor(g, b, v, e);
      if (e >= 0) {
        w.edges.push_back(e);
        const Edge& ed = g.edges()[e];
        if (ed.kind == EdgeKind::yellow) {
          ++yellow;
        } else if (ed.src >= ed.dst) {
          ++back;
        }
      }
    } while (v != s);
    rep.cycles.push_back(std::move(w));
    rep.backward_per_cycle.push_back(back);
    rep.yellow_per_cycle.push_back(yellow);
  }
  const int nc = rep.num_cycles();
  for (auto& x : comp) {
    if (x <= -2) x = nc + (-2 - x);
  }
  rep.open_paths = std::move(paths);
  rep.component = std::move(comp);
  return rep;
}

int cycle_count(const TensorGraph& g, const BluePairing& b) {
  check_pairing(g, b);
  const int nv = g.num_vertices();
  const int k = g.k();
  std::vector<char> seen(static_cast<std::size_t>(nv), 0);
  for (int r = 0; r < g.num_rects(); ++r) {
    for (int c = 0; c < k; ++c) {
      if (g.in_edge(r, c) >= 0) continue;
      int v = in_vertex(k, r, c);
      while (v >= 0) {
        seen[v] = 1;
        int e;
        v = successor(g, b, v, e);
      }
    }
  }
  int cycles = 0;
  for (int s = 0; s < nv; ++s) {
    if (seen[s]) continue;
    ++cycles;
    int v = s;
    do {
      seen[v] = 1;
      int e;
      v = successor(g, b, v, e);
    } while (v != s);
  }
  return cycles;
}

// --- partial graphs ------------------------------------------------------------

Selection Selection::full(const TensorGraph& g) {
  return {std::vector<char>(g.rects().size(), 1), std::vector<char>(g.edges().size(), 1)};
}

Selection Selection::empty(const TensorGraph& g) {
  return {std::vector<char>(g.rects().size(), 0), std::vector<char>(g.edges().size(), 0)};
}

int Selection::num_rects() const { return static_cast<int>(std::count(rects.begin(), rects.end(), 1)); }
int Selection::num_edges() const { return static_cast<int>(std::count(edges.begin(), edges.end(), 1)); }

void validate(const TensorGraph& g, const Selection& s) {
  if (s.rects.size() != g.rects().size() || s.edges.size() != g.edges().size()) {
    throw InputError("selection does not match the graph");
  }
  for (std::size_t e = 0; e < s.edges.size(); ++e) {
    if (!s.edges[e]) continue;
    const Edge& ed = g.edges()[e];
    if (!s.rects[ed.src] || !s.rects[ed.dst]) {
      throw InputError("selected edge " + std::to_string(e) + " leaves the selected rectangles");
    }
  }
}

TensorGraph induced(const TensorGraph& g, const Selection& s) {
  validate(g, s);
  std::vector<int> pos(g.rects().size(), -1);
  std::vector<RectLabel> rects;
  for (std::size_t r = 0; r < g.rects().size(); ++r) {
    if (!s.rects[r]) continue;
    pos[r] = static_cast<int>(rects.size());
    rects.push_back(g.rects()[r]);
  }
  TensorGraph h(g.k(), std::move(rects));
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    if (!s.edges[e]) continue;
    const Edge& ed = g.edges()[e];
    h.add_edge(pos[ed.src], pos[ed.dst], ed.color, ed.kind);
  }
  return h;
}

bool is_simple(const TensorGraph& g, const Selection& s) {
  validate(g, s);
  const int n = g.num_rects();
  std::vector<int> indeg(static_cast<std::size_t>(n), 0), outdeg(static_cast<std::size_t>(n), 0);
  std::vector<char> alive(s.rects.begin(), s.rects.end());
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    if (!s.edges[e]) continue;
    ++outdeg[g.edges()[e].src];
    ++indeg[g.edges()[e].dst];
  }
  std::vector<int> stack;
  for (int r = 0; r < n; ++r) {
    if (alive[r] && (indeg[r] == 0 || outdeg[r] == 0)) stack.push_back(r);
  }
  while (!stack.empty()) {
    int r = stack.back();
    stack.pop_back();
    if (!alive[r]) continue;
    alive[r] = 0;
    for (int c = 0; c < g.k(); ++c) {
      int eo = g.out_edge(r, c);
      if (eo >= 0 && s.edges[eo]) {
        int d = g.edges()[eo].dst;
        if (alive[d] && --indeg[d] == 0) stack.push_back(d);
      }
      int ei = g.in_edge(r, c);
      if (ei >= 0 && s.edges[ei]) {
        int src = g.edges()[ei].src;
        if (alive[src] && --outdeg[src] == 0) stack.push_back(src);
      }
    }
  }
  return std::none_of(alive.begin(), alive.end(), [](char a) { return a != 0; });
}

bool brute_force_has_cycle(const TensorGraph& g, const Selection& s, std::uint64_t limit) {
  TensorGraph h = induced(g, s);
  if (pairing_count(h.k(), h.num_rects()) > limit) {
    throw CapExceeded("brute-force simplicity check needs more than " + std::to_string(limit) + " pairings");
  }
  BluePairing b(h.k(), h.num_rects());
  do {
    if (cycle_count(h, b) > 0) return true;
  } while (b.next());
  return false;
}

Selection complement(const TensorGraph& g, const Selection& s) {
  if (s.rects.size() != g.rects().size() || s.edges.size() != g.edges().size()) {
    throw InputError("selection does not match the graph");
  }
  Selection out = s;
  for (auto& x : out.rects) x = !x;
  for (auto& x : out.edges) x = !x;
  return out;
}

// --- output -----------------------------------------------------------------

namespace {

std::string leg_color(int c) {
  if (c == 0) return "green";
  if (c == 1) return "red";
  return "black";
}

}  // namespace

std::string to_dot(const TensorGraph& g, const BluePairing* b) {
  if (b != nullptr) check_pairing(g, *b);
  const int k = g.k();
  std::ostringstream out;
  out << "digraph G {\n  node [shape=record];\n";
  for (int r = 0; r < g.num_rects(); ++r) {
    out << "  r" << r << " [label=\"{{";
    for (int c = 0; c < k; ++c) out << (c ? "|" : "") << "<i" << c + 1 << "> in" << c + 1;
    out << "}|" << g.rects()[r].name() << "|{";
    for (int c = 0; c < k; ++c) out << (c ? "|" : "") << "<o" << c + 1 << "> out" << c + 1;
    out << "}}\"];\n";
  }
  for (const auto& e : g.edges()) {
    out << "  r" << e.src << ":o" << e.color + 1 << " -> r" << e.dst << ":i" << e.color + 1 << " [";
    if (e.kind == EdgeKind::yellow) {
      out << "color=gold, label=\"c" << e.color + 1 << "\"";
    } else {
      out << "color=" << leg_color(e.color);
      if (e.color >= 2) out << ", label=\"c" << e.color + 1 << "\"";
    }
    out << "];\n";
  }
  if (b != nullptr) {
    for (int r = 0; r < g.num_rects(); ++r) {
      for (int c = 0; c < k; ++c) {
        out << "  r" << r << ":i" << c + 1 << " -> r" << r << ":o" << (*b)(r, c) + 1 << " [color=blue];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

nlohmann::json to_json(const TensorGraph& g) {
  using nlohmann::json;
  json rects = json::array();
  for (const auto& r : g.rects()) rects.push_back(r.name());
  json edges = json::array();
  for (const auto& e : g.edges()) {
    edges.push_back({e.src + 1, e.dst + 1, e.color + 1, e.kind == EdgeKind::yellow ? "yellow" : "plain"});
  }
  json open_in = json::array(), open_out = json::array();
  for (int r = 0; r < g.num_rects(); ++r) {
    json in = json::array(), out = json::array();
    for (int c = 0; c < g.k(); ++c) {
      if (g.in_edge(r, c) < 0) in.push_back(c + 1);
      if (g.out_edge(r, c) < 0) out.push_back(c + 1);
    }
    open_in.push_back(in);
    open_out.push_back(out);
  }
  return {{"k", g.k()}, {"rects", rects}, {"edges", edges}, {"open_in", open_in}, {"open_out", open_out}};
}

nlohmann::json to_json(const PartialPermutation& p) {
  nlohmann::json arcs = nlohmann::json::array();
  for (int i = 0; i < p.size(); ++i) {
    if (p.defined(i)) arcs.push_back({i + 1, p(i) + 1});
  }
  return {{"m", p.size()}, {"arcs", arcs}};
}

}  // namespace tte
