#pragma once

// Colored rectangle graphs: G for a tuple of (partial) permutations, its
// adjoint G*, and the moment graph G^(p) gluing p copies of each.
//
// A rectangle has k in-vertices and k out-vertices, one per color (leg).
// Vertex ids: in(r, c) = 2 (r k + c), out(r, c) = 2 (r k + c) + 1.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tte/perm.hpp"

namespace tte {

enum class EdgeKind : std::uint8_t { plain, yellow };

struct RectLabel {
  int index = 0;         // i of A_i, 0-based
  bool adjoint = false;  // A_i* when true
  int copy = -1;         // r of rG / rG* in moment graphs (0-based), else -1

  std::string name() const;  // "A1", "A1*"; moment graphs prefix the copy: "1:A2*"
};

struct Edge {
  int src = 0;
  int dst = 0;
  int color = 0;
  EdgeKind kind = EdgeKind::plain;
};

class TensorGraph {
 public:
  TensorGraph() = default;
  TensorGraph(int k, std::vector<RectLabel> rects);

  /// Adds src -> dst of `color`; throws InputError if either endpoint is taken.
  void add_edge(int src, int dst, int color, EdgeKind kind);

  int k() const { return k_; }
  int num_rects() const { return static_cast<int>(rects_.size()); }
  int num_vertices() const { return 2 * k_ * num_rects(); }
  const std::vector<RectLabel>& rects() const { return rects_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Edge id leaving/entering the given vertex of color c, or -1 when open.
  int out_edge(int r, int c) const { return out_edge_[r * k_ + c]; }
  int in_edge(int r, int c) const { return in_edge_[r * k_ + c]; }

  int count_open_in() const;
  int count_open_out() const;
  int count_edges(EdgeKind kind) const;

  /// Plain edges with src position >= dst position, plus every yellow edge.
  int backward_bound() const;

  bool operator==(const TensorGraph&) const;

 private:
  int k_ = 0;
  std::vector<RectLabel> rects_;
  std::vector<Edge> edges_;
  std::vector<int> out_edge_;
  std::vector<int> in_edge_;
};

inline bool operator==(const RectLabel& a, const RectLabel& b) {
  return a.index == b.index && a.adjoint == b.adjoint && a.copy == b.copy;
}
inline bool operator==(const Edge& a, const Edge& b) {
  return a.src == b.src && a.dst == b.dst && a.color == b.color && a.kind == b.kind;
}

inline int in_vertex(int k, int r, int c) { return 2 * (r * k + c); }
inline int out_vertex(int k, int r, int c) { return 2 * (r * k + c) + 1; }

/// G: edge A_i -> A_{sigma_j(i)} of color j for i in D(sigma_j).
TensorGraph build(std::span<const PartialPermutation> sigmas, int m);
/// G*: edge A*_{sigma_j(i)} -> A*_i.
TensorGraph build_adjoint(std::span<const PartialPermutation> sigmas, int m);
/// G^(p): copies 1G, 1G*, 2G, ..., pG* glued cyclically by yellow edges.
TensorGraph build_moment(std::span<const PartialPermutation> sigmas, int m, int p);

// --- blue pairings -----------------------------------------------------------

/// One permutation pi_r of [k] per rectangle: the blue edge of rectangle r
/// runs from in(r, c) to out(r, pi_r(c)).
class BluePairing {
 public:
  BluePairing() = default;
  /// Identity on every rectangle.
  BluePairing(int k, int rects);
  /// Per-rectangle lexicographic ranks; throws InputError if out of range.
  static BluePairing from_ranks(int k, std::span<const std::uint32_t> ranks);

  int k() const { return k_; }
  int num_rects() const { return k_ == 0 ? 0 : static_cast<int>(pi_.size()) / k_; }
  int operator()(int r, int c) const { return pi_[r * k_ + c]; }
  void set(int r, int c, int d) { pi_[r * k_ + c] = static_cast<std::uint8_t>(d); }
  void swap_targets(int r, int c1, int c2);

  std::vector<int> perm(int r) const;
  std::uint32_t rank(int r) const;
  std::vector<std::uint32_t> ranks() const;

  /// Advances to the next pairing in lexicographic order of rank tuples
  /// (rectangle 0 most significant); returns false after the last one,
  /// leaving the all-identity pairing.
  bool next();

  bool operator==(const BluePairing&) const = default;
  auto operator<=>(const BluePairing&) const = default;

 private:
  int k_ = 0;
  std::vector<std::uint8_t> pi_;
};

/// (k!)^rects, saturating at UINT64_MAX.
std::uint64_t pairing_count(int k, int rects);
/// Pairing at position `index` of the lexicographic enumeration.
BluePairing pairing_at(int k, int rects, std::uint64_t index);

// --- cycles ------------------------------------------------------------------

struct Walk {
  std::vector<int> vertices;
  std::vector<int> edges;  // graph edges traversed (blue edges are implicit)
};

struct CycleReport {
  std::vector<Walk> cycles;
  std::vector<Walk> open_paths;
  std::vector<int> backward_per_cycle;
  std::vector<int> yellow_per_cycle;
  /// Component of every vertex: cycles are 0..C-1, open paths C..C+P-1.
  std::vector<int> component;

  int num_cycles() const { return static_cast<int>(cycles.size()); }
};

/// Walks the functional graph of g with blue edges from b.
/// Open paths are traced first, from open in-vertices in vertex order; cycles
/// then start at the smallest unvisited vertex.
CycleReport count_cycles(const TensorGraph& g, const BluePairing& b);
/// Number of cycles only.
int cycle_count(const TensorGraph& g, const BluePairing& b);

// --- partial graphs ------------------------------------------------------------

struct Selection {
  std::vector<char> rects;
  std::vector<char> edges;

  static Selection full(const TensorGraph& g);
  static Selection empty(const TensorGraph& g);
  int num_rects() const;
  int num_edges() const;
  bool operator==(const Selection&) const = default;
};

/// Throws InputError unless sizes match and every selected edge joins selected rectangles.
void validate(const TensorGraph& g, const Selection& s);
/// The selected rectangles (renumbered in order) and edges; other vertices become open.
TensorGraph induced(const TensorGraph& g, const Selection& s);

/// Peeling test: repeatedly drop rectangles without selected in-edges or
/// out-edges; simple iff nothing survives.
bool is_simple(const TensorGraph& g, const Selection& s);
/// Tries every pairing of the induced graph; throws CapExceeded above `limit`.
bool brute_force_has_cycle(const TensorGraph& g, const Selection& s, std::uint64_t limit = 1'000'000);
/// Flips membership of every rectangle and edge.
Selection complement(const TensorGraph& g, const Selection& s);

// --- output -----------------------------------------------------------------

std::string to_dot(const TensorGraph& g, const BluePairing* b = nullptr);
nlohmann::json to_json(const TensorGraph& g);
nlohmann::json to_json(const PartialPermutation& p);

}  // namespace tte
