#pragma once

// The extremal exponent M: the largest number of directed cycles over all
// blue pairings of a rectangle graph, with bounds and certificates.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tte/caps.hpp"
#include "tte/graph.hpp"
#include "tte/perm.hpp"

namespace tte {

enum class Method { exhaustive, local_search, closed_form };
std::string to_string(Method m);

/// Raised when a witness has two blue edges of one rectangle on a common
/// cycle, so a swap would add a cycle.
class WitnessNotOptimal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Certificate {
  Selection kept;                  // full simple partial graph
  std::vector<int> removed_edges;  // one edge id per cycle of the witness
  bool smallest_rule = true;       // false when the fallback search was needed
  std::uint64_t tried = 1;         // removal choices examined
};

struct ExtremalResult {
  int M = 0;
  BluePairing witness;
  Method method = Method::exhaustive;
  int upper_bound_backward = 0;
  std::optional<Certificate> certificate;
  std::uint64_t nodes = 0;  // search nodes or local-search steps
};

struct SearchOptions {
  std::uint64_t node_limit = Caps{}.pairings;
  bool prune = true;
  /// Optional starting incumbent, e.g. from local search; pruning still
  /// returns the lexicographically smallest optimal pairing.
  const BluePairing* incumbent = nullptr;
};

/// Depth-first branch and bound over per-rectangle permutations in
/// lexicographic order. Throws CapExceeded past `node_limit` nodes.
ExtremalResult m_exhaustive(const TensorGraph& g, const SearchOptions& opt = {});
/// Plain enumeration of all (k!)^n pairings; test oracle.
ExtremalResult m_enumerate(const TensorGraph& g, std::uint64_t limit = Caps{}.pairings);

/// Hill climbing by blue-edge swaps from seeded random starts. Each swap
/// joins two blue edges of one rectangle lying on a common cycle or open
/// path and adds exactly one cycle (checked).
ExtremalResult m_local_search(const TensorGraph& g, int restarts = 32, std::uint64_t seed = 0);

/// Sum over legs of backward_count(sigma_j).
int backward_upper_bound(std::span<const PartialPermutation> sigmas);

/// Removes the smallest plain edge, ordered by (src, dst, color), from every
/// cycle of the witness (the smallest yellow edge when a cycle has no plain
/// edge). When that remainder is not simple, tries the other one-edge-per-cycle
/// choices in lexicographic order of the per-cycle ranks, up to `limit`.
/// Throws VerificationFailure if no choice yields a simple graph.
Certificate simple_certificate(const TensorGraph& g, const BluePairing& witness, std::uint64_t limit = 1'000'000);

/// 2 p M + sum_j (m - |D(sigma_j)|).
int moment_exponent(std::span<const PartialPermutation> sigmas, int p, int M);

struct BackwardFormula {
  int value = 0;  // R(sigma) + k - 1
  int K = 0;      // interval_K(sigma)
  bool applicable = false;
};
/// Closed form for M(sigma, gamma, ..., gamma) with k - 1 copies of the
/// increasing full cycle gamma.
BackwardFormula multi_backward_formula(const Permutation& sigma, int k);

/// Each sigma_j repeated a_j times (a_j = 1 when `multiplicities` is empty).
std::vector<PartialPermutation> expand_legs(std::span<const PartialPermutation> sigmas, std::span<const int> multiplicities);

enum class SearchMode { exhaustive, local, automatic };

struct ReportOptions {
  SearchMode mode = SearchMode::automatic;
  Caps caps{};
  int restarts = 32;
  std::uint64_t seed = 0;
  bool certificate = true;
};

/// Full result for the expanded system. `automatic` falls back to local
/// search when the exhaustive search exceeds its node cap.
ExtremalResult exponent_report(std::span<const PartialPermutation> sigmas, std::span<const int> multiplicities,
                               const ReportOptions& opt = {});

nlohmann::json to_json(const ExtremalResult& r, const TensorGraph& g);

}  // namespace tte
