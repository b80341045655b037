#pragma once

#include <cstdint>
#include <string_view>

namespace tte {

/// Resource limits shared by the search and contraction routines.
///
/// Defaults keep every routine at desk scale. `TTE_CAPS` may override
/// them with a comma list such as `pairings=20000000,terms=1e8,dim=4096`.
struct Caps {
  std::uint64_t pairings = 10'000'000;      // branch-and-bound nodes per search
  std::uint64_t terms = 100'000'000;        // index assignments per contraction
  std::uint64_t dim = 4096;                 // largest N^k for a U_pi matrix
  std::uint64_t brute_force = 1'000'000;    // pairings for the simplicity oracle
  int conjugation_m = 8;                    // exhaustive conjugator search

  /// Parses the `TTE_CAPS` syntax on top of `base`. Unknown keys throw InputError.
  static Caps parse(std::string_view text, const Caps& base);
  static Caps parse(std::string_view text);
  /// Defaults overridden by the `TTE_CAPS` environment variable, if set.
  static Caps from_env();
};

}  // namespace tte
