#pragma once

// Acceptance checks shared by `tte verify` and the acceptance binary.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tte/caps.hpp"

namespace tte {

struct VerifyOptions {
  int max_m = 3;
  int max_k = 2;
  int N = 2;
  int threads = 1;
  std::uint64_t seed = 1;
  int mc_samples = 100'000;
  int mc_seeds = 10;
  Caps caps{};
  bool inject_fault = false;  // corrupts the dense oracle; harness self-test
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  nlohmann::json details;
};

/// Criterion ids of a suite: core, moments, ginibre or all.
std::vector<int> suite_criteria(const std::string& suite);
CriterionResult run_criterion(int id, const VerifyOptions& opt);
/// {"suite":..., "pass":..., "criteria":[{"id","name","pass","details"}]}.
nlohmann::json run_suite(const std::string& suite, const VerifyOptions& opt,
                         const std::function<void(const CriterionResult&)>& on_result = {});

/// Calls fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace tte
