// Runs every acceptance criterion with default settings and prints one
// line per criterion. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <iostream>

#include "tte/verify.hpp"

int main(int argc, char** argv) {
  tte::VerifyOptions opt;
  if (argc > 1) opt.threads = std::atoi(argv[1]);
  std::cout << std::unitbuf;
  bool all = true;
  for (int id : tte::suite_criteria("all")) {
    const auto t0 = std::chrono::steady_clock::now();
    tte::CriterionResult r;
    try {
      r = tte::run_criterion(id, opt);
    } catch (const std::exception& e) {
      r.id = id;
      r.name = std::string("threw: ") + e.what();
      r.pass = false;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char line[64];
    std::snprintf(line, sizeof line, "criterion %2d: %s  (%.2f s)  ", id, r.pass ? "PASS" : "FAIL", secs);
    std::cout << line << r.name << "\n";
    all = all && r.pass;
  }
  std::cout << (all ? "all criteria pass" : "some criteria FAIL") << "\n";
  return all ? 0 : 1;
}
