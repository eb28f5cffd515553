// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
#include <cstdio>

#include "bloch/validate.hpp"

int main() {
  const auto checks = bloch::run_acceptance_checks();
  bool all_pass = true;
  int passed = 0;
  for (const auto& check : checks) {
    all_pass = all_pass && check.pass;
    passed += check.pass ? 1 : 0;
    std::printf("[%s] %2d %-30s %s\n", check.pass ? "PASS" : "FAIL", check.id, check.name.c_str(),
                check.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%zu criteria passed\n", passed, checks.size());
  return all_pass ? 0 : 1;
}
