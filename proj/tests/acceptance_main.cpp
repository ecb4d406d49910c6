#include <iostream>

#include "g2lab/acceptance.hpp"
#include "oracles.hpp"

int main() {
  g2lab::AcceptanceOptions opt;
  opt.oracleSuite = oracle::oracle_equivalence_suite;
  int failed = 0;
  for (const auto& r : g2lab::run_acceptance(opt)) {
    std::cout << g2lab::format_result(r) << std::endl;
    failed += !r.pass;
  }
  std::cout << failed << " criteria failed" << std::endl;
  return failed == 0 ? 0 : 1;
}
