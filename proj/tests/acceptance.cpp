// Runs every acceptance check and prints one PASS/FAIL line per criterion.
#include "cornerlab/acceptance.hpp"

#include <iostream>
#include <string>

int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  const auto results = cornerlab::run_acceptance(filter, 1, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += !r.passed;
  std::cout << (results.size() - failed) << '/' << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
