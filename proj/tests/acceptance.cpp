#include <cstdlib>
#include <iostream>
#include <string>

#include "toricdist/checks.hpp"

int main(int argc, char** argv) {
  bool all = true;
  for (int id = 1; id <= toricdist::kAcceptanceCount; ++id) {
    if (argc > 1 && std::to_string(id) != argv[1]) continue;
    const auto r = toricdist::run_acceptance_check(id);
    std::cout << toricdist::format_line(r) << std::endl;
    all = all && r.passed;
  }
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
