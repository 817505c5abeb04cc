#include <iostream>

#include "doilab/checks.hpp"

int main() {
  const auto options = doilab::checks::acceptance_options();
  int failures = 0;
  int index = 0;
  for (const auto& r : doilab::checks::acceptance_suite(options)) {
    std::cout << "[" << ++index << "] " << doilab::checks::format(r) << std::endl;
    if (!r.passed) ++failures;
  }
  std::cout << (failures == 0 ? "acceptance: all criteria passed" : "acceptance: FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
