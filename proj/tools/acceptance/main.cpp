#include <iostream>

#include "acceptance.hpp"

// One line per criterion; nonzero exit when any fails.
int main() {
  const auto results = qxor::acceptance::run({}, std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.outcome.pass ? 0 : 1;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
