#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace qxor::acceptance {

struct Settings {
  std::uint64_t seed = 20240607;
  // Multiplies every numeric tolerance; 0.1 tightens the suite tenfold.
  double tol_scale = 1.0;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id = 0;
  std::string title;
  std::function<Outcome(const Settings&)> run;
};

const std::vector<Criterion>& criteria();

struct Result {
  int id = 0;
  std::string title;
  Outcome outcome;
  double seconds = 0.0;
};

// Runs every criterion (or only `only` when non-empty) and prints one line each.
std::vector<Result> run(const Settings& settings, std::ostream& out, const std::vector<int>& only = {});

void list(std::ostream& out);

}  // namespace qxor::acceptance
