#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qxor/bias.hpp"
#include "qxor/config.hpp"

namespace qxor::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,     // selftest failure or internal inconsistency
  kParse = 2,       // unreadable input, malformed JSON or bad command line
  kValidation = 3,  // input violates an invariant
  kBudget = 4,      // a solver stopped below the required quality
};

struct RunConfig {
  std::uint64_t seed = 0;
  int restarts = 20;
  int max_sweeps = 500;
  double tol = 1e-8;
  int threads = 1;
  std::vector<Index> messages{1, 2, 4};
  std::vector<std::string> ancilla{"1x1", "2x2", "3x3", "4x4"};
  std::vector<Index> levels;  // empty: default schedule
  std::string format = "json";
  std::string out;  // empty: standard output

  // Throws ValidationError naming the offending setting.
  void validate() const;
  SolverBudget budget() const;
  bias::HierarchyConfig hierarchy() const;
};

// Parses "AxB" into ancilla dimensions.
bias::AncillaDims parse_ancilla(const std::string& s);

// argv-style entry point; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qxor::cli
