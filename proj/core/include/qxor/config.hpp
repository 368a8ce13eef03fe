#pragma once

#include <cstdint>

namespace qxor {

struct Tolerances {
  double symmetry = 1e-12;      // Hermiticity at construction (relative to max entry)
  double identity = 1e-10;      // numeric identities, strategy validation
  double convergence = 1e-8;    // relative optimizer convergence
  double monotonicity = 1e-9;   // largest tolerated see-saw decrease
  double zero_eigenvalue = 1e-12;
  double rank = 1e-10;          // singular values below rank*sigma_max are zero
  double soundness = 1e-8;      // lower bounds may exceed beta_owq by this much
  double instrument_gap = 1e-4;
};

inline constexpr Tolerances kTol{};

struct SolverBudget {
  int restarts = 20;
  int max_sweeps = 500;
  double tol = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
};

}  // namespace qxor
