#include "qxor/config.hpp"

#include <cmath>

#include "qxor/errors.hpp"

namespace qxor {

void SolverBudget::validate() const {
  if (restarts < 1) throw ValidationError("budget.restarts", "must be positive");
  if (max_sweeps < 1) throw ValidationError("budget.max_sweeps", "must be positive");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ValidationError("budget.tol", "must be a positive finite number");
}

}  // namespace qxor
