#pragma once

#include <limits>
#include <string>

namespace qxor {

// A certified lower bound and a certified upper bound with the name of the
// method that produced each side.
struct BoundInterval {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  std::string lower_method;
  std::string upper_method = "none";

  static BoundInterval exact(double value, const std::string& method) {
    return BoundInterval{value, value, method, method};
  }

  bool has_upper() const { return upper < std::numeric_limits<double>::infinity(); }
  bool contains(double x, double tol) const { return x >= lower - tol && x <= upper + tol; }
  // Throws ConsistencyError when lower > upper + 1e-9.
  void validate(const std::string& what) const;
  BoundInterval scaled(double t) const;
};

}  // namespace qxor
