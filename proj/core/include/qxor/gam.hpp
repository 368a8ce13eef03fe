#pragma once

#include <span>
#include <string>

#include "qxor/bounds.hpp"
#include "qxor/config.hpp"
#include "qxor/osn.hpp"

// Factorization norms through R cap C: the weight w, decomposition search for
// gamma, the Gamma interval and the cb-norm chain checks.
namespace qxor::gam {

// Squared (R +_2 C) (x)min X norm of the tuple.
double weight_w(const osn::MatrixTuple& t);

struct SandwichCheck {
  double lhs = 0.0;  // squared (R + C) (x)min X norm
  double w = 0.0;
  double rhs = 0.0;  // equal to lhs: the weight sits between lhs/2 and lhs
  bool ok = false;
};

SandwichCheck weight_sandwich_check(const osn::MatrixTuple& t);

// z = sum_ab coeff_ab e_a (x) f_b in X (x) Y with a decomposition
// z = sum_i x_i (x) y_i stored as coordinate rows.
class TensorElement {
 public:
  TensorElement(osn::ConcreteSpace X, osn::ConcreteSpace Y, ComplexMatrix coeff);
  // Tensor of u: M_n -> Y, living in S_1^n (x) Y.
  static TensorElement from_map(const osn::LinearMapRep& u);

  const osn::ConcreteSpace& X() const { return x_; }
  const osn::ConcreteSpace& Y() const { return y_; }
  const ComplexMatrix& coefficients() const { return coeff_; }
  const ComplexMatrix& x_coords() const { return xc_; }
  const ComplexMatrix& y_coords() const { return yc_; }
  Index rank() const { return xc_.rows(); }

  // Replaces the decomposition; throws ValidationError unless it reconstructs z to 1e-10.
  void set_decomposition(ComplexMatrix xc, ComplexMatrix yc);
  osn::MatrixTuple x_tuple() const;
  osn::MatrixTuple y_tuple() const;
  TensorElement scaled(double t) const;
  // T_z : X* -> Y, defined when X is a trace class.
  osn::LinearMapRep map() const;

 private:
  osn::ConcreteSpace x_, y_;
  ComplexMatrix coeff_;
  ComplexMatrix xc_, yc_;
};

// (R cap C) (x)min X norm and (R +_2 C) (x)min Y norm of the stored tuples.
double x_tuple_norm(const TensorElement& z);
double y_tuple_norm(const TensorElement& z);

struct GammaOptions {
  int iterations = 60;
  double initial_step = 0.3;
};

struct GammaResult {
  double gamma_upper = 0.0;
  TensorElement decomposition;  // balanced so both tuple norms equal sqrt(gamma_upper)
  int accepted = 0;
  int proposals = 0;
  double start_value = 0.0;  // value of the operator-Schmidt decomposition
};

GammaResult gamma_rc_upper(const TensorElement& z, const SolverBudget& budget, const GammaOptions& options = {});

// [cb lower bound of T_z, sqrt(2) gamma_upper]; throws ConsistencyError when
// lower exceeds upper by more than 1e-6.
BoundInterval gamma_to_Gamma(const TensorElement& z, double gamma_upper, const SolverBudget& budget,
                             std::span<const Index> levels = {});

struct MabCertificate {
  double cb_lower = 0.0;
  bool ok = false;
};

MabCertificate mab_certify(const ComplexMatrix& a, const ComplexMatrix& b, const SolverBudget& budget,
                           std::span<const Index> levels = {});

struct ChainCheck {
  double cb_lower = 0.0;
  double bound = 0.0;  // 8 sqrt(2) times the known pi_{1,cb}
  bool ok = false;
};

ChainCheck chain_check(const osn::LinearMapRep& u, double known_pi1cb, const SolverBudget& budget,
                       std::span<const Index> levels = {});

}  // namespace qxor::gam
