#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qxor/bounds.hpp"
#include "qxor/config.hpp"
#include "qxor/mat.hpp"

namespace qxor::osn {

// Finite ordered tuple of same-shape matrices.
class MatrixTuple {
 public:
  MatrixTuple() = default;
  explicit MatrixTuple(std::vector<ComplexMatrix> items);
  static MatrixTuple zeros(Index d, Index rows, Index cols);

  Index size() const { return static_cast<Index>(items_.size()); }
  Index rows() const { return items_.empty() ? 0 : items_.front().rows(); }
  Index cols() const { return items_.empty() ? 0 : items_.front().cols(); }
  const ComplexMatrix& operator[](Index k) const { return items_[static_cast<std::size_t>(k)]; }
  const std::vector<ComplexMatrix>& items() const { return items_; }

  MatrixTuple scaled(Complex t) const;
  MatrixTuple operator+(const MatrixTuple& o) const;
  MatrixTuple operator-(const MatrixTuple& o) const;
  // (a (x) id)(t): entry i is sum_j a_ij t_j, a has size d' x d.
  MatrixTuple mixed(const ComplexMatrix& a) const;
  static MatrixTuple concat(const MatrixTuple& a, const MatrixTuple& b);

  ComplexMatrix hcat() const;  // [x_1 ... x_d]
  ComplexMatrix vcat() const;  // [x_1; ...; x_d]
  double max_abs() const;

 private:
  std::vector<ComplexMatrix> items_;
};

double row_norm(const MatrixTuple& t);  // ||sum x x^dag||^{1/2}
double col_norm(const MatrixTuple& t);  // ||sum x^dag x||^{1/2}
double rc_norm(const MatrixTuple& t);

struct SplitOptions {
  double rel_accuracy = 1e-4;
  int iterations_per_stage = 300;
  double final_temperature = 1e-7;
};

// Result of an infimum over splittings t = T + S. value is attained by the
// returned splitting; lower is a certified dual lower bound.
struct SplitResult {
  double value = 0.0;
  double lower = 0.0;
  MatrixTuple row_part;
  MatrixTuple col_part;
  bool degraded = false;
};

// inf (row(T)^2 + col(S)^2)^{1/2}. Each seed is a candidate row part T.
SplitResult rplus2c_norm(const MatrixTuple& t, std::span<const MatrixTuple> seeds = {},
                         const SplitOptions& options = {});
// inf row(T) + col(S).
SplitResult rplusc_norm(const MatrixTuple& t, std::span<const MatrixTuple> seeds = {},
                        const SplitOptions& options = {});

// Tuple norms with entries in S_1^n (the dual of M_n under the parallel
// pairing <y, a> = sum_kl y_kl a_kl). Computed exactly by small SDPs; the
// returned values are attained by feasible points (certified upper, with the
// solver gap below 1e-9 relative).
double s1_row_norm(const MatrixTuple& t);
double s1_col_norm(const MatrixTuple& t);
double s1_rc_norm(const MatrixTuple& t);
SplitResult s1_rplus2c_norm(const MatrixTuple& t);

// A finite-dimensional concrete operator space.
class ConcreteSpace {
 public:
  enum class Kind { MatrixSubspace, DualOfMatrixAlgebra };

  static ConcreteSpace matrix_algebra(Index n);
  // Direct sum of full matrix blocks with matrix-unit basis, ordered block by
  // block and row-major inside each block.
  static ConcreteSpace block_diagonal(std::vector<Index> sizes);
  static ConcreteSpace diagonal(Index d);  // l_infinity^d
  static ConcreteSpace subspace(Index ambient, std::vector<ComplexMatrix> basis);
  // R cap C of dimension p, realized in M_{p+1} by E_0k + E_k0.
  static ConcreteSpace row_intersect_column(Index p);
  // S_1^n with basis E_kl in row-major order.
  static ConcreteSpace dual_matrix_algebra(Index n);

  Kind kind() const { return kind_; }
  bool is_dual() const { return kind_ == Kind::DualOfMatrixAlgebra; }
  Index dim() const { return static_cast<Index>(basis_.size()); }
  Index ambient() const { return ambient_; }
  const std::vector<ComplexMatrix>& basis() const { return basis_; }
  // Non-empty when the space is a block-diagonal algebra with matrix-unit basis.
  const std::vector<Index>& blocks() const { return blocks_; }
  const std::string& label() const { return label_; }

  ComplexMatrix element(const ComplexVector& coords) const;
  // Operator norm, or trace norm for the dual of a matrix algebra.
  double norm(const ComplexVector& coords) const;
  double norm_of(const ComplexMatrix& element) const;

 private:
  Kind kind_ = Kind::MatrixSubspace;
  Index ambient_ = 0;
  std::vector<ComplexMatrix> basis_;
  std::vector<Index> blocks_;
  std::string label_;
};

// Linear map between concrete spaces; coefficients has size dim(codomain) x dim(domain).
class LinearMapRep {
 public:
  LinearMapRep(ConcreteSpace domain, ConcreteSpace codomain, ComplexMatrix coefficients);

  const ConcreteSpace& domain() const { return domain_; }
  const ConcreteSpace& codomain() const { return codomain_; }
  const ComplexMatrix& coefficients() const { return coeff_; }
  ComplexVector apply(const ComplexVector& coords) const { return coeff_ * coords; }
  LinearMapRep scaled(Complex t) const;

 private:
  ConcreteSpace domain_;
  ConcreteSpace codomain_;
  ComplexMatrix coeff_;
};

// State of an amplified see-saw, reusable as a warm start at a higher level.
struct AmplifiedWitness {
  Index level = 0;
  std::vector<ComplexMatrix> x;  // one L x L matrix per domain basis element
  ComplexMatrix v;               // dual codomain only: contraction in M_L (x) M_m
  ComplexVector xi, eta;
  double value = 0.0;
};

struct AmplifiedResult {
  BoundInterval bounds;
  AmplifiedWitness witness;
  int converged_restarts = 0;
};

// Bounds for ||id_{M_L} (x) u||. The domain must be a block-diagonal algebra.
AmplifiedResult amplified_search(const LinearMapRep& u, Index level, const SolverBudget& budget,
                                 const AmplifiedWitness* warm = nullptr);
BoundInterval amplified_norm(const LinearMapRep& u, Index level, const SolverBudget& budget);

// ||(id (x) u)(X)|| / ||X|| for an explicit X in M_L (x) M_N (L outermost),
// exact for matrix codomains.
double amplified_ratio(const LinearMapRep& u, Index level, const ComplexMatrix& x);

// Trace norm of the coefficient tensor of u: M_n -> S_1^m, an upper bound for
// the cb norm.
double tensor_trace_norm(const LinearMapRep& u);

// Sum over domain basis of ||u(b_j)||: a certified bound for the cb norm.
double basis_triangle_bound(const LinearMapRep& u);

struct CbResult {
  BoundInterval bounds;
  std::vector<Index> levels;
  std::vector<double> level_lower;
  bool stabilized = false;
};

std::vector<Index> default_levels(const LinearMapRep& u);
CbResult cb_norm_bounds(const LinearMapRep& u, const SolverBudget& budget, std::span<const Index> schedule = {});

// L x L array of m x m blocks, block (p, q) at index p*L + q; an element of M_L(S_1^m).
struct DualArray {
  Index level = 0;
  Index m = 0;
  std::vector<ComplexMatrix> blocks;
};

// Lower bound for ||Z||_{M_L(S_1^m)} from contractions in M_k(M_m); exact at L = 1.
BoundInterval ml_dual_norm(const DualArray& z, Index k, const SolverBudget& budget);

struct Pi2Result {
  double value = 0.0;  // attained by a feasible diagonal (certified upper)
  double lower = 0.0;  // cutting-plane relaxation bound
  int cuts = 0;
  bool converged = false;
};

// 2-summing norm of u: l_infinity^d -> l_2^p with u(e_k) = column k of h.
Pi2Result pietsch_pi2(const ComplexMatrix& h);

struct OrderingResult {
  bool dominated = false;
  std::optional<ComplexMatrix> witness;
  double residual = 0.0;
  double witness_norm = 0.0;
};

// Tests whether x_i = sum_j a_ij y_j for a contraction a.
OrderingResult ordering_check(const MatrixTuple& xs, const MatrixTuple& ys);

}  // namespace qxor::osn
