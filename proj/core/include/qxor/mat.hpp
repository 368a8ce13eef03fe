#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qxor/config.hpp"
#include "qxor/errors.hpp"

namespace qxor {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Dense Hermitian matrix stored in exactly symmetrized form.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  // Checks max |m - m^dag| <= symmetry tolerance (relative to max(1, max|m|)).
  explicit HermitianMatrix(const ComplexMatrix& m);

  // No check; use only on values that are Hermitian up to rounding.
  static HermitianMatrix symmetrized(const ComplexMatrix& m);
  static HermitianMatrix identity(Index n);
  static HermitianMatrix zero(Index n);

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  operator const ComplexMatrix&() const { return m_; }

 private:
  ComplexMatrix m_;
};

namespace mat {

void require_finite(const ComplexMatrix& m, const std::string& what);
void require_square(const ComplexMatrix& m, const std::string& what);

struct Eigh {
  RealVector values;      // descending
  ComplexMatrix vectors;  // columns, unitary
};

Eigh eigh(const HermitianMatrix& m);
// Reads the lower triangle of a matrix assumed Hermitian.
Eigh eigh_lower(const ComplexMatrix& m);

RealVector singular_values(const ComplexMatrix& m);
double trace_norm(const ComplexMatrix& m);
double trace_norm(const HermitianMatrix& m);
double op_norm(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);

// U sign(Lambda) U^dag with eigenvalues of magnitude <= 1e-12 mapped to +1.
HermitianMatrix sign_hermitian(const HermitianMatrix& m);
// V U^dag from m = U S V^dag; maximizes Re tr(m X) over contractions X.
ComplexMatrix polar_contraction(const ComplexMatrix& m);

struct TopSingular {
  double value = 0.0;
  ComplexVector left;
  ComplexVector right;
};
// Largest singular value with unit singular vectors, m * right = value * left.
TopSingular top_singular(const ComplexMatrix& m);

// G acts on C^n (x) C^m with composite index (i, k) -> i*m + k.
// D_kl = sum_ij G_(i,k),(j,l) A_ji, so tr(G (A (x) B)) = tr(D B).
ComplexMatrix partial_contract_A(const ComplexMatrix& G, const ComplexMatrix& A, Index n, Index m);
// C_ij = sum_kl G_(i,k),(j,l) B_lk, so tr(G (A (x) B)) = tr(C A).
ComplexMatrix partial_contract_B(const ComplexMatrix& G, const ComplexMatrix& B, Index n, Index m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Reorders tensor legs. The input acts on legs with the given row and column
// dimensions (leg 0 outermost); leg t of the input becomes leg order[t] of the
// output. Equivalently the result is P M Q^dag where P, Q are the permutation
// unitaries sending e_{i_0} (x) ... (x) e_{i_{r-1}} to the basis vector whose
// leg order[t] carries i_t.
ComplexMatrix permute_registers(const ComplexMatrix& m, std::span<const Index> row_dims,
                                std::span<const Index> col_dims, std::span<const Index> order);
ComplexMatrix permute_registers(const ComplexMatrix& m, std::span<const Index> dims,
                                std::span<const Index> order);
// Kronecker product of the factors followed by permute_registers.
ComplexMatrix kron_permuted(std::span<const ComplexMatrix> factors, std::span<const Index> order);

// Functions of Hermitian PSD matrices; negative eigenvalues are clipped to 0.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);
ComplexMatrix psd_inv_sqrt(const ComplexMatrix& m, double floor);

// Orthonormal basis of the real space of n x n Hermitian matrices under
// Re tr(A B): E_ii, then (E_ij + E_ji)/sqrt2 and i(E_ij - E_ji)/sqrt2.
std::vector<ComplexMatrix> hermitian_basis(Index n);

// Validation with clipping of sub-tolerance violations; larger ones throw.
HermitianMatrix clip_contraction(const ComplexMatrix& m, double tol, const std::string& what);
HermitianMatrix clip_psd(const ComplexMatrix& m, double tol, const std::string& what);

using Rng = std::mt19937_64;

// Independent stream for (seed, index); results do not depend on the order
// in which streams are consumed.
Rng make_stream(std::uint64_t seed, std::uint64_t index);

ComplexMatrix random_ginibre(Index rows, Index cols, Rng& rng);
HermitianMatrix random_gue(Index n, Rng& rng);
ComplexMatrix random_unitary(Index n, Rng& rng);
ComplexVector random_unit_vector(Index n, Rng& rng);
HermitianMatrix random_observable(Index n, Rng& rng);
ComplexMatrix random_contraction(Index rows, Index cols, Rng& rng);
HermitianMatrix random_density(Index n, Rng& rng);

}  // namespace mat
}  // namespace qxor
