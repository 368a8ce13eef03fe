#include <gtest/gtest.h>

#include <cmath>

#include "qxor/errors.hpp"
#include "qxor/mat.hpp"

using namespace qxor;

namespace {

ComplexMatrix pauli_x() {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = a;
  d(1, 1) = b;
  return d;
}

}  // namespace

TEST(Eigh, DiagonalInputKeepsBasis) {
  const auto e = mat::eigh(HermitianMatrix(diag2(3, 1)));
  EXPECT_NEAR(e.values(0), 3.0, 1e-14);
  EXPECT_NEAR(e.values(1), 1.0, 1e-14);
  EXPECT_LT(mat::max_abs(e.vectors - ComplexMatrix::Identity(2, 2)), 1e-14);
}

TEST(Eigh, PauliXSpectrum) {
  const auto e = mat::eigh(HermitianMatrix(pauli_x()));
  EXPECT_NEAR(e.values(0), 1.0, 1e-14);
  EXPECT_NEAR(e.values(1), -1.0, 1e-14);
}

TEST(Eigh, ReconstructsRandomGue) {
  mat::Rng rng = mat::make_stream(1, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianMatrix g = mat::random_gue(6, rng);
    const auto e = mat::eigh(g);
    const ComplexMatrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT((back - g.matrix()).norm(), 1e-10);
    for (Index i = 1; i < 6; ++i) EXPECT_GE(e.values(i - 1), e.values(i));
  }
}

TEST(Hermitian, RejectsLargeAsymmetry) {
  ComplexMatrix m = pauli_x();
  m(0, 1) = 2.0;
  EXPECT_THROW(HermitianMatrix{m}, ValidationError);
}

TEST(TraceNorm, ClosedForms) {
  EXPECT_NEAR(mat::trace_norm(ComplexMatrix::Identity(5, 5)), 5.0, 1e-12);
  ComplexMatrix swap = ComplexMatrix::Zero(4, 4);
  for (Index i = 0; i < 2; ++i) {
    for (Index k = 0; k < 2; ++k) swap(i * 2 + k, k * 2 + i) = 1.0;
  }
  EXPECT_NEAR(mat::trace_norm(swap), 4.0, 1e-12);
  ComplexVector v(3);
  v << Complex(1, 0), Complex(0, 1), Complex(1, 0);
  EXPECT_NEAR(mat::trace_norm(ComplexMatrix(v * v.adjoint())), 3.0, 1e-12);
}

TEST(TraceNorm, UnitarilyInvariantAndAboveOperatorNorm) {
  mat::Rng rng = mat::make_stream(2, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const ComplexMatrix m = mat::random_ginibre(4, 4, rng);
    const ComplexMatrix u = mat::random_unitary(4, rng), w = mat::random_unitary(4, rng);
    const double t = mat::trace_norm(m);
    EXPECT_NEAR(mat::trace_norm(ComplexMatrix(u * m * w)), t, 1e-9);
    EXPECT_GE(t, mat::op_norm(m) - 1e-12);
  }
}

TEST(SignHermitian, ClosedForms) {
  EXPECT_LT(mat::max_abs(mat::sign_hermitian(HermitianMatrix(diag2(2, -3))).matrix() - diag2(1, -1)), 1e-14);
  EXPECT_LT(mat::max_abs(mat::sign_hermitian(HermitianMatrix::zero(3)).matrix() - ComplexMatrix::Identity(3, 3)), 1e-14);
  EXPECT_LT(mat::max_abs(mat::sign_hermitian(HermitianMatrix(pauli_x())).matrix() - pauli_x()), 1e-12);
}

TEST(SignHermitian, MaximizesPairingOverContractions) {
  mat::Rng rng = mat::make_stream(3, 0);
  const HermitianMatrix d = mat::random_gue(4, rng);
  const ComplexMatrix x = mat::sign_hermitian(d).matrix();
  const double best = (d.matrix() * x).trace().real();
  EXPECT_NEAR(best, mat::trace_norm(d), 1e-10);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix y = mat::random_observable(4, rng).matrix();
    EXPECT_LE((d.matrix() * y).trace().real(), best + 1e-10);
  }
}

TEST(PolarContraction, ClosedForms) {
  mat::Rng rng = mat::make_stream(4, 0);
  const ComplexMatrix w = mat::random_unitary(3, rng);
  EXPECT_LT(mat::max_abs(mat::polar_contraction(w) - w.adjoint()), 1e-10);
  EXPECT_LT(mat::max_abs(mat::polar_contraction(diag2(2, -3)) - diag2(1, -1)), 1e-12);
  const ComplexMatrix m = mat::random_ginibre(3, 3, rng);
  EXPECT_NEAR((m * mat::polar_contraction(m)).trace().real(), mat::trace_norm(m), 1e-10);
}

TEST(PartialContract, ProductOperators) {
  mat::Rng rng = mat::make_stream(5, 0);
  const ComplexMatrix p = mat::random_ginibre(2, 2, rng), q = mat::random_ginibre(3, 3, rng);
  const ComplexMatrix a = mat::random_ginibre(2, 2, rng), b = mat::random_ginibre(3, 3, rng);
  const ComplexMatrix g = mat::kron(p, q);
  EXPECT_LT(mat::max_abs(mat::partial_contract_A(g, a, 2, 3) - (p * a).trace() * q), 1e-12);
  EXPECT_LT(mat::max_abs(mat::partial_contract_B(g, b, 2, 3) - (q * b).trace() * p), 1e-12);
}

TEST(PartialContract, SwapReturnsArgument) {
  ComplexMatrix swap = ComplexMatrix::Zero(9, 9);
  for (Index i = 0; i < 3; ++i) {
    for (Index k = 0; k < 3; ++k) swap(i * 3 + k, k * 3 + i) = 1.0;
  }
  mat::Rng rng = mat::make_stream(6, 0);
  const ComplexMatrix a = mat::random_ginibre(3, 3, rng);
  EXPECT_LT(mat::max_abs(mat::partial_contract_A(swap, a, 3, 3) - a), 1e-12);
  EXPECT_LT(mat::max_abs(mat::partial_contract_B(swap, a, 3, 3) - a), 1e-12);
}

TEST(PartialContract, IdentityGivesPartialTrace) {
  mat::Rng rng = mat::make_stream(7, 0);
  const ComplexMatrix g = mat::random_ginibre(6, 6, rng);
  ComplexMatrix trA = ComplexMatrix::Zero(3, 3), trB = ComplexMatrix::Zero(2, 2);
  for (Index i = 0; i < 2; ++i) trA += g.block(i * 3, i * 3, 3, 3);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      for (Index k = 0; k < 3; ++k) trB(i, j) += g(i * 3 + k, j * 3 + k);
    }
  }
  EXPECT_LT(mat::max_abs(mat::partial_contract_A(g, ComplexMatrix::Identity(2, 2), 2, 3) - trA), 1e-12);
  EXPECT_LT(mat::max_abs(mat::partial_contract_B(g, ComplexMatrix::Identity(3, 3), 2, 3) - trB), 1e-12);
}

TEST(PartialContract, ThreeWaysToPair) {
  mat::Rng rng = mat::make_stream(8, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix g = mat::random_gue(6, rng).matrix();
    const ComplexMatrix a = mat::random_ginibre(2, 2, rng), b = mat::random_ginibre(3, 3, rng);
    const Complex direct = (g * mat::kron(a, b)).trace();
    const Complex viaA = (mat::partial_contract_A(g, a, 2, 3) * b).trace();
    const Complex viaB = (mat::partial_contract_B(g, b, 2, 3) * a).trace();
    EXPECT_LT(std::abs(direct - viaA), 1e-10);
    EXPECT_LT(std::abs(direct - viaB), 1e-10);
  }
}

TEST(KronPermuted, IdentityOrderIsKron) {
  mat::Rng rng = mat::make_stream(9, 0);
  const std::vector<ComplexMatrix> f{mat::random_ginibre(2, 2, rng), mat::random_ginibre(3, 3, rng)};
  const std::vector<Index> order{0, 1};
  EXPECT_LT(mat::max_abs(mat::kron_permuted(f, order) - mat::kron(f[0], f[1])), 1e-14);
}

TEST(KronPermuted, SwappedIdentitiesAndReorderedFactor) {
  const std::vector<ComplexMatrix> ids{ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)};
  const std::vector<Index> swapped{1, 0};
  EXPECT_LT(mat::max_abs(mat::kron_permuted(ids, swapped) - ComplexMatrix::Identity(4, 4)), 1e-14);
  const std::vector<ComplexMatrix> xi{pauli_x(), ComplexMatrix::Identity(2, 2)};
  EXPECT_LT(mat::max_abs(mat::kron_permuted(xi, swapped) - mat::kron(ComplexMatrix::Identity(2, 2), pauli_x())), 1e-14);
}

TEST(Rng, StreamsAreReproducible) {
  mat::Rng a = mat::make_stream(42, 3), b = mat::make_stream(42, 3), c = mat::make_stream(42, 4);
  const auto x = a(), y = b(), z = c();
  EXPECT_EQ(x, y);
  EXPECT_NE(x, z);
}

TEST(RandomObjects, SatisfyTheirInvariants) {
  mat::Rng rng = mat::make_stream(10, 0);
  const ComplexMatrix u = mat::random_unitary(4, rng);
  EXPECT_LT(mat::max_abs(u * u.adjoint() - ComplexMatrix::Identity(4, 4)), 1e-12);
  EXPECT_LE(mat::op_norm(mat::random_contraction(3, 5, rng)), 1.0 + 1e-12);
  const ComplexMatrix a = mat::random_observable(3, rng).matrix();
  EXPECT_LE(mat::op_norm(a), 1.0 + 1e-12);
  const ComplexMatrix rho = mat::random_density(3, rng).matrix();
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
  EXPECT_GE(mat::eigh_lower(rho).values.minCoeff(), -1e-12);
}
