#include <gtest/gtest.h>

#include <cmath>

#include "qxor/errors.hpp"
#include "qxor/gam.hpp"
#include "qxor/game.hpp"

using namespace qxor;

namespace {

SolverBudget budget(int restarts) {
  SolverBudget b;
  b.restarts = restarts;
  b.max_sweeps = 200;
  b.seed = 11;
  return b;
}

ComplexMatrix unit(Index n, Index i, Index j) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

osn::MatrixTuple random_tuple(Index d, Index n, mat::Rng& rng) {
  std::vector<ComplexMatrix> items;
  for (Index k = 0; k < d; ++k) items.push_back(mat::random_ginibre(n, n, rng));
  return osn::MatrixTuple(std::move(items));
}

}  // namespace

TEST(Weight, SandwichHolds) {
  mat::Rng rng = mat::make_stream(1, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = gam::weight_sandwich_check(random_tuple(1 + trial % 3, 2, rng));
    EXPECT_TRUE(c.ok) << trial << ": " << c.lhs << " " << c.w;
    EXPECT_LE(c.w, c.lhs * (1.0 + 1e-6));
    EXPECT_GE(c.w, c.lhs / 2.0 * (1.0 - 1e-6));
  }
  const auto single = gam::weight_sandwich_check(osn::MatrixTuple({unit(2, 0, 1)}));
  EXPECT_TRUE(single.ok);
  const auto zero = gam::weight_sandwich_check(osn::MatrixTuple::zeros(2, 2, 2));
  EXPECT_TRUE(zero.ok);
  EXPECT_EQ(zero.w, 0.0);
}

TEST(Weight, QuadraticHomogeneity) {
  mat::Rng rng = mat::make_stream(2, 0);
  const osn::MatrixTuple t = random_tuple(2, 2, rng);
  const double w = gam::weight_w(t);
  EXPECT_NEAR(gam::weight_w(t.scaled(3.0)) / (9.0 * w), 1.0, 1e-3);
  EXPECT_NEAR(gam::weight_w(t.scaled(Complex(0, 1))) / w, 1.0, 1e-3);
}

TEST(TensorElement, SchmidtDecompositionReconstructs) {
  const auto u = associated_map(random_game(2, 2, 3));
  const auto z = gam::TensorElement::from_map(u);
  EXPECT_LT(mat::max_abs(z.x_coords().transpose() * z.y_coords() - z.coefficients()), 1e-12);
  EXPECT_TRUE(z.X().is_dual());
  EXPECT_LT(mat::max_abs(z.map().coefficients() - u.coefficients()), 1e-14);
}

TEST(TensorElement, RejectsWrongDecomposition) {
  auto z = gam::TensorElement::from_map(associated_map(random_game(2, 2, 4)));
  EXPECT_THROW(z.set_decomposition(2.0 * z.x_coords(), z.y_coords()), ValidationError);
  EXPECT_THROW(z.set_decomposition(z.x_coords().leftCols(1), z.y_coords()), DimensionError);
  EXPECT_THROW(gam::TensorElement(osn::ConcreteSpace::diagonal(2), osn::ConcreteSpace::diagonal(3), ComplexMatrix::Zero(3, 2)),
               DimensionError);
}

TEST(TensorElement, UnitaryMixingKeepsTensorAndRowColumnNorm) {
  auto z = gam::TensorElement::from_map(associated_map(random_game(2, 2, 5)));
  const double before = gam::x_tuple_norm(z);
  mat::Rng rng = mat::make_stream(3, 0);
  const ComplexMatrix u = mat::random_unitary(z.rank(), rng);
  z.set_decomposition(u * z.x_coords(), u.conjugate() * z.y_coords());
  EXPECT_LT(mat::max_abs(z.x_coords().transpose() * z.y_coords() - z.coefficients()), 1e-12);
  EXPECT_NEAR(gam::x_tuple_norm(z), before, 1e-7);
}

TEST(Gamma, SearchNeverWorsensTheStart) {
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto z = gam::TensorElement::from_map(associated_map(random_game(2, 2, 20 + s)));
    const auto r = gam::gamma_rc_upper(z, budget(1), {10, 0.3});
    EXPECT_LE(r.gamma_upper, r.start_value * (1.0 + 1e-12));
    EXPECT_GT(r.gamma_upper, 0.0);
    const double product = gam::x_tuple_norm(r.decomposition) * gam::y_tuple_norm(r.decomposition);
    EXPECT_NEAR(product, r.gamma_upper, 1e-6 * r.gamma_upper);
    EXPECT_NEAR(gam::x_tuple_norm(r.decomposition), gam::y_tuple_norm(r.decomposition), 1e-6);
  }
}

TEST(Gamma, StartValueScalesLinearly) {
  const auto z = gam::TensorElement::from_map(associated_map(random_game(2, 2, 6)));
  const auto a = gam::gamma_rc_upper(z, budget(1), {0, 0.3});
  const auto b = gam::gamma_rc_upper(z.scaled(2.5), budget(1), {0, 0.3});
  EXPECT_NEAR(b.start_value, 2.5 * a.start_value, 1e-6 * a.start_value);
}

TEST(Gamma, IntervalForTranspose) {
  const auto z = gam::TensorElement::from_map(associated_map(swap_operator(2)));
  const auto g = gam::gamma_rc_upper(z, budget(2), {10, 0.3});
  const std::vector<Index> levels{1, 2};
  const BoundInterval big = gam::gamma_to_Gamma(z, g.gamma_upper, budget(4), levels);
  EXPECT_GE(big.lower, 2.0 - 1e-6);
  EXPECT_LE(big.lower, big.upper + 1e-6);
}

TEST(Gamma, ZeroTensor) {
  const gam::TensorElement z(osn::ConcreteSpace::dual_matrix_algebra(2), osn::ConcreteSpace::matrix_algebra(2),
                             ComplexMatrix::Zero(4, 4));
  const auto g = gam::gamma_rc_upper(z, budget(1), {5, 0.3});
  EXPECT_EQ(g.gamma_upper, 0.0);
  const BoundInterval big = gam::gamma_to_Gamma(z, g.gamma_upper, budget(1));
  EXPECT_EQ(big.lower, 0.0);
  EXPECT_EQ(big.upper, 0.0);
}

TEST(Mab, Certificates) {
  const std::vector<Index> levels{1, 2};
  const auto e = gam::mab_certify(unit(2, 0, 0), unit(2, 0, 0), budget(2), levels);
  EXPECT_TRUE(e.ok);
  EXPECT_NEAR(e.cb_lower, 1.0, 1e-6);
  const auto z = gam::mab_certify(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2), budget(1), levels);
  EXPECT_TRUE(z.ok);
  EXPECT_EQ(z.cb_lower, 0.0);
  mat::Rng rng = mat::make_stream(7, 0);
  for (int trial = 0; trial < 5; ++trial) {
    ComplexMatrix a = mat::random_ginibre(2, 2, rng), b = mat::random_ginibre(2, 2, rng);
    a /= a.norm();
    b /= b.norm();
    const auto c = gam::mab_certify(a, b, budget(2), levels);
    EXPECT_TRUE(c.ok);
    // x = 1 is a contraction, so the norm is at least ||a b||_1; Hoelder caps level 1 by ||a||_2 ||b||_2.
    EXPECT_GE(c.cb_lower, mat::trace_norm(ComplexMatrix(a * b)) - 1e-9);
    EXPECT_LE(c.cb_lower, 4.0 * std::sqrt(2.0));
  }
}

TEST(Chain, TransposeAndZero) {
  const std::vector<Index> levels{1, 2};
  const auto t = gam::chain_check(associated_map(swap_operator(2)), 2.0, budget(3), levels);
  EXPECT_TRUE(t.ok);
  EXPECT_NEAR(t.bound, 16.0 * std::sqrt(2.0), 1e-12);
  const BipartiteOperator zero(HermitianMatrix::zero(4), 2, 2);
  const auto z = gam::chain_check(associated_map(zero), 0.0, budget(1), levels);
  EXPECT_TRUE(z.ok);
}
