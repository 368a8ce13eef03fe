#include <gtest/gtest.h>

#include <cmath>

#include "qxor/errors.hpp"
#include "qxor/game.hpp"
#include "qxor/osn.hpp"

using namespace qxor;
using osn::MatrixTuple;

namespace {

ComplexMatrix unit(Index n, Index i, Index j) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

MatrixTuple e11_e12() { return MatrixTuple({unit(2, 0, 0), unit(2, 0, 1)}); }

MatrixTuple random_tuple(Index d, Index n, mat::Rng& rng) {
  std::vector<ComplexMatrix> xs;
  for (Index k = 0; k < d; ++k) xs.push_back(mat::random_ginibre(n, n, rng));
  return MatrixTuple(xs);
}

SolverBudget small_budget(int restarts = 6) {
  SolverBudget b;
  b.restarts = restarts;
  b.max_sweeps = 300;
  b.seed = 17;
  return b;
}

osn::LinearMapRep transpose_map(Index n) {
  ComplexMatrix c = ComplexMatrix::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) c(j * n + i, i * n + j) = 1.0;
  }
  return osn::LinearMapRep(osn::ConcreteSpace::matrix_algebra(n), osn::ConcreteSpace::matrix_algebra(n), c);
}

osn::LinearMapRep random_map(Index n, Index m, bool dual, mat::Rng& rng) {
  const auto cod = dual ? osn::ConcreteSpace::dual_matrix_algebra(m) : osn::ConcreteSpace::matrix_algebra(m);
  return osn::LinearMapRep(osn::ConcreteSpace::matrix_algebra(n), cod, mat::random_ginibre(m * m, n * n, rng));
}

// Grid of random splittings T = t - S for the two-element example.
double grid_oracle(const MatrixTuple& t, int points, mat::Rng& rng) {
  double best = std::min(osn::row_norm(t), osn::col_norm(t));
  std::normal_distribution<double> normal;
  for (int p = 0; p < points; ++p) {
    std::vector<ComplexMatrix> s;
    for (Index k = 0; k < t.size(); ++k) {
      ComplexMatrix x = t[k];
      for (Index r = 0; r < x.rows(); ++r) {
        for (Index c = 0; c < x.cols(); ++c) x(r, c) *= normal(rng) * 0.5 + 0.5;
      }
      s.push_back(x);
    }
    const MatrixTuple S(s);
    const MatrixTuple T = t - S;
    best = std::min(best, std::hypot(osn::row_norm(T), osn::col_norm(S)));
  }
  return best;
}

}  // namespace

TEST(TupleNorms, ElementaryExamples) {
  const MatrixTuple t = e11_e12();
  EXPECT_NEAR(osn::row_norm(t), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(osn::col_norm(t), 1.0, 1e-12);
  EXPECT_NEAR(osn::rc_norm(t), std::sqrt(2.0), 1e-12);
  mat::Rng rng = mat::make_stream(1, 0);
  const MatrixTuple u({mat::random_unitary(3, rng)});
  EXPECT_NEAR(osn::row_norm(u), 1.0, 1e-12);
  EXPECT_NEAR(osn::col_norm(u), 1.0, 1e-12);
  EXPECT_NEAR(osn::rc_norm(u), 1.0, 1e-12);
}

TEST(TupleNorms, Homogeneous) {
  mat::Rng rng = mat::make_stream(2, 0);
  const MatrixTuple t = random_tuple(3, 3, rng);
  for (double s : {0.3, 2.5}) {
    EXPECT_NEAR(osn::row_norm(t.scaled(s)), s * osn::row_norm(t), 1e-12);
    EXPECT_NEAR(osn::col_norm(t.scaled(s)), s * osn::col_norm(t), 1e-12);
    // The solver is not exactly scale equivariant; agreement to its convergence tolerance.
    EXPECT_NEAR(osn::rplus2c_norm(t.scaled(s)).value, s * osn::rplus2c_norm(t).value, 1e-8 * s);
  }
}

TEST(TupleNorms, RejectsMixedShapes) {
  EXPECT_THROW(MatrixTuple({unit(2, 0, 0), unit(3, 0, 0)}), DimensionError);
}

// t = T + S with ||T|| + ||S|| >= ||x|| and equality at T = x/2, so the norm is ||x|| / sqrt 2.
TEST(SplitNorm, SingleElementIsHalfSplit) {
  mat::Rng rng = mat::make_stream(3, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix x = mat::random_ginibre(3, 3, rng);
    const auto r = osn::rplus2c_norm(MatrixTuple({x}));
    EXPECT_NEAR(r.value, mat::op_norm(x) / std::sqrt(2.0), 1e-6 * mat::op_norm(x));
    EXPECT_LE(r.lower, r.value + 1e-12);
  }
  EXPECT_NEAR(osn::rplus2c_norm(MatrixTuple({ComplexMatrix::Identity(3, 3)})).value, std::sqrt(0.5), 1e-6);
}

TEST(SplitNorm, TwoElementExampleAgainstGrid) {
  mat::Rng rng = mat::make_stream(4, 0);
  const MatrixTuple t = e11_e12();
  const double g = grid_oracle(t, 10000, rng);
  const auto r = osn::rplus2c_norm(t);
  EXPECT_GE(r.value, 0.9 * g);
  EXPECT_LE(r.value, g + 1e-12);
  EXPECT_NEAR(r.value, std::sqrt(2.0 / 3.0), 1e-4);
  EXPECT_LE(r.lower, r.value + 1e-12);
  // The returned splitting attains the value.
  EXPECT_NEAR(std::hypot(osn::row_norm(r.row_part), osn::col_norm(r.col_part)), r.value, 1e-12);
  EXPECT_LT((r.row_part + r.col_part - t).max_abs(), 1e-12);
}

TEST(SplitNorm, BelowPureSplittings) {
  mat::Rng rng = mat::make_stream(5, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const MatrixTuple t = random_tuple(1 + trial % 4, 3, rng);
    const auto q = osn::rplus2c_norm(t);
    const auto l = osn::rplusc_norm(t);
    EXPECT_LE(q.value, std::min(osn::row_norm(t), osn::col_norm(t)) + 1e-12);
    EXPECT_LE(l.value, std::min(osn::row_norm(t), osn::col_norm(t)) + 1e-12);
    EXPECT_LE(q.lower, q.value + 1e-12);
    EXPECT_LE(l.lower, l.value + 1e-12);
    EXPECT_FALSE(q.degraded);
  }
}

TEST(SplitNorm, ContractiveMixingDoesNotIncrease) {
  mat::Rng rng = mat::make_stream(6, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixTuple t = random_tuple(3, 3, rng);
    const ComplexMatrix a = mat::random_contraction(2 + trial % 3, 3, rng);
    const auto base = osn::rplus2c_norm(t);
    const std::vector<MatrixTuple> seeds{base.row_part.mixed(a)};
    const double mixed = osn::rplus2c_norm(t.mixed(a), seeds).value;
    EXPECT_LE(mixed, mat::op_norm(a) * base.value + 1e-9);
  }
}

TEST(TraceClassTuples, ElementaryExamples) {
  const MatrixTuple t = e11_e12();
  EXPECT_NEAR(osn::s1_row_norm(t), 1.0, 1e-7);
  EXPECT_NEAR(osn::s1_col_norm(t), std::sqrt(2.0), 1e-7);
  EXPECT_NEAR(osn::s1_rc_norm(t), std::sqrt(2.0), 1e-7);
  const auto s = osn::s1_rplus2c_norm(t);
  EXPECT_LE(s.value, 1.0 + 1e-7);
  EXPECT_LE(s.lower, s.value + 1e-9);
}

TEST(TraceClassTuples, SingleElementIsTraceNorm) {
  mat::Rng rng = mat::make_stream(7, 0);
  const ComplexMatrix x = mat::random_ginibre(3, 3, rng);
  const MatrixTuple t({x});
  EXPECT_NEAR(osn::s1_row_norm(t), mat::trace_norm(x), 1e-6);
  EXPECT_NEAR(osn::s1_col_norm(t), mat::trace_norm(x), 1e-6);
}

TEST(Spaces, NormsAndShapes) {
  const auto m2 = osn::ConcreteSpace::matrix_algebra(2);
  EXPECT_EQ(m2.dim(), 4);
  const auto s1 = osn::ConcreteSpace::dual_matrix_algebra(2);
  EXPECT_TRUE(s1.is_dual());
  ComplexVector c = ComplexVector::Zero(4);
  c(0) = 1.0;
  c(3) = -1.0;
  EXPECT_NEAR(m2.norm(c), 1.0, 1e-12);
  EXPECT_NEAR(s1.norm(c), 2.0, 1e-12);
  const auto rc = osn::ConcreteSpace::row_intersect_column(3);
  EXPECT_EQ(rc.dim(), 3);
  EXPECT_EQ(rc.ambient(), 4);
  ComplexVector v(3);
  v << 3.0, 4.0, 0.0;
  EXPECT_NEAR(rc.norm(v), 5.0, 1e-12);
  EXPECT_EQ(osn::ConcreteSpace::diagonal(3).dim(), 3);
  EXPECT_EQ(osn::ConcreteSpace::block_diagonal({2, 1}).dim(), 5);
  EXPECT_THROW(osn::ConcreteSpace::subspace(2, {unit(2, 0, 0), unit(2, 0, 0)}), ValidationError);
}

TEST(AmplifiedNorm, IdentityIsOne) {
  ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  const osn::LinearMapRep u(osn::ConcreteSpace::matrix_algebra(2), osn::ConcreteSpace::matrix_algebra(2), id);
  for (Index l : {1, 2, 3}) {
    const BoundInterval b = osn::amplified_norm(u, l, small_budget());
    EXPECT_NEAR(b.lower, 1.0, 1e-8) << "level " << l;
    EXPECT_LE(b.lower, b.upper + 1e-9);
  }
}

TEST(AmplifiedNorm, TransposeReachesTwoAtLevelTwo) {
  const osn::LinearMapRep u = transpose_map(2);
  EXPECT_NEAR(osn::amplified_norm(u, 1, small_budget()).lower, 1.0, 1e-8);
  EXPECT_GE(osn::amplified_norm(u, 2, small_budget()).lower, 2.0 - 1e-6);
  ComplexMatrix w = ComplexMatrix::Zero(4, 4);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) w(i * 2 + j, j * 2 + i) = 1.0;
  }
  EXPECT_NEAR(osn::amplified_ratio(u, 2, w), 2.0, 1e-10);
}

TEST(AmplifiedNorm, ScalesWithTheMap) {
  mat::Rng rng = mat::make_stream(8, 0);
  const osn::LinearMapRep u = random_map(2, 2, false, rng);
  const BoundInterval a = osn::amplified_norm(u, 2, small_budget());
  const BoundInterval b = osn::amplified_norm(u.scaled(3.0), 2, small_budget());
  EXPECT_NEAR(b.lower, 3.0 * a.lower, 1e-8 * b.lower);
}

TEST(AmplifiedNorm, MonotoneInLevel) {
  mat::Rng rng = mat::make_stream(9, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const osn::LinearMapRep u = random_map(2, 2, trial % 2 == 1, rng);
    const auto cb = osn::cb_norm_bounds(u, small_budget(3), std::vector<Index>{1, 2, 3, 4});
    for (std::size_t i = 1; i < cb.level_lower.size(); ++i) {
      ASSERT_GE(cb.level_lower[i], cb.level_lower[i - 1] - 1e-9) << "trial " << trial;
    }
    ASSERT_LE(cb.bounds.lower, cb.bounds.upper + 1e-9);
  }
}

TEST(CbNorm, IdentityOnMatrices) {
  const osn::LinearMapRep u(osn::ConcreteSpace::matrix_algebra(2), osn::ConcreteSpace::matrix_algebra(2),
                            ComplexMatrix::Identity(4, 4));
  const auto r = osn::cb_norm_bounds(u, small_budget());
  EXPECT_NEAR(r.bounds.lower, 1.0, 1e-8);
  EXPECT_LE(r.bounds.upper, 4.0 + 1e-9);
}

TEST(CbNorm, TransposeTensorOfSwap) {
  const osn::LinearMapRep tau = associated_map(swap_operator(2));
  const auto r = osn::cb_norm_bounds(tau, small_budget());
  EXPECT_GE(r.bounds.lower, 2.0 - 1e-6);
  EXPECT_NEAR(r.bounds.upper, 4.0, 1e-9);
  const auto s = osn::cb_norm_bounds(tau.scaled(0.5), small_budget());
  EXPECT_NEAR(s.bounds.lower, 0.5 * r.bounds.lower, 1e-8);
  EXPECT_NEAR(s.bounds.upper, 0.5 * r.bounds.upper, 1e-9);
}

TEST(CbNorm, DefaultLevelsEndAtTheCap) {
  const auto levels = osn::default_levels(transpose_map(2));
  ASSERT_FALSE(levels.empty());
  EXPECT_EQ(levels.front(), 1);
  EXPECT_EQ(levels.back(), 4);
}

TEST(MlDualNorm, LevelOneIsTraceNorm) {
  mat::Rng rng = mat::make_stream(10, 0);
  const ComplexMatrix rho = mat::random_density(3, rng).matrix();
  const BoundInterval b = osn::ml_dual_norm({1, 3, {rho}}, 1, small_budget());
  EXPECT_NEAR(b.lower, mat::trace_norm(rho), 1e-10);
}

TEST(MlDualNorm, SingleBlockIsTraceNorm) {
  mat::Rng rng = mat::make_stream(11, 0);
  const ComplexMatrix rho = mat::random_ginibre(3, 3, rng);
  osn::DualArray z{2, 3, {rho, ComplexMatrix::Zero(3, 3), ComplexMatrix::Zero(3, 3), ComplexMatrix::Zero(3, 3)}};
  const BoundInterval b = osn::ml_dual_norm(z, 2, small_budget());
  EXPECT_NEAR(b.lower, mat::trace_norm(rho), 1e-6);
  EXPECT_LE(b.lower, b.upper + 1e-9);
}

TEST(MlDualNorm, MonotoneInContractionLevel) {
  mat::Rng rng = mat::make_stream(12, 0);
  for (int trial = 0; trial < 5; ++trial) {
    osn::DualArray z{2, 2, {}};
    for (int b = 0; b < 4; ++b) z.blocks.push_back(mat::random_ginibre(2, 2, rng));
    double prev = 0.0;
    for (Index k = 1; k <= 3; ++k) {
      const double v = osn::ml_dual_norm(z, k, small_budget()).lower;
      EXPECT_GE(v, prev - 1e-9);
      prev = v;
    }
  }
}

TEST(Pietsch, ClosedForms) {
  EXPECT_NEAR(osn::pietsch_pi2(ComplexMatrix::Identity(3, 3)).value, std::sqrt(3.0), 1e-6);
  ComplexMatrix h(3, 1);
  h << 1.0, Complex(0, 2), 2.0;
  EXPECT_NEAR(osn::pietsch_pi2(h).value, 3.0, 1e-6);
  ComplexMatrix ff(2, 2);
  ff << 1, 1, 0, 0;
  const auto r = osn::pietsch_pi2(ff);
  EXPECT_NEAR(r.value, 2.0, 1e-6);
  EXPECT_LE(r.lower, r.value + 1e-12);
}

TEST(Pietsch, DominatesOperatorNorm) {
  mat::Rng rng = mat::make_stream(13, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const Index d = 2 + trial % 4;
    const ComplexMatrix h = mat::random_ginibre(3, d, rng);
    // Operator norm from l_inf^d: maximized at the cube's extreme points, which are
    // +-1 vectors up to phases; real sign vectors give a lower estimate.
    double best = 0.0;
    for (int mask = 0; mask < (1 << d); ++mask) {
      ComplexVector s(d);
      for (Index k = 0; k < d; ++k) s(k) = (mask >> k) & 1 ? 1.0 : -1.0;
      best = std::max(best, (h * s).norm());
    }
    EXPECT_GE(osn::pietsch_pi2(h).value, best - 1e-9);
  }
}

TEST(Ordering, ClosedForms) {
  mat::Rng rng = mat::make_stream(14, 0);
  const MatrixTuple ys = random_tuple(3, 2, rng);
  const auto half = osn::ordering_check(ys.scaled(0.5), ys);
  EXPECT_TRUE(half.dominated);
  ASSERT_TRUE(half.witness.has_value());
  EXPECT_LT(mat::max_abs(*half.witness - 0.5 * ComplexMatrix::Identity(3, 3)), 1e-9);

  const MatrixTuple small({unit(2, 0, 0)});
  const auto out = osn::ordering_check(MatrixTuple({unit(2, 0, 1)}), small);
  EXPECT_FALSE(out.dominated);
}

TEST(Ordering, ContractionsAreDetectedAndMonotone) {
  mat::Rng rng = mat::make_stream(15, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const MatrixTuple ys = random_tuple(3, 3, rng);
    const ComplexMatrix a = mat::random_contraction(2, 3, rng);
    const MatrixTuple xs = ys.mixed(a);
    const auto r = osn::ordering_check(xs, ys);
    ASSERT_TRUE(r.dominated);
    EXPECT_LE(r.witness_norm, 1.0 + 1e-9);
    EXPECT_LE(osn::row_norm(xs), osn::row_norm(ys) + 1e-8);
    EXPECT_LE(osn::col_norm(xs), osn::col_norm(ys) + 1e-8);
  }
}

TEST(LinearMaps, RejectBadShapes) {
  EXPECT_THROW(osn::LinearMapRep(osn::ConcreteSpace::matrix_algebra(2), osn::ConcreteSpace::matrix_algebra(2),
                                 ComplexMatrix::Identity(3, 3)),
               DimensionError);
}
