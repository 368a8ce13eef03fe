#include <gtest/gtest.h>

#include <cmath>

#include "qxor/errors.hpp"
#include "qxor/game.hpp"

using namespace qxor;

namespace {

ComplexMatrix unit(Index n, Index i, Index j) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

ComplexMatrix coefficient_rebuild(const osn::LinearMapRep& u, Index n, Index m) {
  ComplexMatrix g(n * m, n * m);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      for (Index k = 0; k < m; ++k) {
        for (Index l = 0; l < m; ++l) g(i * m + k, j * m + l) = u.coefficients()(k * m + l, i * n + j);
      }
    }
  }
  return g;
}

OwcStrategy random_owc(Index n, Index m, Index d, mat::Rng& rng) {
  // Instrument from a random unitary dilation: E_{a,k} = V^dag P_{a,k} V.
  const ComplexMatrix v = mat::random_unitary(2 * d * n, rng).leftCols(n);
  std::vector<ComplexMatrix> plus, minus, obs;
  for (Index k = 0; k < d; ++k) {
    plus.push_back(v.middleRows(2 * k * n, n).adjoint() * v.middleRows(2 * k * n, n));
    minus.push_back(v.middleRows((2 * k + 1) * n, n).adjoint() * v.middleRows((2 * k + 1) * n, n));
    obs.push_back(mat::random_observable(m, rng).matrix());
  }
  return OwcStrategy(plus, minus, obs);
}

}  // namespace

TEST(Episodes, SingleEpisodeIsTheState) {
  mat::Rng rng = mat::make_stream(1, 0);
  const HermitianMatrix rho = mat::random_density(4, rng);
  const QuantumXorGame g = QuantumXorGame::from_episodes(2, 2, {{1.0, 1, rho}});
  EXPECT_LT(mat::max_abs(g.G() - rho.matrix()), 1e-14);
}

TEST(Episodes, OrthogonalPairHasUnitTraceNorm) {
  ComplexVector psi = ComplexVector::Zero(4), phi = ComplexVector::Zero(4);
  psi(0) = 1.0;
  phi(3) = 1.0;
  const HermitianMatrix a(ComplexMatrix(psi * psi.adjoint())), b(ComplexMatrix(phi * phi.adjoint()));
  const QuantumXorGame g = QuantumXorGame::from_episodes(2, 2, {{0.5, 1, a}, {0.5, -1, b}});
  EXPECT_LT(mat::max_abs(g.G() - (a.matrix() - b.matrix()) / 2.0), 1e-14);
  EXPECT_NEAR(mat::trace_norm(g.G()), 1.0, 1e-12);
}

TEST(Episodes, RandomInstanceMatchesDirectSum) {
  mat::Rng rng = mat::make_stream(2, 0);
  std::vector<Episode> eps;
  ComplexMatrix direct = ComplexMatrix::Zero(6, 6);
  const double p[4] = {0.1, 0.2, 0.3, 0.4};
  for (int x = 0; x < 4; ++x) {
    const HermitianMatrix rho = mat::random_density(6, rng);
    const int c = x % 2 ? -1 : 1;
    eps.push_back({p[x], c, rho});
    direct += double(c) * p[x] * rho.matrix();
  }
  const QuantumXorGame g = QuantumXorGame::from_episodes(2, 3, eps);
  EXPECT_LT(mat::max_abs(g.G() - direct), 1e-12);
}

TEST(Episodes, RejectInvalidInput) {
  mat::Rng rng = mat::make_stream(3, 0);
  const HermitianMatrix rho = mat::random_density(4, rng);
  EXPECT_THROW(QuantumXorGame::from_episodes(2, 2, {{0.5, 1, rho}}), ValidationError);
  EXPECT_THROW(QuantumXorGame::from_episodes(2, 2, {{1.0, 2, rho}}), ValidationError);
  EXPECT_THROW(QuantumXorGame::from_episodes(2, 2, {{1.0, 1, HermitianMatrix::identity(4)}}), ValidationError);
}

TEST(Episodes, DensityGameGivesOnePositiveEpisode) {
  mat::Rng rng = mat::make_stream(4, 0);
  const HermitianMatrix rho = mat::random_density(4, rng);
  const auto eps = to_episodes(QuantumXorGame(BipartiteOperator(rho, 2, 2)));
  double positive = 0.0;
  for (const auto& e : eps) {
    if (e.sign > 0) positive += e.probability;
  }
  EXPECT_NEAR(positive, 1.0, 1e-10);
}

TEST(Episodes, SubnormalGameIsPadded) {
  mat::Rng rng = mat::make_stream(5, 0);
  const QuantumXorGame half{random_game(2, 2, 11).op().scaled(0.5)};
  const auto eps = to_episodes(half);
  double total = 0.0;
  for (const auto& e : eps) total += e.probability;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_LT(mat::max_abs(QuantumXorGame::from_episodes(2, 2, eps).G() - half.G()), 1e-10);
}

TEST(Episodes, RoundTripRandomGames) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const QuantumXorGame g = random_game(2, 1 + seed % 3, seed);
    const QuantumXorGame back = QuantumXorGame::from_episodes(g.n(), g.m(), to_episodes(g));
    ASSERT_LT(mat::max_abs(back.G() - g.G()), 1e-10) << "seed " << seed;
  }
}

TEST(Game, RejectsTraceNormAboveOne) {
  EXPECT_THROW(QuantumXorGame{swap_operator(2)}, ValidationError);
  EXPECT_NO_THROW(QuantumXorGame{swap_operator(2).scaled(0.25)});
}

TEST(Game, RejectsShapeMismatch) {
  EXPECT_THROW(BipartiteOperator(HermitianMatrix::identity(5), 2, 2), DimensionError);
}

TEST(AssociatedMap, SwapIsTranspose) {
  const BipartiteOperator s = swap_operator(3);
  mat::Rng rng = mat::make_stream(6, 0);
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 3; ++j) EXPECT_LT(mat::max_abs(apply_associated(s, unit(3, i, j)) - unit(3, j, i)), 1e-14);
  }
  const ComplexMatrix x = mat::random_ginibre(3, 3, rng);
  EXPECT_LT(mat::max_abs(apply_associated(s, x) - x.transpose()), 1e-12);
}

TEST(AssociatedMap, MaximallyCorrelatedIsIdentity) {
  ComplexMatrix g = ComplexMatrix::Zero(4, 4);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) g += mat::kron(unit(2, i, j), unit(2, i, j));
  }
  const BipartiteOperator op(HermitianMatrix(g), 2, 2);
  mat::Rng rng = mat::make_stream(7, 0);
  const ComplexMatrix x = mat::random_ginibre(2, 2, rng);
  EXPECT_LT(mat::max_abs(apply_associated(op, x) - x), 1e-12);
}

TEST(AssociatedMap, ProductOperator) {
  mat::Rng rng = mat::make_stream(8, 0);
  const ComplexMatrix p = mat::random_gue(2, rng).matrix(), q = mat::random_gue(3, rng).matrix();
  const BipartiteOperator op(HermitianMatrix(mat::kron(p, q)), 2, 3);
  const ComplexMatrix x = mat::random_ginibre(2, 2, rng);
  EXPECT_LT(mat::max_abs(apply_associated(op, x) - (p * x.transpose()).trace() * q), 1e-12);
}

TEST(AssociatedMap, CoefficientsRebuildTheOperator) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const QuantumXorGame g = random_game(2, 3, seed);
    EXPECT_LT(mat::max_abs(coefficient_rebuild(associated_map(g), 2, 3) - g.G()), 1e-12);
  }
}

TEST(Bias, ClosedForms) {
  mat::Rng rng = mat::make_stream(9, 0);
  const ComplexMatrix ra = mat::random_density(2, rng).matrix(), rb = mat::random_density(3, rng).matrix();
  const QuantumXorGame prod = product_state_game(ra, rb);
  const ProductStrategy id2(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3));
  EXPECT_NEAR(bias_of(prod, id2), 1.0, 1e-12);
  for (Index n : {2, 3}) {
    const ProductStrategy id(ComplexMatrix::Identity(n, n), ComplexMatrix::Identity(n, n));
    EXPECT_NEAR(bias_of(swap_game(n), id), 1.0 / double(n), 1e-12);
  }
}

TEST(Bias, OwcMatchesEpisodeForm) {
  mat::Rng rng = mat::make_stream(10, 0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const QuantumXorGame g = random_game(2, 2, seed);
    const OwcStrategy s = random_owc(2, 2, 1 + seed % 3, rng);
    EXPECT_NEAR(bias_of(g, s), bias_of_episodes(g, s), 1e-10);
  }
}

TEST(Bias, BoundedByTraceNorm) {
  mat::Rng rng = mat::make_stream(11, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const QuantumXorGame g = random_game(2, 2, 1000 + trial);
    const double tn = mat::trace_norm(g.G());
    const ComplexMatrix a = mat::random_observable(2, rng).matrix(), b = mat::random_observable(2, rng).matrix();
    double v = 0.0;
    switch (trial % 3) {
      case 0:
        v = bias_of(g, ProductStrategy(a, b));
        break;
      case 1: {
        const Index da = 1 + trial % 2, db = 1 + (trial / 2) % 2;
        const ComplexVector psi = mat::random_unit_vector(da * db, rng);
        v = bias_of(g, EntangledStrategy(da, db, psi, mat::random_observable(2 * da, rng).matrix(),
                                         mat::random_observable(2 * db, rng).matrix()));
        break;
      }
      default:
        v = bias_of(g, random_owc(2, 2, 2, rng));
    }
    ASSERT_LE(std::abs(v), tn + 1e-9);
  }
}

TEST(Bias, SingleMessageOwcEqualsProduct) {
  mat::Rng rng = mat::make_stream(12, 0);
  const QuantumXorGame g = random_game(2, 3, 5);
  const ComplexMatrix a = mat::random_observable(2, rng).matrix(), b = mat::random_observable(3, rng).matrix();
  const ComplexMatrix plus = (ComplexMatrix::Identity(2, 2) + a) / 2.0, minus = (ComplexMatrix::Identity(2, 2) - a) / 2.0;
  const OwcStrategy owc({plus}, {minus}, {b});
  EXPECT_DOUBLE_EQ(bias_of(g, owc), bias_of(g, ProductStrategy(owc.alice_observable(0), b)));
}

TEST(Strategies, RejectNonContractions) {
  EXPECT_THROW(ProductStrategy(2.0 * ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)), ValidationError);
  const ComplexVector psi = ComplexVector::Constant(1, 2.0);
  EXPECT_THROW(EntangledStrategy(1, 1, psi, ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)), ValidationError);
  EXPECT_THROW(EntangledStrategy(2, 1, psi, ComplexMatrix::Identity(4, 4), ComplexMatrix::Identity(2, 2)), DimensionError);
}

TEST(Gallery, KnownInstances) {
  EXPECT_NEAR(mat::trace_norm(swap_game(2).G()), 1.0, 1e-12);
  const QuantumXorGame m = mab_game(unit(2, 0, 0), unit(2, 0, 0));
  EXPECT_LT(mat::max_abs(m.G() - mat::kron(unit(2, 0, 0), unit(2, 0, 0))), 1e-14);
  EXPECT_NEAR(mat::trace_norm(chsh().G()), 1.0, 1e-12);
  for (const char* spec : {"swap:3", "chsh", "hadamard:4", "diagonal:2:3:5", "mab:2:1", "product_state:2:2", "random:2:2:9"}) {
    EXPECT_LE(mat::trace_norm(gallery(spec).G()), 1.0 + 1e-10) << spec;
  }
  EXPECT_THROW(gallery("nonsense"), ValidationError);
  EXPECT_THROW(hadamard_game(3), ValidationError);
}

TEST(RandomGame, DeterministicAndNormalized) {
  EXPECT_EQ(random_game(2, 2, 7).G(), random_game(2, 2, 7).G());
  EXPECT_NE(random_game(2, 2, 7).G(), random_game(2, 2, 8).G());
  for (std::uint64_t s = 0; s < 20; ++s) EXPECT_NEAR(mat::trace_norm(random_game(2, 3, s).G()), 1.0, 1e-12);
  const QuantumXorGame one = random_game(1, 1, 3);
  EXPECT_NEAR(std::abs(one.G()(0, 0).real()), 1.0, 1e-12);
}
