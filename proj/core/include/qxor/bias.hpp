#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qxor/bounds.hpp"
#include "qxor/config.hpp"
#include "qxor/game.hpp"

// Strategy-class solvers. Every reported lower bound is the value of an
// explicit strategy re-evaluated through bias_of.
namespace qxor::bias {

struct OwqResult {
  double value = 0.0;
  HermitianMatrix witness;  // sign(G), the optimal global observable
};

OwqResult beta_owq(const BipartiteOperator& g);

struct ProductOptions {
  // Runs the complex-contraction see-saw for the sqrt(2) upper route.
  bool complex_upper = true;
};

struct ProductResult {
  BoundInterval bounds;
  ProductStrategy witness;
  double complex_value = 0.0;  // best complex-contraction see-saw value
  bool complex_stabilized = false;
};

ProductResult beta_product(const BipartiteOperator& g, const SolverBudget& budget, const ProductOptions& options = {});

struct ComplexSeesaw {
  double value = 0.0;
  ComplexMatrix A, B;
  bool stabilized = false;  // the two best restarts agree within 1e-6
};

// sup |tr(G (A (x) B))| over complex contractions, lower bound.
ComplexSeesaw complex_seesaw(const BipartiteOperator& g, const SolverBudget& budget, const ProductStrategy* warm = nullptr);

struct EntangledResult {
  BoundInterval bounds;
  EntangledStrategy witness;
};

EntangledResult beta_entangled(const BipartiteOperator& g, Index dA, Index dB, const SolverBudget& budget,
                               const EntangledStrategy* warm = nullptr);

struct AncillaDims {
  Index dA = 1;
  Index dB = 1;
};

// Sweeps ancilla sizes, warm-starting each from the previous witness.
std::vector<EntangledResult> beta_entangled_schedule(const BipartiteOperator& g, std::span<const AncillaDims> dims,
                                                     const SolverBudget& budget);
std::vector<AncillaDims> default_ancilla_schedule();

struct InstrumentResult {
  std::vector<ComplexMatrix> plus, minus;
  double value = 0.0;   // sum_k tr((E+ - E-) C_k) of the returned instrument
  double dual = 0.0;    // tr Y for a feasible Y >= +-C_k: certified upper
  bool converged = false;
};

// max sum_k tr((E(+,k) - E(-,k)) C_k) over instruments with d = C.size() messages.
InstrumentResult optimize_instrument(std::span<const ComplexMatrix> c);

struct OwcResult {
  BoundInterval bounds;
  OwcStrategy witness;
  double instrument_gap = 0.0;  // largest dual gap seen in accepted instrument steps
  bool instrument_converged = true;
};

OwcResult beta_owc(const BipartiteOperator& g, Index d, const SolverBudget& budget, const OwcStrategy* warm = nullptr);
std::vector<OwcResult> beta_owc_schedule(const BipartiteOperator& g, std::span<const Index> messages,
                                         const SolverBudget& budget);

// Trace norm of the coefficient tensor.
double pi1o_exact(const BipartiteOperator& g);

struct Pi1cbResult {
  BoundInterval bounds;
  std::vector<Index> messages;
  std::vector<double> owc_lower;
  std::vector<double> direct_lower;
};

std::vector<Index> default_pi1cb_schedule(Index n);
Pi1cbResult pi1cb_bounds(const BipartiteOperator& g, std::span<const Index> messages, const SolverBudget& budget);

// max over sign vectors of sum_ij M_ij a_i b_j, by enumeration over a.
double classical_bias(const RealMatrix& M);

struct HierarchyConfig {
  std::vector<Index> messages{1, 2, 4};
  std::vector<AncillaDims> ancilla = default_ancilla_schedule();
  bool with_pi1cb = true;
};

struct EntangledRow {
  AncillaDims dims;
  BoundInterval bounds;
};

struct OwcRow {
  Index d = 1;
  BoundInterval bounds;
  double instrument_gap = 0.0;
};

struct GameReport {
  std::string id;
  Index n = 0, m = 0;
  double beta_owq = 0.0;
  BoundInterval beta;
  std::vector<EntangledRow> beta_star;
  std::vector<OwcRow> beta_owc;
  double pi1o = 0.0;
  BoundInterval pi1cb;
  double ratio_star_owc = 0.0;  // best beta* lower over best beta_owc lower
  std::vector<std::string> flags;
  std::map<std::string, double> seconds;  // wall time per solver
};

struct HierarchyReport {
  std::vector<GameReport> rows;
  double max_ratio_star_owc = 0.0;
  std::vector<std::string> violations;  // "<id>: <flag>"
};

struct NamedGame {
  std::string id;
  QuantumXorGame game;
};

GameReport analyze_game(const std::string& id, const QuantumXorGame& g, const SolverBudget& budget,
                        const HierarchyConfig& config = {});
// Rows are sorted by id, so the result does not depend on `threads`.
HierarchyReport hierarchy_report(std::span<const NamedGame> games, const SolverBudget& budget,
                                 const HierarchyConfig& config = {}, int threads = 1);

// `count` random games with ids random-0000, random-0001, ...; game i is
// drawn from its own stream of `seed`.
std::vector<NamedGame> random_games(Index count, Index n, Index m, std::uint64_t seed);

}  // namespace qxor::bias
