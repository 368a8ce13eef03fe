#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qxor/bounds.hpp"
#include "qxor/mat.hpp"
#include "qxor/osn.hpp"

namespace qxor {

// Hermitian operator on C^n (x) C^m, composite index (i, k) -> i*m + k.
// No normalization is required; games add the trace-norm bound.
class BipartiteOperator {
 public:
  BipartiteOperator(HermitianMatrix g, Index n, Index m);

  Index n() const { return n_; }
  Index m() const { return m_; }
  const HermitianMatrix& hermitian() const { return g_; }
  const ComplexMatrix& matrix() const { return g_.matrix(); }
  BipartiteOperator scaled(double t) const;

 private:
  HermitianMatrix g_;
  Index n_;
  Index m_;
};

struct Episode {
  double probability = 0.0;
  int sign = 1;
  HermitianMatrix state;
};

class QuantumXorGame {
 public:
  // Validates trace_norm(G) <= 1 + 1e-10.
  explicit QuantumXorGame(BipartiteOperator op);
  static QuantumXorGame from_episodes(Index n, Index m, std::vector<Episode> episodes);

  Index n() const { return op_.n(); }
  Index m() const { return op_.m(); }
  const BipartiteOperator& op() const { return op_; }
  const ComplexMatrix& G() const { return op_.matrix(); }
  const std::optional<std::vector<Episode>>& episodes() const { return episodes_; }

  operator const BipartiteOperator&() const { return op_; }

 private:
  BipartiteOperator op_;
  std::optional<std::vector<Episode>> episodes_;
};

std::vector<Episode> to_episodes(const QuantumXorGame& game);

class ProductStrategy {
 public:
  ProductStrategy(const ComplexMatrix& a, const ComplexMatrix& b);
  const HermitianMatrix& A() const { return a_; }
  const HermitianMatrix& B() const { return b_; }

 private:
  HermitianMatrix a_, b_;
};

// psi is a unit vector on the ancilla registers A' (x) B' (dimension dA*dB);
// A acts on C^n (x) C^dA and B on C^m (x) C^dB.
class EntangledStrategy {
 public:
  EntangledStrategy(Index dA, Index dB, const ComplexVector& psi, const ComplexMatrix& a, const ComplexMatrix& b);
  Index dA() const { return da_; }
  Index dB() const { return db_; }
  const ComplexVector& psi() const { return psi_; }
  const HermitianMatrix& A() const { return a_; }
  const HermitianMatrix& B() const { return b_; }

 private:
  Index da_, db_;
  ComplexVector psi_;
  HermitianMatrix a_, b_;
};

// Instrument E_{a,k} with a = +1 (plus) and a = -1 (minus), message k = 0..d-1,
// and Bob observables B_k.
class OwcStrategy {
 public:
  OwcStrategy(std::vector<ComplexMatrix> plus, std::vector<ComplexMatrix> minus, std::vector<ComplexMatrix> observables);
  Index messages() const { return static_cast<Index>(plus_.size()); }
  const std::vector<HermitianMatrix>& plus() const { return plus_; }
  const std::vector<HermitianMatrix>& minus() const { return minus_; }
  const std::vector<HermitianMatrix>& observables() const { return obs_; }
  ComplexMatrix alice_observable(Index k) const;

 private:
  std::vector<HermitianMatrix> plus_, minus_, obs_;
};

using Strategy = std::variant<ProductStrategy, EntangledStrategy, OwcStrategy>;

double bias_of(const BipartiteOperator& g, const ProductStrategy& s);
double bias_of(const BipartiteOperator& g, const EntangledStrategy& s);
double bias_of(const BipartiteOperator& g, const OwcStrategy& s);
double bias_of(const BipartiteOperator& g, const Strategy& s);
// Episode form sum_x p_x c_x gamma(rho_x) for an OWC strategy.
double bias_of_episodes(const QuantumXorGame& g, const OwcStrategy& s);

// Ghat(x) = partial_contract_A(G, x^T) as a map M_n -> S_1^m.
osn::LinearMapRep associated_map(const BipartiteOperator& g);
ComplexMatrix apply_associated(const BipartiteOperator& g, const ComplexMatrix& x);

// Gallery.
BipartiteOperator swap_operator(Index n);  // unnormalized SWAP, Ghat = transpose
QuantumXorGame swap_game(Index n);         // SWAP / n^2
QuantumXorGame diagonal_game(const RealMatrix& M);
QuantumXorGame chsh();
// G_(i,k),(j,l) = a_ki b_jl, so that Ghat(x) = a x b. General a, b.
ComplexMatrix mab_tensor(const ComplexMatrix& a, const ComplexMatrix& b);
osn::LinearMapRep mab_map(const ComplexMatrix& a, const ComplexMatrix& b);
// Requires ||a||_2, ||b||_2 <= 1 and a Hermitian tensor (e.g. b = a^dag).
QuantumXorGame mab_game(const ComplexMatrix& a, const ComplexMatrix& b);
QuantumXorGame product_state_game(const ComplexMatrix& rho_a, const ComplexMatrix& rho_b);
RealMatrix sylvester_hadamard(Index n);
QuantumXorGame hadamard_game(Index n);
QuantumXorGame random_game(Index n, Index m, std::uint64_t seed);

std::vector<std::string> gallery_names();
// Parameter-free gallery access by name, e.g. "swap:3", "chsh", "hadamard:4",
// "diagonal:random:2x3:7", "random:2x2:5". Throws ValidationError on unknown names.
QuantumXorGame gallery(const std::string& spec);

}  // namespace qxor
