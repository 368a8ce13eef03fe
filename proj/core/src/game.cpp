#include "qxor/game.hpp"

#include <cmath>
#include <sstream>

namespace qxor {

void BoundInterval::validate(const std::string& what) const {
  if (!(lower <= upper + 1e-9)) {
    throw ConsistencyError(what + ": lower bound " + std::to_string(lower) + " exceeds upper bound " +
                           std::to_string(upper));
  }
}

BoundInterval BoundInterval::scaled(double t) const {
  BoundInterval b = *this;
  if (t >= 0.0) {
    b.lower = lower * t;
    b.upper = has_upper() ? upper * t : upper;
  }
  return b;
}

BipartiteOperator::BipartiteOperator(HermitianMatrix g, Index n, Index m) : g_(std::move(g)), n_(n), m_(m) {
  if (n < 1 || m < 1) throw DimensionError("BipartiteOperator: dimensions must be positive");
  if (g_.dim() != n * m) {
    throw DimensionError("BipartiteOperator: G has dimension " + std::to_string(g_.dim()) + ", expected n*m = " +
                         std::to_string(n * m));
  }
}

BipartiteOperator BipartiteOperator::scaled(double t) const {
  return BipartiteOperator(HermitianMatrix::symmetrized(g_.matrix() * t), n_, m_);
}

QuantumXorGame::QuantumXorGame(BipartiteOperator op) : op_(std::move(op)) {
  const double tn = mat::trace_norm(op_.hermitian());
  if (tn > 1.0 + kTol.identity) {
    throw ValidationError("trace_norm", "trace norm of G is " + std::to_string(tn) + " > 1");
  }
}

QuantumXorGame QuantumXorGame::from_episodes(Index n, Index m, std::vector<Episode> episodes) {
  if (episodes.empty()) throw ValidationError("episodes", "at least one episode is required");
  double total = 0.0;
  ComplexMatrix g = ComplexMatrix::Zero(n * m, n * m);
  for (std::size_t x = 0; x < episodes.size(); ++x) {
    Episode& e = episodes[x];
    const std::string tag = "episode " + std::to_string(x);
    if (!(e.probability >= 0.0) || !std::isfinite(e.probability)) {
      throw ValidationError("probability", tag + " has invalid probability");
    }
    if (e.sign != 1 && e.sign != -1) throw ValidationError("sign", tag + " sign must be +1 or -1");
    if (e.state.dim() != n * m) throw DimensionError(tag + " state has wrong dimension");
    e.state = mat::clip_psd(e.state.matrix(), kTol.identity, tag + " state");
    const double tr = e.state.matrix().trace().real();
    if (std::abs(tr - 1.0) > kTol.identity) {
      throw ValidationError("state_trace", tag + " state has trace " + std::to_string(tr));
    }
    total += e.probability;
    g += (e.sign * e.probability) * e.state.matrix();
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError("probability", "episode probabilities sum to " + std::to_string(total));
  }
  QuantumXorGame game(BipartiteOperator(HermitianMatrix::symmetrized(g), n, m));
  game.episodes_ = std::move(episodes);
  return game;
}

std::vector<Episode> to_episodes(const QuantumXorGame& game) {
  const Index nm = game.n() * game.m();
  const mat::Eigh e = mat::eigh(game.op().hermitian());
  const double s = e.values.cwiseAbs().sum();
  const bool full = std::abs(s - 1.0) <= 1e-12;
  std::vector<Episode> out;
  for (Index i = 0; i < e.values.size(); ++i) {
    const double lam = e.values(i);
    if (std::abs(lam) <= 1e-15) continue;
    const ComplexVector v = e.vectors.col(i);
    out.push_back({full ? std::abs(lam) / s : std::abs(lam), lam < 0 ? -1 : 1,
                   HermitianMatrix::symmetrized(v * v.adjoint())});
  }
  if (!full) {
    double rest = 1.0;
    for (const auto& ep : out) rest -= ep.probability;
    const HermitianMatrix mixed = HermitianMatrix::symmetrized(ComplexMatrix::Identity(nm, nm) / double(nm));
    out.push_back({rest / 2.0, 1, mixed});
    out.push_back({rest / 2.0, -1, mixed});
  }
  return out;
}

ProductStrategy::ProductStrategy(const ComplexMatrix& a, const ComplexMatrix& b)
    : a_(mat::clip_contraction(a, kTol.identity, "Alice observable")),
      b_(mat::clip_contraction(b, kTol.identity, "Bob observable")) {}

EntangledStrategy::EntangledStrategy(Index dA, Index dB, const ComplexVector& psi, const ComplexMatrix& a,
                                     const ComplexMatrix& b)
    : da_(dA), db_(dB), psi_(psi) {
  if (dA < 1 || dB < 1) throw DimensionError("EntangledStrategy: ancilla dimensions must be positive");
  if (psi.size() != dA * dB) throw DimensionError("EntangledStrategy: psi must have dimension dA*dB");
  if (std::abs(psi.norm() - 1.0) > 1e-12) throw ValidationError("unit_vector", "psi is not normalized");
  if (a.rows() % dA != 0 || b.rows() % dB != 0) throw DimensionError("EntangledStrategy: observable dimensions");
  a_ = mat::clip_contraction(a, kTol.identity, "Alice observable");
  b_ = mat::clip_contraction(b, kTol.identity, "Bob observable");
}

OwcStrategy::OwcStrategy(std::vector<ComplexMatrix> plus, std::vector<ComplexMatrix> minus,
                         std::vector<ComplexMatrix> observables) {
  if (plus.empty() || plus.size() != minus.size() || plus.size() != observables.size()) {
    throw DimensionError("OwcStrategy: need d >= 1 matching effects and observables");
  }
  const Index n = plus.front().rows();
  ComplexMatrix total = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < plus.size(); ++k) {
    if (plus[k].rows() != n || minus[k].rows() != n) throw DimensionError("OwcStrategy: effect dimensions differ");
    plus_.push_back(mat::clip_psd(plus[k], kTol.identity, "effect E(+1," + std::to_string(k) + ")"));
    minus_.push_back(mat::clip_psd(minus[k], kTol.identity, "effect E(-1," + std::to_string(k) + ")"));
    total += plus_.back().matrix() + minus_.back().matrix();
    obs_.push_back(mat::clip_contraction(observables[k], kTol.identity, "Bob observable " + std::to_string(k)));
  }
  const double defect = mat::max_abs(total - ComplexMatrix::Identity(n, n));
  if (defect > kTol.identity) {
    throw ValidationError("completeness", "instrument sums to identity only within " + std::to_string(defect));
  }
}

ComplexMatrix OwcStrategy::alice_observable(Index k) const {
  return plus_[static_cast<std::size_t>(k)].matrix() - minus_[static_cast<std::size_t>(k)].matrix();
}

namespace {

double real_checked(Complex v, double scale, const char* what) {
  if (std::abs(v.imag()) > 1e-10 * std::max(1.0, scale)) {
    throw ConsistencyError(std::string(what) + ": bias has imaginary part " + std::to_string(v.imag()));
  }
  return v.real();
}

Complex pair_value(const BipartiteOperator& g, const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != g.n() || b.rows() != g.m()) throw DimensionError("strategy dimensions do not match the game");
  return (g.matrix() * mat::kron(a, b)).trace();
}

}  // namespace

double bias_of(const BipartiteOperator& g, const ProductStrategy& s) {
  return real_checked(pair_value(g, s.A().matrix(), s.B().matrix()), mat::max_abs(g.matrix()), "product");
}

double bias_of(const BipartiteOperator& g, const EntangledStrategy& s) {
  const Index n = g.n(), m = g.m(), da = s.dA(), db = s.dB();
  if (s.A().dim() != n * da || s.B().dim() != m * db) throw DimensionError("entangled strategy dimensions");
  const ComplexMatrix rho = s.psi() * s.psi().adjoint();
  const Index dims[] = {n, m, da, db};
  const Index order[] = {0, 2, 1, 3};
  const ComplexMatrix state = mat::permute_registers(mat::kron(g.matrix(), rho), dims, order);
  const Complex v = (mat::kron(s.A().matrix(), s.B().matrix()) * state).trace();
  return real_checked(v, mat::max_abs(g.matrix()), "entangled");
}

double bias_of(const BipartiteOperator& g, const OwcStrategy& s) {
  Complex v = 0.0;
  for (Index k = 0; k < s.messages(); ++k) {
    v += pair_value(g, s.alice_observable(k), s.observables()[static_cast<std::size_t>(k)].matrix());
  }
  return real_checked(v, mat::max_abs(g.matrix()), "owc");
}

double bias_of(const BipartiteOperator& g, const Strategy& s) {
  return std::visit([&](const auto& x) { return bias_of(g, x); }, s);
}

double bias_of_episodes(const QuantumXorGame& g, const OwcStrategy& s) {
  const auto eps = g.episodes() ? *g.episodes() : to_episodes(g);
  double total = 0.0;
  for (const Episode& e : eps) {
    Complex gamma = 0.0;
    for (Index k = 0; k < s.messages(); ++k) {
      gamma += (mat::kron(s.alice_observable(k), s.observables()[static_cast<std::size_t>(k)].matrix()) *
                e.state.matrix())
                   .trace();
    }
    total += e.probability * e.sign * gamma.real();
  }
  return total;
}

osn::LinearMapRep associated_map(const BipartiteOperator& g) {
  const Index n = g.n(), m = g.m();
  ComplexMatrix coeff(m * m, n * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      for (Index k = 0; k < m; ++k) {
        for (Index l = 0; l < m; ++l) coeff(k * m + l, i * n + j) = g.matrix()(i * m + k, j * m + l);
      }
    }
  }
  return osn::LinearMapRep(osn::ConcreteSpace::matrix_algebra(n), osn::ConcreteSpace::dual_matrix_algebra(m),
                           std::move(coeff));
}

ComplexMatrix apply_associated(const BipartiteOperator& g, const ComplexMatrix& x) {
  return mat::partial_contract_A(g.matrix(), x.transpose(), g.n(), g.m());
}

BipartiteOperator swap_operator(Index n) {
  ComplexMatrix s = ComplexMatrix::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < n; ++k) s(i * n + k, k * n + i) = 1.0;
  }
  return BipartiteOperator(HermitianMatrix(s), n, n);
}

QuantumXorGame swap_game(Index n) { return QuantumXorGame(swap_operator(n).scaled(1.0 / double(n * n))); }

QuantumXorGame diagonal_game(const RealMatrix& M) {
  const Index n = M.rows(), m = M.cols();
  if (n < 1 || m < 1) throw DimensionError("diagonal_game: empty matrix");
  if (!M.allFinite()) throw ValidationError("finite", "diagonal_game: non-finite entries");
  const double l1 = M.cwiseAbs().sum();
  if (l1 > 1.0 + kTol.identity) throw ValidationError("trace_norm", "sum |M_ij| = " + std::to_string(l1) + " > 1");
  ComplexMatrix g = ComplexMatrix::Zero(n * m, n * m);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < m; ++k) g(i * m + k, i * m + k) = M(i, k);
  }
  return QuantumXorGame(BipartiteOperator(HermitianMatrix(g), n, m));
}

QuantumXorGame chsh() {
  RealMatrix M(2, 2);
  M << 1, 1, 1, -1;
  return diagonal_game(M / 4.0);
}

ComplexMatrix mab_tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw DimensionError("mab_tensor: a and b must be square of equal size");
  }
  const Index n = a.rows();
  ComplexMatrix g(n * n, n * n);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < n; ++k) {
      for (Index j = 0; j < n; ++j) {
        for (Index l = 0; l < n; ++l) g(i * n + k, j * n + l) = a(k, i) * b(j, l);
      }
    }
  }
  return g;
}

osn::LinearMapRep mab_map(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Index n = a.rows();
  const ComplexMatrix g = mab_tensor(a, b);
  ComplexMatrix coeff(n * n, n * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      for (Index k = 0; k < n; ++k) {
        for (Index l = 0; l < n; ++l) coeff(k * n + l, i * n + j) = g(i * n + k, j * n + l);
      }
    }
  }
  return osn::LinearMapRep(osn::ConcreteSpace::matrix_algebra(n), osn::ConcreteSpace::dual_matrix_algebra(n),
                           std::move(coeff));
}

QuantumXorGame mab_game(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double na = a.norm(), nb = b.norm();
  if (na > 1.0 + kTol.identity || nb > 1.0 + kTol.identity) {
    throw ValidationError("schatten2", "mab_game needs ||a||_2, ||b||_2 <= 1");
  }
  const ComplexMatrix g = mab_tensor(a, b);
  const Index n = a.rows();
  QuantumXorGame game(BipartiteOperator(HermitianMatrix(g), n, n));
  return game;
}

QuantumXorGame product_state_game(const ComplexMatrix& rho_a, const ComplexMatrix& rho_b) {
  const HermitianMatrix a = mat::clip_psd(rho_a, kTol.identity, "rho_A");
  const HermitianMatrix b = mat::clip_psd(rho_b, kTol.identity, "rho_B");
  if (std::abs(a.matrix().trace().real() - 1.0) > kTol.identity ||
      std::abs(b.matrix().trace().real() - 1.0) > kTol.identity) {
    throw ValidationError("state_trace", "product_state_game needs unit-trace states");
  }
  return QuantumXorGame(
      BipartiteOperator(HermitianMatrix::symmetrized(mat::kron(a.matrix(), b.matrix())), a.dim(), b.dim()));
}

RealMatrix sylvester_hadamard(Index n) {
  if (n < 1 || (n & (n - 1)) != 0) {
    throw ValidationError("hadamard_order", "only Sylvester orders (powers of two) are supported, got " +
                                                std::to_string(n));
  }
  RealMatrix h = RealMatrix::Ones(1, 1);
  while (h.rows() < n) {
    const Index s = h.rows();
    RealMatrix next(2 * s, 2 * s);
    next << h, h, h, -h;
    h = next;
  }
  return h;
}

QuantumXorGame hadamard_game(Index n) {
  const RealMatrix h = sylvester_hadamard(n);
  return diagonal_game(h / double(n * n));
}

QuantumXorGame random_game(Index n, Index m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw DimensionError("random_game: dimensions must be positive");
  mat::Rng rng = mat::make_stream(seed, 0);
  const HermitianMatrix g = mat::random_gue(n * m, rng);
  const double tn = mat::trace_norm(g);
  return QuantumXorGame(BipartiteOperator(HermitianMatrix::symmetrized(g.matrix() / tn), n, m));
}

std::vector<std::string> gallery_names() {
  return {"swap:N", "chsh", "hadamard:N", "diagonal:N:M[:SEED]", "mab:N[:SEED]", "product_state:N:M[:SEED]",
          "random:N:M[:SEED]"};
}

namespace {

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) out.push_back(item);
  return out;
}

Index parse_dim(const std::string& s, const std::string& spec) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size() || v < 1 || v > 64) throw std::invalid_argument(s);
    return static_cast<Index>(v);
  } catch (const std::exception&) {
    throw ValidationError("gallery", "bad dimension '" + s + "' in '" + spec + "'");
  }
}

std::uint64_t parse_seed(const std::vector<std::string>& parts, std::size_t at, const std::string& spec) {
  if (parts.size() <= at) return 0;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(parts[at], &pos);
    if (pos != parts[at].size()) throw std::invalid_argument(parts[at]);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("gallery", "bad seed in '" + spec + "'");
  }
}

}  // namespace

QuantumXorGame gallery(const std::string& spec) {
  const auto parts = split(spec);
  if (parts.empty()) throw ValidationError("gallery", "empty game name");
  const std::string& name = parts[0];
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi) throw ValidationError("gallery", "wrong parameter count in '" + spec + "'");
  };
  if (name == "swap") {
    need(2, 2);
    return swap_game(parse_dim(parts[1], spec));
  }
  if (name == "chsh") {
    need(1, 1);
    return chsh();
  }
  if (name == "hadamard") {
    need(2, 2);
    return hadamard_game(parse_dim(parts[1], spec));
  }
  if (name == "random") {
    need(3, 4);
    return random_game(parse_dim(parts[1], spec), parse_dim(parts[2], spec), parse_seed(parts, 3, spec));
  }
  if (name == "diagonal") {
    need(3, 4);
    const Index n = parse_dim(parts[1], spec), m = parse_dim(parts[2], spec);
    mat::Rng rng = mat::make_stream(parse_seed(parts, 3, spec), 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    RealMatrix M(n, m);
    for (Index j = 0; j < m; ++j) {
      for (Index i = 0; i < n; ++i) M(i, j) = normal(rng);
    }
    return diagonal_game(M / M.cwiseAbs().sum());
  }
  if (name == "mab") {
    need(2, 3);
    const Index n = parse_dim(parts[1], spec);
    mat::Rng rng = mat::make_stream(parse_seed(parts, 2, spec), 2);
    ComplexMatrix a = mat::random_ginibre(n, n, rng);
    a /= a.norm();
    return mab_game(a, a.adjoint());
  }
  if (name == "product_state") {
    need(3, 4);
    const Index n = parse_dim(parts[1], spec), m = parse_dim(parts[2], spec);
    mat::Rng rng = mat::make_stream(parse_seed(parts, 3, spec), 3);
    const HermitianMatrix ra = mat::random_density(n, rng);
    const HermitianMatrix rb = mat::random_density(m, rng);
    return product_state_game(ra.matrix(), rb.matrix());
  }
  throw ValidationError("gallery", "unknown game '" + name + "'");
}

}  // namespace qxor
