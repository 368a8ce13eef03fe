#include <algorithm>
#include <cmath>

#include "qxor/bias.hpp"

namespace qxor::bias {

namespace {

constexpr std::uint64_t kProductSalt = 0x9E37;
constexpr std::uint64_t kComplexSalt = 0xC0FFEE;
constexpr std::uint64_t kEntangledSalt = 0xE47;

void check_monotone(double before, double after, const char* where) {
  if (after < before - kTol.monotonicity * std::max(1.0, std::abs(before))) {
    throw ConvergenceError(std::string("see-saw objective decreased in ") + where, before - after);
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return (m + m.adjoint()) * 0.5; }

double pair(const ComplexMatrix& G, const ComplexMatrix& a, const ComplexMatrix& b) {
  return (G * mat::kron(a, b)).trace().real();
}

struct PairState {
  ComplexMatrix A, B;
  double value = 0.0;
};

// Alternating sign updates on a Hermitian operator of size (n x m).
PairState product_seesaw(const ComplexMatrix& G, Index n, Index m, ComplexMatrix A, const SolverBudget& budget,
                         const ComplexMatrix* Bstart = nullptr) {
  PairState s;
  s.A = std::move(A);
  double prev = -std::numeric_limits<double>::infinity();
  if (Bstart) {
    s.B = *Bstart;
    prev = pair(G, s.A, s.B);
  }
  double last = prev;
  for (int sweep = 0; sweep < budget.max_sweeps; ++sweep) {
    s.B = mat::sign_hermitian(HermitianMatrix::symmetrized(mat::partial_contract_A(G, s.A, n, m))).matrix();
    double v = pair(G, s.A, s.B);
    check_monotone(prev, v, "product see-saw");
    s.A = mat::sign_hermitian(HermitianMatrix::symmetrized(mat::partial_contract_B(G, s.B, n, m))).matrix();
    const double w = pair(G, s.A, s.B);
    check_monotone(v, w, "product see-saw");
    prev = w;
    if (std::isfinite(last) && w - last <= budget.tol * std::max(1.0, std::abs(w))) break;
    last = w;
  }
  s.value = pair(G, s.A, s.B);
  return s;
}

}  // namespace

OwqResult beta_owq(const BipartiteOperator& g) {
  return {mat::trace_norm(g.hermitian()), mat::sign_hermitian(g.hermitian())};
}

ComplexSeesaw complex_seesaw(const BipartiteOperator& g, const SolverBudget& budget, const ProductStrategy* warm) {
  budget.validate();
  const Index n = g.n(), m = g.m();
  const ComplexMatrix& G = g.matrix();
  std::vector<double> values;
  ComplexSeesaw best;
  best.value = -1.0;
  for (int r = 0; r < budget.restarts; ++r) {
    mat::Rng rng = mat::make_stream(budget.seed ^ kComplexSalt, static_cast<std::uint64_t>(r));
    ComplexMatrix A = (r == 0 && warm) ? warm->A().matrix() : mat::random_contraction(n, n, rng);
    ComplexMatrix B;
    double prev = -std::numeric_limits<double>::infinity(), last = prev;
    if (r == 0 && warm) prev = last = pair(G, A, warm->B().matrix());
    for (int sweep = 0; sweep < budget.max_sweeps; ++sweep) {
      B = mat::polar_contraction(mat::partial_contract_A(G, A, n, m));
      const double v = (G * mat::kron(A, B)).trace().real();
      check_monotone(prev, v, "complex see-saw");
      A = mat::polar_contraction(mat::partial_contract_B(G, B, n, m));
      const double w = (G * mat::kron(A, B)).trace().real();
      check_monotone(v, w, "complex see-saw");
      prev = w;
      if (std::isfinite(last) && w - last <= budget.tol * std::max(1.0, std::abs(w))) break;
      last = w;
    }
    const double scale = std::max(1.0, mat::op_norm(A)) * std::max(1.0, mat::op_norm(B));
    const double v = std::abs((G * mat::kron(A, B)).trace()) / scale;
    values.push_back(v);
    if (v > best.value) {
      best.value = v;
      best.A = A;
      best.B = B;
    }
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  best.stabilized = values.size() >= 2 && values[0] - values[1] <= 1e-6 * std::max(1.0, values[0]);
  return best;
}

ProductResult beta_product(const BipartiteOperator& g, const SolverBudget& budget, const ProductOptions& options) {
  budget.validate();
  const Index n = g.n(), m = g.m();
  const ComplexMatrix& G = g.matrix();
  PairState best;
  best.value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < budget.restarts; ++r) {
    mat::Rng rng = mat::make_stream(budget.seed ^ kProductSalt, static_cast<std::uint64_t>(r));
    ComplexMatrix A = r == 0 ? ComplexMatrix::Identity(n, n) : mat::random_observable(n, rng).matrix();
    PairState s = product_seesaw(G, n, m, std::move(A), budget);
    if (s.value > best.value) best = std::move(s);
  }
  ProductStrategy witness(best.A, best.B);
  const double owq = beta_owq(g).value;
  ProductResult out{BoundInterval{}, witness, 0.0, false};
  out.bounds.lower = bias_of(g, witness);
  out.bounds.lower_method = "product-seesaw";
  out.bounds.upper = owq;
  out.bounds.upper_method = "beta_owq";
  if (options.complex_upper) {
    const ComplexSeesaw c = complex_seesaw(g, budget, &witness);
    out.complex_value = c.value;
    out.complex_stabilized = c.stabilized;
    if (c.stabilized && std::sqrt(2.0) * c.value < owq) {
      out.bounds.upper = std::max(out.bounds.lower, std::sqrt(2.0) * c.value);
      out.bounds.upper_method = "sqrt2-complex-seesaw";
    }
  }
  out.bounds.validate("beta_product");
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Registers (n, dA, m, dB): Gamma = P (G (x) psi psi^dag) P^dag.
ComplexMatrix enlarged(const ComplexMatrix& G, Index n, Index m, Index da, Index db, const ComplexVector& psi) {
  const Index dims[] = {n, m, da, db};
  const Index order[] = {0, 2, 1, 3};
  return mat::permute_registers(mat::kron(G, psi * psi.adjoint()), dims, order);
}

// W with psi^dag W psi = tr((A (x) B) Gamma(psi)).
ComplexMatrix ancilla_operator(const ComplexMatrix& G, Index n, Index m, Index da, Index db, const ComplexMatrix& A,
                               const ComplexMatrix& B) {
  const Index dims[] = {n, da, m, db};
  const Index order[] = {0, 2, 1, 3};
  const ComplexMatrix k = mat::permute_registers(mat::kron(A, B), dims, order);  // registers (n, m, dA, dB)
  return hermitian_part(mat::partial_contract_A(k, G, n * m, da * db));
}

// Isometry C^{n*d0} -> C^{n*d1} embedding the ancilla.
ComplexMatrix embed(Index n, Index d0, Index d1) {
  ComplexMatrix p = ComplexMatrix::Zero(n * d1, n * d0);
  for (Index i = 0; i < n; ++i) {
    for (Index a = 0; a < d0; ++a) p(i * d1 + a, i * d0 + a) = 1.0;
  }
  return p;
}

ComplexMatrix embed_observable(const ComplexMatrix& a, Index n, Index d0, Index d1) {
  const ComplexMatrix p = embed(n, d0, d1);
  return p * a * p.adjoint() + (ComplexMatrix::Identity(n * d1, n * d1) - p * p.adjoint());
}

ComplexVector embed_state(const ComplexVector& psi, Index a0, Index b0, Index a1, Index b1) {
  ComplexVector out = ComplexVector::Zero(a1 * b1);
  for (Index a = 0; a < a0; ++a) {
    for (Index b = 0; b < b0; ++b) out(a * b1 + b) = psi(a * b0 + b);
  }
  return out;
}

}  // namespace

EntangledResult beta_entangled(const BipartiteOperator& g, Index dA, Index dB, const SolverBudget& budget,
                               const EntangledStrategy* warm) {
  budget.validate();
  if (dA < 1 || dB < 1) throw ValidationError("ancilla", "ancilla dimensions must be positive");
  const Index n = g.n(), m = g.m();
  const ComplexMatrix& G = g.matrix();
  const double owq = beta_owq(g).value;
  if (dA == 1 && dB == 1) {
    const ProductResult p = beta_product(g, budget, {false});
    EntangledStrategy w(1, 1, ComplexVector::Ones(1), p.witness.A().matrix(), p.witness.B().matrix());
    EntangledResult out{BoundInterval{}, w};
    out.bounds.lower = bias_of(g, w);
    out.bounds.lower_method = "product-seesaw";
    out.bounds.upper = owq;
    out.bounds.upper_method = "beta_owq";
    return out;
  }
  const Index na = n * dA, mb = m * dB;
  double best_value = -std::numeric_limits<double>::infinity();
  ComplexMatrix bestA, bestB;
  ComplexVector bestPsi;
  for (int r = 0; r < budget.restarts; ++r) {
    mat::Rng rng = mat::make_stream(budget.seed ^ kEntangledSalt, static_cast<std::uint64_t>(r) + 10000u * (dA * 16 + dB));
    ComplexMatrix A, B;
    ComplexVector psi;
    const bool use_warm = r == 0 && warm && warm->dA() <= dA && warm->dB() <= dB;
    if (use_warm) {
      A = embed_observable(warm->A().matrix(), n, warm->dA(), dA);
      B = embed_observable(warm->B().matrix(), m, warm->dB(), dB);
      psi = embed_state(warm->psi(), warm->dA(), warm->dB(), dA, dB);
    } else {
      A = mat::random_observable(na, rng).matrix();
      B = mat::random_observable(mb, rng).matrix();
      psi = mat::random_unit_vector(dA * dB, rng);
    }
    double prev = -std::numeric_limits<double>::infinity(), last = prev;
    if (use_warm) prev = last = pair(enlarged(G, n, m, dA, dB, psi), A, B);
    for (int sweep = 0; sweep < budget.max_sweeps; ++sweep) {
      const ComplexMatrix gamma = enlarged(G, n, m, dA, dB, psi);
      B = mat::sign_hermitian(HermitianMatrix::symmetrized(mat::partial_contract_A(gamma, A, na, mb))).matrix();
      const double v1 = pair(gamma, A, B);
      check_monotone(prev, v1, "entangled see-saw");
      A = mat::sign_hermitian(HermitianMatrix::symmetrized(mat::partial_contract_B(gamma, B, na, mb))).matrix();
      const double v2 = pair(gamma, A, B);
      check_monotone(v1, v2, "entangled see-saw");
      const mat::Eigh e = mat::eigh_lower(ancilla_operator(G, n, m, dA, dB, A, B));
      psi = e.vectors.col(0);
      const double v3 = e.values(0);
      check_monotone(v2, v3, "entangled see-saw");
      prev = v3;
      if (std::isfinite(last) && v3 - last <= budget.tol * std::max(1.0, std::abs(v3))) break;
      last = v3;
    }
    psi.normalize();
    const double v = pair(enlarged(G, n, m, dA, dB, psi), A, B);
    if (v > best_value) {
      best_value = v;
      bestA = A;
      bestB = B;
      bestPsi = psi;
    }
  }
  EntangledStrategy w(dA, dB, bestPsi, bestA, bestB);
  EntangledResult out{BoundInterval{}, w};
  out.bounds.lower = bias_of(g, w);
  out.bounds.lower_method = "entangled-seesaw";
  out.bounds.upper = owq;
  out.bounds.upper_method = "beta_owq";
  out.bounds.validate("beta_entangled");
  return out;
}

std::vector<AncillaDims> default_ancilla_schedule() { return {{1, 1}, {2, 2}, {3, 3}, {4, 4}}; }

std::vector<EntangledResult> beta_entangled_schedule(const BipartiteOperator& g, std::span<const AncillaDims> dims,
                                                     const SolverBudget& budget) {
  std::vector<EntangledResult> out;
  for (const AncillaDims& d : dims) {
    const EntangledStrategy* warm = out.empty() ? nullptr : &out.back().witness;
    EntangledResult r = beta_entangled(g, d.dA, d.dB, budget, warm);
    if (!out.empty() && warm->dA() <= d.dA && warm->dB() <= d.dB) {
      check_monotone(out.back().bounds.lower, r.bounds.lower, "ancilla schedule");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace qxor::bias
