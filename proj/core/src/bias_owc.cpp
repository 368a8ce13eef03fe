#include <algorithm>
#include <cmath>
#include <set>

#include "qxor/bias.hpp"
#include "qxor/lmi.hpp"

namespace qxor::bias {

namespace {

constexpr std::uint64_t kOwcSalt = 0x0C0C;
constexpr std::uint64_t kCbSalt = 0x1CB;

void check_monotone(double before, double after, const char* where) {
  if (after < before - kTol.monotonicity * std::max(1.0, std::abs(before))) {
    throw ConvergenceError(std::string("see-saw objective decreased in ") + where, before - after);
  }
}

std::vector<lmi::Entry> dense_entries(const ComplexMatrix& m) {
  std::vector<lmi::Entry> out;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) != Complex(0.0)) out.push_back({i, j, m(i, j)});
    }
  }
  return out;
}

ComplexMatrix sign_of(const ComplexMatrix& m) {
  return mat::sign_hermitian(HermitianMatrix::symmetrized(m)).matrix();
}

struct Instrument {
  std::vector<ComplexMatrix> plus, minus, obs;
};

double owc_value(const ComplexMatrix& G, const Instrument& s) {
  double v = 0.0;
  for (std::size_t k = 0; k < s.plus.size(); ++k) {
    v += (G * mat::kron(s.plus[k] - s.minus[k], s.obs[k])).trace().real();
  }
  return v;
}

// Optimal observables for a fixed instrument; returns the attained value.
double observables_step(const ComplexMatrix& G, Index n, Index m, Instrument& s) {
  double v = 0.0;
  for (std::size_t k = 0; k < s.plus.size(); ++k) {
    const ComplexMatrix d = mat::partial_contract_A(G, s.plus[k] - s.minus[k], n, m);
    s.obs[k] = sign_of(d);
    v += mat::trace_norm(HermitianMatrix::symmetrized(d));
  }
  return v;
}

ComplexMatrix renormalize(std::vector<ComplexMatrix>& effects) {
  const Index n = effects.front().rows();
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (const auto& e : effects) s += e;
  const ComplexMatrix r = mat::psd_inv_sqrt((s + s.adjoint()) * 0.5, 1e-300);
  for (auto& e : effects) {
    e = r * e * r;
    e = (e + e.adjoint()) * 0.5;
  }
  return s;
}

Instrument random_instrument(Index n, Index d, mat::Rng& rng) {
  std::vector<ComplexMatrix> fx;
  for (Index j = 0; j < 2 * d; ++j) {
    const ComplexMatrix g = mat::random_ginibre(n, n, rng);
    fx.push_back(g * g.adjoint());
  }
  renormalize(fx);
  Instrument s;
  for (Index k = 0; k < d; ++k) {
    s.plus.push_back(fx[static_cast<std::size_t>(2 * k)]);
    s.minus.push_back(fx[static_cast<std::size_t>(2 * k + 1)]);
    s.obs.push_back(ComplexMatrix::Identity(1, 1));
  }
  return s;
}

Instrument from_strategy(const OwcStrategy& w, Index d) {
  Instrument s;
  const Index n = w.plus().front().dim();
  const Index m = w.observables().front().dim();
  for (Index k = 0; k < d; ++k) {
    if (k < w.messages()) {
      s.plus.push_back(w.plus()[static_cast<std::size_t>(k)].matrix());
      s.minus.push_back(w.minus()[static_cast<std::size_t>(k)].matrix());
      s.obs.push_back(w.observables()[static_cast<std::size_t>(k)].matrix());
    } else {
      s.plus.push_back(ComplexMatrix::Zero(n, n));
      s.minus.push_back(ComplexMatrix::Zero(n, n));
      s.obs.push_back(ComplexMatrix::Identity(m, m));
    }
  }
  return s;
}

OwcStrategy to_strategy(const Instrument& s) { return OwcStrategy(s.plus, s.minus, s.obs); }

}  // namespace

InstrumentResult optimize_instrument(std::span<const ComplexMatrix> c) {
  if (c.empty()) throw DimensionError("optimize_instrument: need at least one message");
  const Index n = c.front().rows();
  const Index d = static_cast<Index>(c.size());
  std::vector<ComplexMatrix> targets;
  double top = 0.0;
  for (const auto& ck : c) {
    if (ck.rows() != n || ck.cols() != n) throw DimensionError("optimize_instrument: target size");
    const ComplexMatrix h = (ck + ck.adjoint()) * 0.5;
    targets.push_back(h);
    targets.push_back(-h);
    top = std::max(top, mat::op_norm(h));
  }
  // Dual: minimize tr Y subject to Y - M_j >= 0.
  const auto basis = mat::hermitian_basis(n);
  lmi::Problem p;
  p.cost = RealVector::Zero(n * n);
  std::vector<std::vector<lmi::Entry>> coeffs;
  for (Index l = 0; l < n * n; ++l) {
    p.cost(l) = basis[static_cast<std::size_t>(l)].trace().real();
    coeffs.push_back(dense_entries(basis[static_cast<std::size_t>(l)]));
  }
  for (const auto& t : targets) p.blocks.push_back(lmi::Block{-t, coeffs});
  RealVector z0 = RealVector::Zero(n * n);
  for (Index i = 0; i < n; ++i) z0(i) = top + 1.0;
  lmi::Options opt;
  opt.want_duals = true;
  opt.rel_gap = 1e-10;
  const lmi::Result r = lmi::minimize(p, z0, opt);

  std::vector<ComplexMatrix> effects = r.duals;
  renormalize(effects);
  InstrumentResult out;
  out.dual = r.value;
  out.converged = r.converged;
  for (Index k = 0; k < d; ++k) {
    out.plus.push_back(effects[static_cast<std::size_t>(2 * k)]);
    out.minus.push_back(effects[static_cast<std::size_t>(2 * k + 1)]);
    out.value += ((out.plus.back() - out.minus.back()) * targets[static_cast<std::size_t>(2 * k)]).trace().real();
  }
  return out;
}

OwcResult beta_owc(const BipartiteOperator& g, Index d, const SolverBudget& budget, const OwcStrategy* warm) {
  budget.validate();
  if (d < 1) throw ValidationError("messages", "message count must be positive");
  const Index n = g.n(), m = g.m();
  const ComplexMatrix& G = g.matrix();
  const double owq = beta_owq(g).value;
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);

  if (d == 1 && !warm) {
    const ProductResult p = beta_product(g, budget, {false});
    const ComplexMatrix& A = p.witness.A().matrix();
    OwcStrategy w({(I + A) * 0.5}, {(I - A) * 0.5}, {p.witness.B().matrix()});
    OwcResult out{BoundInterval{}, w, 0.0, true};
    out.bounds.lower = bias_of(g, w);
    out.bounds.lower_method = "product-seesaw";
    out.bounds.upper = owq;
    out.bounds.upper_method = "beta_owq";
    return out;
  }

  std::optional<Instrument> best;
  double best_value = -std::numeric_limits<double>::infinity();
  double worst_gap = 0.0;
  bool all_converged = true;
  const int restarts = std::max(budget.restarts, 2);
  for (int r = 0; r < restarts; ++r) {
    mat::Rng rng = mat::make_stream(budget.seed ^ kOwcSalt, static_cast<std::uint64_t>(r) + 1000u * d);
    Instrument s;
    if (r == 0) {
      if (warm) {
        s = from_strategy(*warm, d);
      } else {
        const ProductResult p = beta_product(g, budget, {false});
        const ComplexMatrix& A = p.witness.A().matrix();
        OwcStrategy w({(I + A) * 0.5}, {(I - A) * 0.5}, {p.witness.B().matrix()});
        s = from_strategy(w, d);
      }
    } else if (r == 1) {
      // Measure in the computational basis and forward the outcome.
      for (Index k = 0; k < d; ++k) {
        s.plus.push_back(ComplexMatrix::Zero(n, n));
        s.minus.push_back(ComplexMatrix::Zero(n, n));
        s.obs.push_back(ComplexMatrix::Identity(m, m));
      }
      for (Index i = 0; i < n; ++i) s.plus[static_cast<std::size_t>(i % d)](i, i) = 1.0;
    } else {
      s = random_instrument(n, d, rng);
      for (auto& b : s.obs) b = ComplexMatrix::Identity(m, m);
    }

    double value = observables_step(G, n, m, s);
    if (r == 0 && warm) check_monotone(bias_of(g, *warm), value, "owc warm start");
    double last = value;
    for (int sweep = 0; sweep < budget.max_sweeps; ++sweep) {
      std::vector<ComplexMatrix> cs;
      for (std::size_t k = 0; k < s.obs.size(); ++k) cs.push_back(mat::partial_contract_B(G, s.obs[k], n, m));
      const InstrumentResult inst = optimize_instrument(cs);
      if (inst.value > value) {
        s.plus = inst.plus;
        s.minus = inst.minus;
        worst_gap = std::max(worst_gap, inst.dual - inst.value);
        if (!inst.converged) all_converged = false;
        const double v1 = owc_value(G, s);
        const double v2 = observables_step(G, n, m, s);
        check_monotone(value, v2, "owc see-saw");
        check_monotone(v1, v2, "owc see-saw");
        value = v2;
      }
      if (value - last <= budget.tol * std::max(1.0, std::abs(value))) break;
      last = value;
    }
    if (value > best_value) {
      best_value = value;
      best = s;
    }
  }
  OwcStrategy w = to_strategy(*best);
  OwcResult out{BoundInterval{}, w, worst_gap, all_converged && worst_gap <= kTol.instrument_gap};
  out.bounds.lower = bias_of(g, w);
  out.bounds.lower_method = "owc-seesaw";
  out.bounds.upper = owq;
  out.bounds.upper_method = "beta_owq";
  out.bounds.validate("beta_owc");
  return out;
}

std::vector<OwcResult> beta_owc_schedule(const BipartiteOperator& g, std::span<const Index> messages,
                                         const SolverBudget& budget) {
  std::vector<OwcResult> out;
  for (Index d : messages) {
    const OwcStrategy* warm = nullptr;
    if (!out.empty() && out.back().witness.messages() <= d) warm = &out.back().witness;
    OwcResult r = beta_owc(g, d, budget, warm);
    if (warm) check_monotone(out.back().bounds.lower, r.bounds.lower, "message schedule");
    out.push_back(std::move(r));
  }
  return out;
}

double pi1o_exact(const BipartiteOperator& g) { return mat::trace_norm(g.hermitian()); }

std::vector<Index> default_pi1cb_schedule(Index n) {
  std::set<Index> s{1, 2, 4, n, 2 * n};
  return {s.begin(), s.end()};
}

namespace {

struct Factorized {
  std::vector<ComplexMatrix> a, b, B;  // A_k = a_k b_k
};

double factorized_value(const ComplexMatrix& G, const Factorized& f) {
  double v = 0.0;
  for (std::size_t k = 0; k < f.a.size(); ++k) {
    const ComplexMatrix A = f.a[k] * f.b[k];
    v += (G * mat::kron(ComplexMatrix(A.transpose()), f.B[k])).trace().real();
  }
  return v;
}

// Rescales so that hcat(a), vcat(b) and each B_k are contractions.
void make_feasible(Factorized& f) {
  const Index r = f.a.front().cols();
  const Index n = f.a.front().rows();
  const Index d = static_cast<Index>(f.a.size());
  ComplexMatrix ha(n, r * d), vb(r * d, n);
  for (Index k = 0; k < d; ++k) {
    ha.middleCols(k * r, r) = f.a[static_cast<std::size_t>(k)];
    vb.middleRows(k * r, r) = f.b[static_cast<std::size_t>(k)];
  }
  const double sa = std::max(1.0, mat::op_norm(ha)), sb = std::max(1.0, mat::op_norm(vb));
  for (auto& x : f.a) x /= sa;
  for (auto& x : f.b) x /= sb;
  for (auto& x : f.B) x /= std::max(1.0, mat::op_norm(x));
}

double factorized_seesaw(const ComplexMatrix& G, Index n, Index m, Factorized& f, const SolverBudget& budget) {
  const Index d = static_cast<Index>(f.a.size());
  const Index r = f.a.front().cols();
  double prev = factorized_value(G, f), last = prev;
  for (int sweep = 0; sweep < budget.max_sweeps; ++sweep) {
    for (Index k = 0; k < d; ++k) {
      const ComplexMatrix A = f.a[static_cast<std::size_t>(k)] * f.b[static_cast<std::size_t>(k)];
      f.B[static_cast<std::size_t>(k)] = mat::polar_contraction(mat::partial_contract_A(G, A.transpose(), n, m));
    }
    double v = factorized_value(G, f);
    check_monotone(prev, v, "factorized see-saw");
    prev = v;
    std::vector<ComplexMatrix> M(static_cast<std::size_t>(d));
    for (Index k = 0; k < d; ++k) {
      M[static_cast<std::size_t>(k)] = mat::partial_contract_B(G, f.B[static_cast<std::size_t>(k)], n, m).transpose();
    }
    ComplexMatrix y(r * d, n);
    for (Index k = 0; k < d; ++k) y.middleRows(k * r, r) = f.b[static_cast<std::size_t>(k)] * M[static_cast<std::size_t>(k)];
    const ComplexMatrix ha = mat::polar_contraction(y);
    for (Index k = 0; k < d; ++k) f.a[static_cast<std::size_t>(k)] = ha.middleCols(k * r, r);
    v = factorized_value(G, f);
    check_monotone(prev, v, "factorized see-saw");
    prev = v;
    ComplexMatrix x(n, r * d);
    for (Index k = 0; k < d; ++k) x.middleCols(k * r, r) = M[static_cast<std::size_t>(k)] * f.a[static_cast<std::size_t>(k)];
    const ComplexMatrix vb = mat::polar_contraction(x);
    for (Index k = 0; k < d; ++k) f.b[static_cast<std::size_t>(k)] = vb.middleRows(k * r, r);
    v = factorized_value(G, f);
    check_monotone(prev, v, "factorized see-saw");
    prev = v;
    if (v - last <= budget.tol * std::max(1.0, std::abs(v))) break;
    last = v;
  }
  make_feasible(f);
  return factorized_value(G, f);
}

Factorized from_owc(const OwcStrategy& w) {
  Factorized f;
  for (Index k = 0; k < w.messages(); ++k) {
    const ComplexMatrix sp = mat::psd_sqrt(w.plus()[static_cast<std::size_t>(k)].matrix()).transpose();
    const ComplexMatrix sm = mat::psd_sqrt(w.minus()[static_cast<std::size_t>(k)].matrix()).transpose();
    const Index n = sp.rows();
    ComplexMatrix a(n, 2 * n), b(2 * n, n);
    a << sp, sm;
    b << sp, -sm;
    f.a.push_back(std::move(a));
    f.b.push_back(std::move(b));
    f.B.push_back(w.observables()[static_cast<std::size_t>(k)].matrix());
  }
  return f;
}

}  // namespace

Pi1cbResult pi1cb_bounds(const BipartiteOperator& g, std::span<const Index> messages, const SolverBudget& budget) {
  budget.validate();
  const Index n = g.n(), m = g.m();
  std::vector<Index> sched(messages.begin(), messages.end());
  if (sched.empty()) sched = default_pi1cb_schedule(n);
  const double owq = beta_owq(g).value;
  Pi1cbResult out;
  out.messages = sched;
  out.bounds.upper = std::min(pi1o_exact(g), 4.0 * owq);
  out.bounds.upper_method = pi1o_exact(g) <= 4.0 * owq ? "pi1o" : "4*beta_owq";
  out.bounds.lower_method = "owc+factorized-seesaw";
  const auto owc = beta_owc_schedule(g, sched, budget);
  const int extra = std::min(budget.restarts - 1, 3);
  for (std::size_t i = 0; i < sched.size(); ++i) {
    const Index d = sched[i];
    out.owc_lower.push_back(owc[i].bounds.lower);
    Factorized f = from_owc(owc[i].witness);
    double best = factorized_seesaw(g.matrix(), n, m, f, budget);
    for (int r = 0; r < extra; ++r) {
      mat::Rng rng = mat::make_stream(budget.seed ^ kCbSalt, static_cast<std::uint64_t>(r) + 1000u * d);
      Factorized h;
      for (Index k = 0; k < d; ++k) {
        h.a.push_back(mat::random_ginibre(n, 2 * n, rng));
        h.b.push_back(mat::random_ginibre(2 * n, n, rng));
        h.B.push_back(mat::random_contraction(m, m, rng));
      }
      make_feasible(h);
      best = std::max(best, factorized_seesaw(g.matrix(), n, m, h, budget));
    }
    out.direct_lower.push_back(best);
    out.bounds.lower = std::max({out.bounds.lower, owc[i].bounds.lower, best});
  }
  out.bounds.validate("pi1cb_bounds");
  return out;
}

double classical_bias(const RealMatrix& M) {
  const Index n = M.rows();
  if (n > 24) throw DimensionError("classical_bias: enumeration limited to 24 rows");
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    RealVector a(n);
    for (Index i = 0; i < n; ++i) a(i) = (mask >> i) & 1u ? -1.0 : 1.0;
    best = std::max(best, (a.transpose() * M).cwiseAbs().sum());
  }
  return best;
}

}  // namespace qxor::bias
