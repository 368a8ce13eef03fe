#include <algorithm>
#include <cmath>
#include <limits>

#include "qxor/osn.hpp"

namespace qxor::osn {

namespace {

constexpr std::uint64_t kAmplifySalt = 0xA11CE;
constexpr std::uint64_t kDualSalt = 0xD0A1;

struct BlockLayout {
  std::vector<Index> size;
  std::vector<Index> offset;  // first basis index of each block
};

BlockLayout layout_of(const ConcreteSpace& dom) {
  if (dom.blocks().empty()) throw DimensionError("amplified search needs a block-diagonal domain with matrix-unit basis");
  BlockLayout b;
  Index off = 0;
  for (Index s : dom.blocks()) {
    b.size.push_back(s);
    b.offset.push_back(off);
    off += s * s;
  }
  return b;
}

// Columns vec(M_j) of a list of equal-size square matrices.
ComplexMatrix stack(const std::vector<ComplexMatrix>& ms) {
  const Index s = ms.front().size();
  ComplexMatrix out(s, static_cast<Index>(ms.size()));
  for (std::size_t j = 0; j < ms.size(); ++j) out.col(static_cast<Index>(j)) = Eigen::Map<const ComplexVector>(ms[j].data(), s);
  return out;
}

ComplexMatrix column_as(const ComplexMatrix& cols, Index j, Index rows) {
  return Eigen::Map<const ComplexMatrix>(cols.col(j).data(), rows, cols.rows() / rows);
}

// Block beta of X in M_L (x) M_s, L outermost.
ComplexMatrix assemble_block(const std::vector<ComplexMatrix>& x, const BlockLayout& lay, std::size_t beta, Index L) {
  const Index s = lay.size[beta];
  ComplexMatrix big(L * s, L * s);
  for (Index a = 0; a < s; ++a) {
    for (Index c = 0; c < s; ++c) {
      const ComplexMatrix& xj = x[static_cast<std::size_t>(lay.offset[beta] + a * s + c)];
      for (Index p = 0; p < L; ++p) {
        for (Index q = 0; q < L; ++q) big(p * s + a, q * s + c) = xj(p, q);
      }
    }
  }
  return big;
}

void scatter_block(const ComplexMatrix& big, const BlockLayout& lay, std::size_t beta, Index L,
                   std::vector<ComplexMatrix>& x) {
  const Index s = lay.size[beta];
  for (Index a = 0; a < s; ++a) {
    for (Index c = 0; c < s; ++c) {
      ComplexMatrix& xj = x[static_cast<std::size_t>(lay.offset[beta] + a * s + c)];
      xj.resize(L, L);
      for (Index p = 0; p < L; ++p) {
        for (Index q = 0; q < L; ++q) xj(p, q) = big(p * s + a, q * s + c);
      }
    }
  }
}

double domain_norm(const std::vector<ComplexMatrix>& x, const BlockLayout& lay, Index L) {
  double v = 0.0;
  for (std::size_t b = 0; b < lay.size.size(); ++b) v = std::max(v, mat::op_norm(assemble_block(x, lay, b, L)));
  return v;
}

// Dual codomain: V in M_k (x) M_m with (V_kl)_rs = V_(r,k),(s,l).
std::vector<ComplexMatrix> split_dual(const ComplexMatrix& vbig, Index k, Index m) {
  std::vector<ComplexMatrix> out(static_cast<std::size_t>(m * m), ComplexMatrix(k, k));
  for (Index a = 0; a < m; ++a) {
    for (Index b = 0; b < m; ++b) {
      ComplexMatrix& v = out[static_cast<std::size_t>(a * m + b)];
      for (Index r = 0; r < k; ++r) {
        for (Index s = 0; s < k; ++s) v(r, s) = vbig(r * m + a, s * m + b);
      }
    }
  }
  return out;
}

// N = sum_kl Y_kl (x) V_kl from columns vec(Y_kl) (L^2 x m^2) and V.
ComplexMatrix dual_pairing(const ComplexMatrix& ys, Index L, const std::vector<ComplexMatrix>& vs, Index k) {
  const ComplexMatrix vcols = stack(vs);
  const ComplexMatrix prod = ys * vcols.transpose();  // ((p,q) col-major, (r,s) col-major)
  ComplexMatrix n(L * k, L * k);
  for (Index q = 0; q < L; ++q) {
    for (Index p = 0; p < L; ++p) {
      for (Index s = 0; s < k; ++s) {
        for (Index r = 0; r < k; ++r) n(p * k + r, q * k + s) = prod(p + L * q, r + k * s);
      }
    }
  }
  return n;
}

ComplexMatrix reshape_vec(const ComplexVector& v, Index rows, Index cols) {
  // v index p*cols + r -> (p, r)
  ComplexMatrix out(rows, cols);
  for (Index p = 0; p < rows; ++p) {
    for (Index r = 0; r < cols; ++r) out(p, r) = v(p * cols + r);
  }
  return out;
}

ComplexMatrix pad_dual(const ComplexMatrix& vbig, Index k, Index m, Index new_k) {
  const auto parts = split_dual(vbig, k, m);
  ComplexMatrix out = ComplexMatrix::Zero(new_k * m, new_k * m);
  for (Index a = 0; a < m; ++a) {
    for (Index b = 0; b < m; ++b) {
      const ComplexMatrix& v = parts[static_cast<std::size_t>(a * m + b)];
      for (Index r = 0; r < k; ++r) {
        for (Index s = 0; s < k; ++s) out(r * m + a, s * m + b) = v(r, s);
      }
    }
  }
  return out;
}

void check_monotone(double before, double after, const char* where) {
  if (after < before - kTol.monotonicity * std::max(1.0, std::abs(before))) {
    throw ConvergenceError(std::string("see-saw objective decreased in ") + where, before - after);
  }
}

// One see-saw driver on the pairing sup_V ||sum Y_kl (x) V_kl|| with Y fixed.
struct DualState {
  ComplexMatrix v;
  ComplexVector xi, eta;
  double value = 0.0;
  bool converged = false;
};

DualState dual_seesaw(const ComplexMatrix& ys, Index L, Index m, Index k, ComplexMatrix v0, const SolverBudget& budget) {
  DualState st;
  st.v = std::move(v0);
  double prev = -1.0, last_top = -1.0;
  for (int sweep = 0; sweep < budget.max_sweeps; ++sweep) {
    const auto vs = split_dual(st.v, k, m);
    const mat::TopSingular top = mat::top_singular(dual_pairing(ys, L, vs, k));
    if (prev >= 0.0) check_monotone(prev, top.value, "dual level search");
    st.xi = top.left;
    st.eta = top.right;
    st.value = top.value;
    if (last_top >= 0.0 && top.value - last_top <= budget.tol * std::max(1.0, top.value)) {
      st.converged = true;
      break;
    }
    prev = last_top = top.value;
    const ComplexMatrix Xi = reshape_vec(st.xi, L, k), Eta = reshape_vec(st.eta, L, k);
    ComplexMatrix qbig(k * m, k * m);
    for (Index a = 0; a < m; ++a) {
      for (Index b = 0; b < m; ++b) {
        const ComplexMatrix q = Xi.adjoint() * column_as(ys, a * m + b, L) * Eta;
        for (Index r = 0; r < k; ++r) {
          for (Index s = 0; s < k; ++s) qbig(r * m + a, s * m + b) = q(r, s);
        }
      }
    }
    st.v = mat::polar_contraction(qbig.transpose());
    const double f = mat::trace_norm(qbig);
    check_monotone(prev, f, "dual level search");
    prev = f;
  }
  return st;
}

double tensor_bound_if_full(const LinearMapRep& u) {
  const auto& dom = u.domain();
  if (!u.codomain().is_dual() || dom.blocks().size() != 1) return std::numeric_limits<double>::infinity();
  return tensor_trace_norm(u);
}

}  // namespace

double tensor_trace_norm(const LinearMapRep& u) {
  const auto& dom = u.domain();
  if (!u.codomain().is_dual() || dom.blocks().size() != 1) {
    throw DimensionError("tensor_trace_norm needs a map from a full matrix algebra into a trace class");
  }
  const Index n = dom.blocks().front(), m = u.codomain().ambient();
  ComplexMatrix g(n * m, n * m);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      for (Index k = 0; k < m; ++k) {
        for (Index l = 0; l < m; ++l) g(i * m + k, j * m + l) = u.coefficients()(k * m + l, i * n + j);
      }
    }
  }
  return mat::trace_norm(g);
}

double basis_triangle_bound(const LinearMapRep& u) {
  if (u.domain().blocks().empty()) return std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (Index j = 0; j < u.domain().dim(); ++j) total += u.codomain().norm(u.coefficients().col(j));
  return total;
}

AmplifiedResult amplified_search(const LinearMapRep& u, Index L, const SolverBudget& budget,
                                 const AmplifiedWitness* warm) {
  budget.validate();
  if (L < 1) throw DimensionError("amplified_search: level must be positive");
  const BlockLayout lay = layout_of(u.domain());
  const ConcreteSpace& cod = u.codomain();
  const bool dual = cod.is_dual();
  const Index dimDom = u.domain().dim(), dimCod = cod.dim();
  const Index ncod = cod.ambient();
  const ComplexMatrix& coeff = u.coefficients();

  AmplifiedResult res;
  res.bounds.upper = std::min(basis_triangle_bound(u), tensor_bound_if_full(u));
  res.bounds.upper_method = dual && std::isfinite(tensor_bound_if_full(u)) ? "tensor-trace-norm" : "basis-triangle";
  res.bounds.lower_method = "amplified-seesaw";
  res.witness.level = L;
  res.witness.value = -1.0;

  if (coeff.norm() == 0.0) {
    res.bounds.lower = 0.0;
    res.bounds.upper = 0.0;
    res.witness.value = 0.0;
    res.witness.x.assign(static_cast<std::size_t>(dimDom), ComplexMatrix::Zero(L, L));
    return res;
  }

  for (int restart = 0; restart < budget.restarts; ++restart) {
    mat::Rng rng = mat::make_stream(budget.seed ^ kAmplifySalt, static_cast<std::uint64_t>(restart) + 1000u * L);
    std::vector<ComplexMatrix> x(static_cast<std::size_t>(dimDom));
    ComplexMatrix v;
    if (restart == 0 && warm && warm->level <= L && !warm->x.empty()) {
      for (Index j = 0; j < dimDom; ++j) {
        x[static_cast<std::size_t>(j)] = ComplexMatrix::Zero(L, L);
        x[static_cast<std::size_t>(j)].topLeftCorner(warm->level, warm->level) = warm->x[static_cast<std::size_t>(j)];
      }
      if (dual) {
        v = warm->v.size() > 0 ? pad_dual(warm->v, warm->level, ncod, L) : mat::random_contraction(L * ncod, L * ncod, rng);
      }
    } else {
      for (std::size_t b = 0; b < lay.size.size(); ++b) {
        scatter_block(mat::random_contraction(L * lay.size[b], L * lay.size[b], rng), lay, b, L, x);
      }
      if (dual) v = mat::random_contraction(L * ncod, L * ncod, rng);
    }

    double prev = -1.0, last_top = -1.0, value = 0.0;
    ComplexVector xi, eta;
    bool converged = false;
    for (int sweep = 0; sweep < budget.max_sweeps; ++sweep) {
      const ComplexMatrix ys = stack(x) * coeff.transpose();  // columns vec(Y_i)
      mat::TopSingular top;
      std::vector<ComplexMatrix> vs;
      if (dual) {
        vs = split_dual(v, L, ncod);
        top = mat::top_singular(dual_pairing(ys, L, vs, L));
      } else {
        ComplexMatrix ybig = ComplexMatrix::Zero(L * ncod, L * ncod);
        for (Index i = 0; i < dimCod; ++i) ybig += mat::kron(column_as(ys, i, L), cod.basis()[static_cast<std::size_t>(i)]);
        top = mat::top_singular(ybig);
      }
      if (prev >= 0.0) check_monotone(prev, top.value, "amplified search");
      value = top.value;
      xi = top.left;
      eta = top.right;
      if (last_top >= 0.0 && value - last_top <= budget.tol * std::max(1.0, value)) {
        converged = true;
        break;
      }
      prev = last_top = value;

      // H_i, the gradient of the objective with respect to Y_i.
      ComplexMatrix hs(L * L, dimCod);
      if (dual) {
        const ComplexMatrix Xi = reshape_vec(xi, L, L), Eta = reshape_vec(eta, L, L);
        ComplexMatrix qbig(L * ncod, L * ncod);
        for (Index a = 0; a < ncod; ++a) {
          for (Index b = 0; b < ncod; ++b) {
            const ComplexMatrix q = Xi.adjoint() * column_as(ys, a * ncod + b, L) * Eta;
            for (Index r = 0; r < L; ++r) {
              for (Index s = 0; s < L; ++s) qbig(r * ncod + a, s * ncod + b) = q(r, s);
            }
          }
        }
        v = mat::polar_contraction(qbig.transpose());
        const double f = mat::trace_norm(qbig);
        check_monotone(prev, f, "amplified search");
        prev = f;
        vs = split_dual(v, L, ncod);
        const ComplexMatrix xic = Xi.conjugate(), etat = Eta.transpose();
        for (Index i = 0; i < dimCod; ++i) {
          const ComplexMatrix h = xic * vs[static_cast<std::size_t>(i)] * etat;
          hs.col(i) = Eigen::Map<const ComplexVector>(h.data(), L * L);
        }
      } else {
        const ComplexMatrix xic = reshape_vec(xi, L, ncod).conjugate();
        const ComplexMatrix etat = reshape_vec(eta, L, ncod).transpose();
        for (Index i = 0; i < dimCod; ++i) {
          const ComplexMatrix h = xic * cod.basis()[static_cast<std::size_t>(i)] * etat;
          hs.col(i) = Eigen::Map<const ComplexVector>(h.data(), L * L);
        }
      }
      const ComplexMatrix ws = hs * coeff;  // columns vec(W_j)
      std::vector<ComplexMatrix> wlist(static_cast<std::size_t>(dimDom));
      for (Index j = 0; j < dimDom; ++j) wlist[static_cast<std::size_t>(j)] = column_as(ws, j, L);
      double f = 0.0;
      for (std::size_t b = 0; b < lay.size.size(); ++b) {
        const ComplexMatrix wbig = assemble_block(wlist, lay, b, L);
        scatter_block(mat::polar_contraction(wbig.transpose()), lay, b, L, x);
        f += mat::trace_norm(wbig);
      }
      check_monotone(prev, f, "amplified search");
      prev = f;
    }
    // Rescale so that the witness is exactly feasible.
    const double xn = domain_norm(x, lay, L);
    double vn = dual ? mat::op_norm(v) : 1.0;
    const double certified = value / (std::max(1.0, xn) * std::max(1.0, vn));
    if (converged) ++res.converged_restarts;
    if (certified > res.witness.value) {
      res.witness.value = certified;
      res.witness.x = x;
      res.witness.v = v;
      res.witness.xi = xi;
      res.witness.eta = eta;
    }
  }
  res.bounds.lower = std::max(0.0, res.witness.value);
  res.bounds.lower = std::min(res.bounds.lower, res.bounds.upper);
  return res;
}

BoundInterval amplified_norm(const LinearMapRep& u, Index level, const SolverBudget& budget) {
  return amplified_search(u, level, budget).bounds;
}

double amplified_ratio(const LinearMapRep& u, Index level, const ComplexMatrix& xbig) {
  const auto& dom = u.domain();
  const Index N = dom.ambient();
  if (xbig.rows() != level * N || xbig.cols() != level * N) throw DimensionError("amplified_ratio: witness has wrong size");
  const double xn = mat::op_norm(xbig);
  if (xn == 0.0) return 0.0;
  // Coordinates X_j of X along the matrix-unit basis.
  std::vector<ComplexMatrix> x;
  for (const auto& b : dom.basis()) {
    Index r0 = -1, c0 = -1;
    for (Index r = 0; r < N && r0 < 0; ++r) {
      for (Index c = 0; c < N; ++c) {
        if (b(r, c) != Complex(0.0)) {
          r0 = r;
          c0 = c;
          break;
        }
      }
    }
    if (r0 < 0 || dom.blocks().empty()) throw DimensionError("amplified_ratio needs a matrix-unit domain basis");
    ComplexMatrix xj(level, level);
    for (Index p = 0; p < level; ++p) {
      for (Index q = 0; q < level; ++q) xj(p, q) = xbig(p * N + r0, q * N + c0);
    }
    x.push_back(std::move(xj));
  }
  const ComplexMatrix ys = stack(x) * u.coefficients().transpose();
  const auto& cod = u.codomain();
  double yn = 0.0;
  if (cod.is_dual()) {
    const Index m = cod.ambient();
    DualArray z{level, m, {}};
    for (Index p = 0; p < level; ++p) {
      for (Index q = 0; q < level; ++q) {
        ComplexMatrix blk(m, m);
        for (Index a = 0; a < m; ++a) {
          for (Index b = 0; b < m; ++b) blk(a, b) = ys(p + level * q, a * m + b);
        }
        z.blocks.push_back(std::move(blk));
      }
    }
    SolverBudget b;
    b.restarts = 4;
    yn = ml_dual_norm(z, level, b).lower;
  } else {
    const Index M = cod.ambient();
    ComplexMatrix ybig = ComplexMatrix::Zero(level * M, level * M);
    for (Index i = 0; i < cod.dim(); ++i) ybig += mat::kron(column_as(ys, i, level), cod.basis()[static_cast<std::size_t>(i)]);
    yn = mat::op_norm(ybig);
  }
  return yn / xn;
}

std::vector<Index> default_levels(const LinearMapRep& u) {
  const Index cap = std::max<Index>(1, u.domain().ambient() * u.codomain().ambient());
  std::vector<Index> out;
  for (Index l = 1; l < cap; l *= 2) out.push_back(l);
  out.push_back(cap);
  return out;
}

CbResult cb_norm_bounds(const LinearMapRep& u, const SolverBudget& budget, std::span<const Index> schedule) {
  std::vector<Index> levels(schedule.begin(), schedule.end());
  if (levels.empty()) levels = default_levels(u);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1 || (i > 0 && levels[i] < levels[i - 1])) throw ValidationError("level schedule", "levels must be positive and non-decreasing");
  }
  CbResult out;
  out.levels = levels;
  out.bounds.lower_method = "amplified-seesaw";
  AmplifiedWitness witness;
  bool have = false;
  for (Index L : levels) {
    const AmplifiedResult r = amplified_search(u, L, budget, have ? &witness : nullptr);
    witness = r.witness;
    have = true;
    const double prev = out.level_lower.empty() ? 0.0 : out.level_lower.back();
    out.level_lower.push_back(std::max(prev, r.bounds.lower));
    out.bounds.lower = out.level_lower.back();
    out.bounds.upper = r.bounds.upper;
    out.bounds.upper_method = r.bounds.upper_method;
  }
  if (out.level_lower.size() >= 2) {
    const double a = out.level_lower[out.level_lower.size() - 2], b = out.level_lower.back();
    out.stabilized = std::abs(b - a) <= 1e-6 * std::max(1.0, b);
  }
  out.bounds.validate("cb_norm_bounds");
  return out;
}

BoundInterval ml_dual_norm(const DualArray& z, Index k, const SolverBudget& budget) {
  budget.validate();
  const Index L = z.level, m = z.m;
  if (L < 1 || m < 1 || static_cast<Index>(z.blocks.size()) != L * L || k < 1) {
    throw DimensionError("ml_dual_norm: inconsistent array shape");
  }
  for (const auto& b : z.blocks) {
    if (b.rows() != m || b.cols() != m) throw DimensionError("ml_dual_norm: block has wrong size");
  }
  BoundInterval out;
  out.lower_method = "dual-level-seesaw";
  out.upper_method = "block-triangle";
  out.upper = 0.0;
  for (const auto& b : z.blocks) out.upper += mat::trace_norm(b);
  if (L == 1) return BoundInterval::exact(mat::trace_norm(z.blocks.front()), "trace-norm");
  if (out.upper == 0.0) {
    out.lower = 0.0;
    return out;
  }
  // Y_kl with (Y_kl)_pq = (Z_pq)_kl, stored as columns.
  ComplexMatrix ys(L * L, m * m);
  for (Index p = 0; p < L; ++p) {
    for (Index q = 0; q < L; ++q) {
      const ComplexMatrix& b = z.blocks[static_cast<std::size_t>(p * L + q)];
      for (Index a = 0; a < m; ++a) {
        for (Index c = 0; c < m; ++c) ys(p + L * q, a * m + c) = b(a, c);
      }
    }
  }
  // Levels above L add nothing; lower levels warm start higher ones so the
  // result never decreases in k.
  const Index top = std::min(k, L);
  double best = 0.0;
  ComplexMatrix carry;
  for (Index level = 1; level <= top; ++level) {
    DualState level_best;
    level_best.value = -1.0;
    for (int restart = 0; restart < budget.restarts; ++restart) {
      mat::Rng rng = mat::make_stream(budget.seed ^ kDualSalt, static_cast<std::uint64_t>(restart) + 1000u * level);
      ComplexMatrix v0 = (restart == 0 && carry.size() > 0) ? pad_dual(carry, level - 1, m, level)
                                                             : mat::random_contraction(level * m, level * m, rng);
      DualState st = dual_seesaw(ys, L, m, level, std::move(v0), budget);
      st.value /= std::max(1.0, mat::op_norm(st.v));
      if (st.value > level_best.value) level_best = std::move(st);
    }
    carry = level_best.v;
    best = std::max(best, level_best.value);
  }
  out.lower = std::min(best, out.upper);
  return out;
}

}  // namespace qxor::osn
