#include "qxor/lmi.hpp"

#include <cmath>
#include <limits>

namespace qxor::lmi {

void Problem::add_hermitian(std::vector<Entry>& list, Index row, Index col, Complex value) {
  if (row == col) {
    list.push_back({row, col, Complex(value.real(), 0.0)});
    return;
  }
  list.push_back({row, col, value});
  list.push_back({col, row, std::conj(value)});
}

ComplexMatrix evaluate_block(const Block& block, const RealVector& z) {
  ComplexMatrix f = block.constant;
  for (std::size_t j = 0; j < block.coeffs.size(); ++j) {
    const double zj = z(static_cast<Index>(j));
    if (zj == 0.0) continue;
    for (const Entry& e : block.coeffs[j]) f(e.row, e.col) += zj * e.value;
  }
  return f;
}

namespace {

struct Point {
  bool feasible = false;
  double barrier = 0.0;  // -sum log det F_b
  std::vector<Eigen::LLT<ComplexMatrix>> chol;
};

Point factor(const Problem& p, const RealVector& z) {
  Point pt;
  pt.chol.reserve(p.blocks.size());
  for (const Block& b : p.blocks) {
    Eigen::LLT<ComplexMatrix> llt(evaluate_block(b, z));
    if (llt.info() != Eigen::Success) return pt;
    const auto& l = llt.matrixLLT();
    for (Index i = 0; i < l.rows(); ++i) {
      const double d = l(i, i).real();
      if (!(d > 0.0) || !std::isfinite(d)) return pt;
      pt.barrier -= 2.0 * std::log(d);
    }
    pt.chol.push_back(std::move(llt));
  }
  pt.feasible = true;
  return pt;
}

// Gradient and Hessian of the barrier at a feasible point.
void derivatives(const Problem& p, const Point& pt, RealVector& grad, RealMatrix& hess) {
  const Index nv = p.variables();
  grad = RealVector::Zero(nv);
  hess = RealMatrix::Zero(nv, nv);
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const Block& blk = p.blocks[b];
    const Index s = blk.constant.rows();
    const ComplexMatrix w = pt.chol[b].matrixL().solve(ComplexMatrix::Identity(s, s));
    ComplexMatrix kmat = ComplexMatrix::Zero(s * s, nv);
    for (Index j = 0; j < nv; ++j) {
      const auto& list = blk.coeffs[static_cast<std::size_t>(j)];
      if (list.empty()) continue;
      Eigen::Map<ComplexMatrix> k(kmat.col(j).data(), s, s);
      for (const Entry& e : list) k.noalias() += e.value * w.col(e.row) * w.col(e.col).adjoint();
      grad(j) -= k.trace().real();
    }
    hess.noalias() += (kmat.adjoint() * kmat).real();
  }
}

}  // namespace

Result minimize(const Problem& p, const RealVector& start, const Options& options) {
  const Index nv = p.variables();
  if (start.size() != nv) throw DimensionError("lmi::minimize: start has wrong size");
  for (const Block& b : p.blocks) {
    if (static_cast<Index>(b.coeffs.size()) != nv) throw DimensionError("lmi::minimize: block coefficient count");
  }
  double mass = 0.0;
  for (const Block& b : p.blocks) mass += static_cast<double>(b.constant.rows());

  Result res;
  res.z = start;
  Point pt = factor(p, res.z);
  if (!pt.feasible) throw ValidationError("lmi.start", "starting point is not strictly feasible");

  double t = mass / std::max(1.0, std::abs(p.cost.dot(res.z)));
  RealVector grad;
  RealMatrix hess;
  bool done = false;
  while (!done && res.newton_steps < options.max_newton) {
    // Centering for the current t.
    for (;;) {
      if (res.newton_steps >= options.max_newton) break;
      derivatives(p, pt, grad, hess);
      const RealVector g = t * p.cost + grad;
      const double ridge = 1e-14 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
      hess.diagonal().array() += ridge;
      Eigen::LDLT<RealMatrix> ldlt(hess);
      const RealVector step = -ldlt.solve(g);
      const double dec = -g.dot(step);
      ++res.newton_steps;
      if (!(dec >= 0.0) || !std::isfinite(dec)) break;
      if (dec < 1e-9) break;
      const double f0 = t * p.cost.dot(res.z) + pt.barrier;
      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        const RealVector trial = res.z + alpha * step;
        Point cand = factor(p, trial);
        if (cand.feasible) {
          const double f1 = t * p.cost.dot(trial) + cand.barrier;
          if (f1 <= f0 - 0.25 * alpha * dec) {
            res.z = trial;
            pt = std::move(cand);
            moved = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!moved) break;
    }
    const double value = p.cost.dot(res.z);
    if (mass / t <= options.abs_gap + options.rel_gap * std::abs(value)) {
      done = true;
    } else {
      t *= options.growth;
    }
  }
  res.value = p.cost.dot(res.z);
  res.lower = res.value - mass / t;
  res.converged = done;
  if (options.want_duals) {
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
      const Index s = p.blocks[b].constant.rows();
      ComplexMatrix inv = pt.chol[b].solve(ComplexMatrix::Identity(s, s));
      res.duals.push_back(((inv + inv.adjoint()) * 0.5) / t);
    }
  }
  return res;
}

}  // namespace qxor::lmi
