#include <algorithm>
#include <cmath>

#include "qxor/lmi.hpp"
#include "qxor/osn.hpp"

namespace qxor::osn {

namespace {

// sum_k mu_k |v_k|^2 >= v^dag Gram v as a 1x1 block.
lmi::Block cut_block(const ComplexVector& v, const ComplexMatrix& gram) {
  lmi::Block b;
  b.constant = ComplexMatrix::Constant(1, 1, -(v.adjoint() * gram * v)(0, 0).real());
  for (Index k = 0; k < v.size(); ++k) b.coeffs.push_back({{0, 0, Complex(std::norm(v(k)), 0.0)}});
  return b;
}

}  // namespace

Pi2Result pietsch_pi2(const ComplexMatrix& h) {
  const Index d = h.cols();
  if (d < 1 || h.rows() < 1) throw DimensionError("pietsch_pi2: need at least one vector");
  mat::require_finite(h, "pietsch_pi2 input");
  ComplexMatrix gram = h.adjoint() * h;
  gram = (gram + gram.adjoint()) * 0.5;
  Pi2Result out;
  const double top = mat::eigh_lower(gram).values(0);
  if (top <= 0.0) {
    out.converged = true;
    return out;
  }

  lmi::Problem lp;
  lp.cost = RealVector::Ones(d);
  for (Index k = 0; k < d; ++k) {
    lmi::Block pos;
    pos.constant = ComplexMatrix::Zero(1, 1);
    pos.coeffs.resize(static_cast<std::size_t>(d));
    pos.coeffs[static_cast<std::size_t>(k)].push_back({0, 0, 1.0});
    lp.blocks.push_back(std::move(pos));
    lp.blocks.push_back(cut_block(ComplexVector::Unit(d, k), gram));
  }

  RealVector start = RealVector::Constant(d, top + 1.0);
  double ub = start.sum(), lb = 0.0;
  const double slack = 1e-3 * std::max(1.0, top);
  for (int round = 0; round < 400; ++round) {
    const lmi::Result r = lmi::minimize(lp, start);
    lb = std::max(lb, r.lower);
    const ComplexMatrix gap = ComplexMatrix(r.z.cast<Complex>().asDiagonal()) - gram;
    const mat::Eigh e = mat::eigh_lower(gap);
    const double low = e.values(d - 1);
    ub = std::min(ub, r.z.sum() + static_cast<double>(d) * std::max(0.0, -low));
    if (ub - lb <= 1e-6 * ub) {
      out.converged = true;
      break;
    }
    for (Index i = 0; i < d; ++i) {
      if (e.values(i) < 0.0) {
        lp.blocks.push_back(cut_block(e.vectors.col(i), gram));
        ++out.cuts;
      }
    }
    start = r.z + RealVector::Constant(d, std::max(0.0, -low) + slack);
  }
  out.value = std::sqrt(ub);
  out.lower = std::sqrt(std::max(0.0, std::min(lb, ub)));
  return out;
}

}  // namespace qxor::osn
