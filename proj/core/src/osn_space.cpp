#include <cmath>

#include "qxor/osn.hpp"

namespace qxor::osn {

namespace {

void require_independent(const std::vector<ComplexMatrix>& basis) {
  const Index k = static_cast<Index>(basis.size());
  if (k == 0) return;
  ComplexMatrix gram(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      gram(i, j) = (basis[static_cast<std::size_t>(i)].adjoint() * basis[static_cast<std::size_t>(j)]).trace();
    }
  }
  const RealVector ev = mat::eigh_lower(gram).values;
  if (ev(k - 1) <= kTol.rank * std::max(1.0, ev(0))) {
    throw ValidationError("basis_independence", "subspace basis has Gram rank below its size");
  }
}

}  // namespace

ConcreteSpace ConcreteSpace::matrix_algebra(Index n) {
  ConcreteSpace s = block_diagonal({n});
  s.label_ = "M" + std::to_string(n);
  return s;
}

ConcreteSpace ConcreteSpace::block_diagonal(std::vector<Index> sizes) {
  if (sizes.empty()) throw DimensionError("block_diagonal: no blocks");
  ConcreteSpace s;
  Index offset = 0;
  for (Index b : sizes) {
    if (b < 1) throw DimensionError("block_diagonal: block sizes must be positive");
    offset += b;
  }
  s.ambient_ = offset;
  offset = 0;
  for (Index b : sizes) {
    for (Index a = 0; a < b; ++a) {
      for (Index c = 0; c < b; ++c) {
        ComplexMatrix e = ComplexMatrix::Zero(s.ambient_, s.ambient_);
        e(offset + a, offset + c) = 1.0;
        s.basis_.push_back(std::move(e));
      }
    }
    offset += b;
  }
  s.blocks_ = std::move(sizes);
  s.label_ = "blocks";
  return s;
}

ConcreteSpace ConcreteSpace::diagonal(Index d) {
  ConcreteSpace s = block_diagonal(std::vector<Index>(static_cast<std::size_t>(d), 1));
  s.label_ = "linf" + std::to_string(d);
  return s;
}

ConcreteSpace ConcreteSpace::subspace(Index ambient, std::vector<ComplexMatrix> basis) {
  if (ambient < 1 || basis.empty()) throw DimensionError("subspace: need a positive ambient size and a basis");
  for (const auto& b : basis) {
    if (b.rows() != ambient || b.cols() != ambient) throw DimensionError("subspace: basis element has wrong shape");
    mat::require_finite(b, "subspace basis");
  }
  require_independent(basis);
  ConcreteSpace s;
  s.ambient_ = ambient;
  s.basis_ = std::move(basis);
  s.label_ = "subspace";
  return s;
}

ConcreteSpace ConcreteSpace::row_intersect_column(Index p) {
  std::vector<ComplexMatrix> basis;
  for (Index k = 1; k <= p; ++k) {
    ComplexMatrix e = ComplexMatrix::Zero(p + 1, p + 1);
    e(0, k) = 1.0;
    e(k, 0) = 1.0;
    basis.push_back(std::move(e));
  }
  ConcreteSpace s = subspace(p + 1, std::move(basis));
  s.label_ = "RcapC" + std::to_string(p);
  return s;
}

ConcreteSpace ConcreteSpace::dual_matrix_algebra(Index n) {
  if (n < 1) throw DimensionError("dual_matrix_algebra: n must be positive");
  ConcreteSpace s;
  s.kind_ = Kind::DualOfMatrixAlgebra;
  s.ambient_ = n;
  for (Index k = 0; k < n; ++k) {
    for (Index l = 0; l < n; ++l) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(k, l) = 1.0;
      s.basis_.push_back(std::move(e));
    }
  }
  s.label_ = "S1_" + std::to_string(n);
  return s;
}

ComplexMatrix ConcreteSpace::element(const ComplexVector& coords) const {
  if (coords.size() != dim()) throw DimensionError("ConcreteSpace::element: coordinate count");
  ComplexMatrix e = ComplexMatrix::Zero(ambient_, ambient_);
  for (Index j = 0; j < dim(); ++j) e += coords(j) * basis_[static_cast<std::size_t>(j)];
  return e;
}

double ConcreteSpace::norm_of(const ComplexMatrix& e) const {
  return is_dual() ? mat::trace_norm(e) : mat::op_norm(e);
}

double ConcreteSpace::norm(const ComplexVector& coords) const { return norm_of(element(coords)); }

LinearMapRep::LinearMapRep(ConcreteSpace domain, ConcreteSpace codomain, ComplexMatrix coefficients)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), coeff_(std::move(coefficients)) {
  if (coeff_.rows() != codomain_.dim() || coeff_.cols() != domain_.dim()) {
    throw DimensionError("LinearMapRep: coefficient shape " + std::to_string(coeff_.rows()) + "x" +
                         std::to_string(coeff_.cols()) + " does not match dim(codomain) x dim(domain)");
  }
  if (!coeff_.allFinite()) throw ValidationError("finite", "LinearMapRep coefficients");
}

LinearMapRep LinearMapRep::scaled(Complex t) const { return LinearMapRep(domain_, codomain_, coeff_ * t); }

}  // namespace qxor::osn
