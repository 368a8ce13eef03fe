#include "qxor/mat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qxor {

namespace {

double symmetry_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
  mat::require_square(m, "HermitianMatrix");
  mat::require_finite(m, "HermitianMatrix");
  const double scale = std::max(1.0, mat::max_abs(m));
  const double defect = symmetry_defect(m);
  if (defect > kTol.symmetry * scale) {
    throw ValidationError("hermiticity", "max |M - M^dag| = " + std::to_string(defect));
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::symmetrized(const ComplexMatrix& m) {
  HermitianMatrix h;
  h.m_ = (m + m.adjoint()) * 0.5;
  return h;
}

HermitianMatrix HermitianMatrix::identity(Index n) {
  HermitianMatrix h;
  h.m_ = ComplexMatrix::Identity(n, n);
  return h;
}

HermitianMatrix HermitianMatrix::zero(Index n) {
  HermitianMatrix h;
  h.m_ = ComplexMatrix::Zero(n, n);
  return h;
}

namespace mat {

void require_finite(const ComplexMatrix& m, const std::string& what) {
  if (m.rows() < 1 || m.cols() < 1) throw DimensionError(what + ": empty matrix");
  if (!m.allFinite()) throw ValidationError("finite", what + " has NaN or Inf entries");
}

void require_square(const ComplexMatrix& m, const std::string& what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionError(what + ": expected a non-empty square matrix, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

Eigh eigh_lower(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  if (es.info() != Eigen::Success) {
    throw ConvergenceError("eigh did not converge", symmetry_defect(m));
  }
  Eigh out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

Eigh eigh(const HermitianMatrix& m) { return eigh_lower(m.matrix()); }

RealVector singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return RealVector();
  if (std::max(m.rows(), m.cols()) > 64) {
    Eigen::BDCSVD<ComplexMatrix> svd(m);
    return svd.singularValues();
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

double trace_norm(const ComplexMatrix& m) { return singular_values(m).sum(); }

double trace_norm(const HermitianMatrix& m) { return eigh(m).values.cwiseAbs().sum(); }

double op_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

HermitianMatrix sign_hermitian(const HermitianMatrix& m) {
  const Eigh e = eigh(m);
  ComplexMatrix s = e.vectors;
  for (Index j = 0; j < e.values.size(); ++j) {
    if (e.values(j) < -kTol.zero_eigenvalue) s.col(j) = -s.col(j);
  }
  return HermitianMatrix::symmetrized(s * e.vectors.adjoint());
}

ComplexMatrix polar_contraction(const ComplexMatrix& m) {
  if (std::max(m.rows(), m.cols()) > 64) {
    Eigen::BDCSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixV() * svd.matrixU().adjoint();
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixV() * svd.matrixU().adjoint();
}

TopSingular top_singular(const ComplexMatrix& m) {
  TopSingular out;
  const bool tall = m.rows() >= m.cols();
  const ComplexMatrix gram = tall ? ComplexMatrix(m.adjoint() * m) : ComplexMatrix(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram);
  if (es.info() != Eigen::Success) throw ConvergenceError("top_singular eigensolver failed", 0.0);
  const Index last = gram.rows() - 1;
  ComplexVector v = es.eigenvectors().col(last);
  if (tall) {
    ComplexVector u = m * v;
    const double s = u.norm();
    out.right = v;
    if (s > 0.0) {
      out.left = u / s;
    } else {
      out.left = ComplexVector::Zero(m.rows());
      out.left(0) = 1.0;
    }
    out.value = s;
  } else {
    ComplexVector w = m.adjoint() * v;
    const double s = w.norm();
    out.left = v;
    if (s > 0.0) {
      out.right = w / s;
    } else {
      out.right = ComplexVector::Zero(m.cols());
      out.right(0) = 1.0;
    }
    out.value = s;
  }
  return out;
}

ComplexMatrix partial_contract_A(const ComplexMatrix& G, const ComplexMatrix& A, Index n, Index m) {
  if (G.rows() != n * m || G.cols() != n * m) throw DimensionError("partial_contract_A: G is not (nm)x(nm)");
  if (A.rows() != n || A.cols() != n) throw DimensionError("partial_contract_A: A is not n x n");
  ComplexMatrix D = ComplexMatrix::Zero(m, m);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const Complex a = A(j, i);
      if (a == Complex(0.0)) continue;
      D.noalias() += a * G.block(i * m, j * m, m, m);
    }
  }
  return D;
}

ComplexMatrix partial_contract_B(const ComplexMatrix& G, const ComplexMatrix& B, Index n, Index m) {
  if (G.rows() != n * m || G.cols() != n * m) throw DimensionError("partial_contract_B: G is not (nm)x(nm)");
  if (B.rows() != m || B.cols() != m) throw DimensionError("partial_contract_B: B is not m x m");
  ComplexMatrix C(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      // sum_kl G_(i,k),(j,l) B_lk = tr(G_ij B)
      C(i, j) = (G.block(i * m, j * m, m, m).transpose().cwiseProduct(B)).sum();
    }
  }
  return C;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

void check_order(std::span<const Index> order, std::size_t legs) {
  if (order.size() != legs) throw DimensionError("register order length does not match the number of legs");
  std::vector<bool> seen(legs, false);
  for (Index p : order) {
    if (p < 0 || static_cast<std::size_t>(p) >= legs || seen[static_cast<std::size_t>(p)]) {
      throw DimensionError("register order is not a permutation");
    }
    seen[static_cast<std::size_t>(p)] = true;
  }
}

std::vector<Index> leg_map(std::span<const Index> dims, std::span<const Index> order) {
  const std::size_t r = dims.size();
  std::vector<Index> out_dims(r);
  for (std::size_t t = 0; t < r; ++t) out_dims[static_cast<std::size_t>(order[t])] = dims[t];
  std::vector<Index> out_stride(r, 1);
  for (std::size_t p = r; p-- > 1;) out_stride[p - 1] = out_stride[p] * out_dims[p];
  const Index total = std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<Index>());
  std::vector<Index> map(static_cast<std::size_t>(total));
  std::vector<Index> digit(r, 0);
  for (Index idx = 0; idx < total; ++idx) {
    Index target = 0;
    for (std::size_t t = 0; t < r; ++t) target += digit[t] * out_stride[static_cast<std::size_t>(order[t])];
    map[static_cast<std::size_t>(idx)] = target;
    for (std::size_t t = r; t-- > 0;) {
      if (++digit[t] < dims[t]) break;
      digit[t] = 0;
    }
  }
  return map;
}

Index product(std::span<const Index> dims) {
  Index p = 1;
  for (Index d : dims) {
    if (d < 1) throw DimensionError("register dimension must be positive");
    p *= d;
  }
  return p;
}

}  // namespace

ComplexMatrix permute_registers(const ComplexMatrix& m, std::span<const Index> row_dims,
                                std::span<const Index> col_dims, std::span<const Index> order) {
  if (row_dims.size() != col_dims.size()) throw DimensionError("row and column leg counts differ");
  check_order(order, row_dims.size());
  if (product(row_dims) != m.rows() || product(col_dims) != m.cols()) {
    throw DimensionError("register dimensions do not match the matrix shape");
  }
  const std::vector<Index> rmap = leg_map(row_dims, order);
  const std::vector<Index> cmap = leg_map(col_dims, order);
  ComplexMatrix out(m.rows(), m.cols());
  for (Index c = 0; c < m.cols(); ++c) {
    for (Index r = 0; r < m.rows(); ++r) out(rmap[static_cast<std::size_t>(r)], cmap[static_cast<std::size_t>(c)]) = m(r, c);
  }
  return out;
}

ComplexMatrix permute_registers(const ComplexMatrix& m, std::span<const Index> dims, std::span<const Index> order) {
  if (m.cols() == 1) {
    std::vector<Index> ones(dims.size(), 1);
    return permute_registers(m, dims, ones, order);
  }
  return permute_registers(m, dims, dims, order);
}

ComplexMatrix kron_permuted(std::span<const ComplexMatrix> factors, std::span<const Index> order) {
  if (factors.empty()) throw DimensionError("kron_permuted: no factors");
  check_order(order, factors.size());
  ComplexMatrix k = factors[0];
  std::vector<Index> rows{factors[0].rows()}, cols{factors[0].cols()};
  for (std::size_t t = 1; t < factors.size(); ++t) {
    k = kron(k, factors[t]);
    rows.push_back(factors[t].rows());
    cols.push_back(factors[t].cols());
  }
  return permute_registers(k, rows, cols, order);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const Eigh e = eigh_lower(m);
  const RealVector s = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * s.asDiagonal() * e.vectors.adjoint();
}

ComplexMatrix psd_inv_sqrt(const ComplexMatrix& m, double floor) {
  const Eigh e = eigh_lower(m);
  RealVector s(e.values.size());
  for (Index i = 0; i < s.size(); ++i) s(i) = 1.0 / std::sqrt(std::max(e.values(i), floor));
  return e.vectors * s.asDiagonal() * e.vectors.adjoint();
}

std::vector<ComplexMatrix> hermitian_basis(Index n) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      ComplexMatrix s = ComplexMatrix::Zero(n, n);
      s(i, j) = r;
      s(j, i) = r;
      basis.push_back(std::move(s));
      ComplexMatrix a = ComplexMatrix::Zero(n, n);
      a(i, j) = Complex(0.0, r);
      a(j, i) = Complex(0.0, -r);
      basis.push_back(std::move(a));
    }
  }
  return basis;
}

HermitianMatrix clip_contraction(const ComplexMatrix& m, double tol, const std::string& what) {
  const HermitianMatrix h(m);
  const Eigh e = eigh(h);
  const double top = e.values.cwiseAbs().maxCoeff();
  if (top > 1.0 + tol) throw ValidationError("contraction", what + " has operator norm " + std::to_string(top));
  if (top <= 1.0) return h;
  const RealVector v = e.values.cwiseMin(1.0).cwiseMax(-1.0);
  return HermitianMatrix::symmetrized(e.vectors * v.asDiagonal() * e.vectors.adjoint());
}

HermitianMatrix clip_psd(const ComplexMatrix& m, double tol, const std::string& what) {
  const HermitianMatrix h(m);
  const Eigh e = eigh(h);
  const double low = e.values(e.values.size() - 1);
  if (low < -tol) throw ValidationError("positivity", what + " has eigenvalue " + std::to_string(low));
  if (low >= 0.0) return h;
  const RealVector v = e.values.cwiseMax(0.0);
  return HermitianMatrix::symmetrized(e.vectors * v.asDiagonal() * e.vectors.adjoint());
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (0xD1B54A32D192ED03ULL * (index + 1));
  std::uint64_t words[4];
  for (auto& w : words) w = splitmix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(words[0]), static_cast<std::uint32_t>(words[0] >> 32),
                    static_cast<std::uint32_t>(words[1]), static_cast<std::uint32_t>(words[1] >> 32),
                    static_cast<std::uint32_t>(words[2]), static_cast<std::uint32_t>(words[2] >> 32),
                    static_cast<std::uint32_t>(words[3]), static_cast<std::uint32_t>(words[3] >> 32)};
  return Rng(seq);
}

ComplexMatrix random_ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  return g;
}

HermitianMatrix random_gue(Index n, Rng& rng) { return HermitianMatrix::symmetrized(random_ginibre(n, n, rng)); }

ComplexMatrix random_unitary(Index n, Rng& rng) {
  const ComplexMatrix g = random_ginibre(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

ComplexVector random_unit_vector(Index n, Rng& rng) {
  ComplexVector v = random_ginibre(n, 1, rng).col(0);
  return v / v.norm();
}

HermitianMatrix random_observable(Index n, Rng& rng) { return sign_hermitian(random_gue(n, rng)); }

ComplexMatrix random_contraction(Index rows, Index cols, Rng& rng) {
  const ComplexMatrix g = random_ginibre(rows, cols, rng);
  return g / op_norm(g);
}

HermitianMatrix random_density(Index n, Rng& rng) {
  const ComplexMatrix g = random_ginibre(n, n, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return HermitianMatrix::symmetrized(rho);
}

}  // namespace mat
}  // namespace qxor
