#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "qxor/lmi.hpp"
#include "qxor/osn.hpp"

namespace qxor::osn {

MatrixTuple::MatrixTuple(std::vector<ComplexMatrix> items) : items_(std::move(items)) {
  if (items_.empty()) throw DimensionError("MatrixTuple: length must be at least 1");
  for (const auto& x : items_) {
    if (x.rows() != items_.front().rows() || x.cols() != items_.front().cols()) {
      throw DimensionError("MatrixTuple: entries must share one shape");
    }
    mat::require_finite(x, "MatrixTuple entry");
  }
}

MatrixTuple MatrixTuple::zeros(Index d, Index rows, Index cols) {
  return MatrixTuple(std::vector<ComplexMatrix>(static_cast<std::size_t>(d), ComplexMatrix::Zero(rows, cols)));
}

MatrixTuple MatrixTuple::scaled(Complex t) const {
  std::vector<ComplexMatrix> out = items_;
  for (auto& x : out) x *= t;
  return MatrixTuple(std::move(out));
}

MatrixTuple MatrixTuple::operator+(const MatrixTuple& o) const {
  if (o.size() != size() || o.rows() != rows() || o.cols() != cols()) throw DimensionError("MatrixTuple: sum shapes");
  std::vector<ComplexMatrix> out = items_;
  for (Index k = 0; k < size(); ++k) out[static_cast<std::size_t>(k)] += o[k];
  return MatrixTuple(std::move(out));
}

MatrixTuple MatrixTuple::operator-(const MatrixTuple& o) const { return *this + o.scaled(-1.0); }

MatrixTuple MatrixTuple::mixed(const ComplexMatrix& a) const {
  if (a.cols() != size()) throw DimensionError("MatrixTuple::mixed: mixing matrix has wrong column count");
  std::vector<ComplexMatrix> out(static_cast<std::size_t>(a.rows()), ComplexMatrix::Zero(rows(), cols()));
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < size(); ++j) out[static_cast<std::size_t>(i)] += a(i, j) * items_[static_cast<std::size_t>(j)];
  }
  return MatrixTuple(std::move(out));
}

MatrixTuple MatrixTuple::concat(const MatrixTuple& a, const MatrixTuple& b) {
  std::vector<ComplexMatrix> out = a.items_;
  out.insert(out.end(), b.items_.begin(), b.items_.end());
  return MatrixTuple(std::move(out));
}

ComplexMatrix MatrixTuple::hcat() const {
  ComplexMatrix out(rows(), cols() * size());
  for (Index k = 0; k < size(); ++k) out.middleCols(k * cols(), cols()) = (*this)[k];
  return out;
}

ComplexMatrix MatrixTuple::vcat() const {
  ComplexMatrix out(rows() * size(), cols());
  for (Index k = 0; k < size(); ++k) out.middleRows(k * rows(), rows()) = (*this)[k];
  return out;
}

double MatrixTuple::max_abs() const {
  double m = 0.0;
  for (const auto& x : items_) m = std::max(m, mat::max_abs(x));
  return m;
}

namespace {

ComplexMatrix row_gram(const std::vector<ComplexMatrix>& t) {
  ComplexMatrix g = ComplexMatrix::Zero(t.front().rows(), t.front().rows());
  for (const auto& x : t) g.noalias() += x * x.adjoint();
  return g;
}

ComplexMatrix col_gram(const std::vector<ComplexMatrix>& t) {
  ComplexMatrix g = ComplexMatrix::Zero(t.front().cols(), t.front().cols());
  for (const auto& x : t) g.noalias() += x.adjoint() * x;
  return g;
}

double top_eig(const ComplexMatrix& h) { return std::max(0.0, mat::eigh_lower(h).values(0)); }

}  // namespace

double row_norm(const MatrixTuple& t) { return std::sqrt(top_eig(row_gram(t.items()))); }
double col_norm(const MatrixTuple& t) { return std::sqrt(top_eig(col_gram(t.items()))); }
double rc_norm(const MatrixTuple& t) { return std::max(row_norm(t), col_norm(t)); }

// ---------------------------------------------------------------------------
// Splitting solver: smoothed lambda_max with L-BFGS over the row part T.

namespace {

enum class Combine { Quadratic, Linear };

struct Smoothed {
  double value;
  ComplexMatrix grad;  // derivative of the smoothed lambda_max w.r.t. the matrix
};

// mu log tr exp(X / mu), computed stably.
Smoothed smooth_max(const ComplexMatrix& x, double mu) {
  const mat::Eigh e = mat::eigh_lower(x);
  const double top = e.values(0);
  RealVector w(e.values.size());
  for (Index i = 0; i < w.size(); ++i) w(i) = std::exp((e.values(i) - top) / mu);
  const double z = w.sum();
  w /= z;
  return {top + mu * std::log(z), e.vectors * w.asDiagonal() * e.vectors.adjoint()};
}

class SplitProblem {
 public:
  SplitProblem(const MatrixTuple& t, Combine mode) : t_(t), mode_(mode), d_(t.size()), r_(t.rows()), c_(t.cols()) {}

  Index size() const { return 2 * d_ * r_ * c_; }

  std::vector<ComplexMatrix> unpack(const RealVector& z) const {
    std::vector<ComplexMatrix> out(static_cast<std::size_t>(d_), ComplexMatrix(r_, c_));
    Index p = 0;
    for (auto& m : out) {
      for (Index j = 0; j < c_; ++j) {
        for (Index i = 0; i < r_; ++i, p += 2) m(i, j) = Complex(z(p), z(p + 1));
      }
    }
    return out;
  }

  RealVector pack(const std::vector<ComplexMatrix>& ms) const {
    RealVector z(size());
    Index p = 0;
    for (const auto& m : ms) {
      for (Index j = 0; j < c_; ++j) {
        for (Index i = 0; i < r_; ++i, p += 2) {
          z(p) = m(i, j).real();
          z(p + 1) = m(i, j).imag();
        }
      }
    }
    return z;
  }

  std::vector<ComplexMatrix> complement(const std::vector<ComplexMatrix>& T) const {
    std::vector<ComplexMatrix> s(T.size());
    for (std::size_t k = 0; k < T.size(); ++k) s[k] = t_[static_cast<Index>(k)] - T[k];
    return s;
  }

  double combine(double row2, double col2) const {
    return mode_ == Combine::Quadratic ? row2 + col2 : std::sqrt(std::max(row2, 0.0)) + std::sqrt(std::max(col2, 0.0));
  }

  // Exact objective on squared norms.
  double exact(const std::vector<ComplexMatrix>& T, double* row2 = nullptr, double* col2 = nullptr) const {
    const double a = top_eig(row_gram(T));
    const double b = top_eig(col_gram(complement(T)));
    if (row2) *row2 = a;
    if (col2) *col2 = b;
    return combine(a, b);
  }

  double smoothed(const RealVector& z, double mu, RealVector* grad, ComplexMatrix* P = nullptr,
                  ComplexMatrix* Q = nullptr) const {
    const auto T = unpack(z);
    const auto S = complement(T);
    const Smoothed fr = smooth_max(row_gram(T), mu);
    const Smoothed fc = smooth_max(col_gram(S), mu);
    double value, wr, wc;
    if (mode_ == Combine::Quadratic) {
      value = fr.value + fc.value;
      wr = wc = 1.0;
    } else {
      const double a = std::sqrt(std::max(fr.value, 1e-300));
      const double b = std::sqrt(std::max(fc.value, 1e-300));
      value = a + b;
      wr = 0.5 / a;
      wc = 0.5 / b;
    }
    if (grad) {
      std::vector<ComplexMatrix> g(T.size());
      for (std::size_t k = 0; k < T.size(); ++k) g[k] = 2.0 * wr * fr.grad * T[k] - 2.0 * wc * S[k] * fc.grad;
      *grad = pack(g);
    }
    if (P) *P = fr.grad;
    if (Q) *Q = fc.grad;
    return value;
  }

  // min over T of sum tr(P T T^dag) + tr(Q S^dag S): certified lower bound
  // for the quadratic combination since lambda_max dominates every state.
  double dual_bound(const ComplexMatrix& P, const ComplexMatrix& Q, ComplexMatrix* gP = nullptr,
                    ComplexMatrix* gQ = nullptr) const {
    const Index rc = r_ * c_;
    ComplexMatrix op = mat::kron(ComplexMatrix::Identity(c_, c_), P) +
                       mat::kron(ComplexMatrix(Q.transpose()), ComplexMatrix::Identity(r_, r_));
    op = (op + op.adjoint()) * 0.5;
    const mat::Eigh e = mat::eigh_lower(op);
    const double cut = 1e-13 * std::max(1.0, e.values(0));
    double total = 0.0;
    if (gP) *gP = ComplexMatrix::Zero(r_, r_);
    if (gQ) *gQ = ComplexMatrix::Zero(c_, c_);
    for (Index k = 0; k < d_; ++k) {
      const ComplexMatrix rhs = t_[k] * Q;
      const Eigen::Map<const ComplexVector> b(rhs.data(), rc);
      ComplexVector coeffs = e.vectors.adjoint() * b;
      for (Index i = 0; i < rc; ++i) coeffs(i) = e.values(i) > cut ? coeffs(i) / e.values(i) : Complex(0.0);
      const ComplexVector x = e.vectors * coeffs;
      const ComplexMatrix T = Eigen::Map<const ComplexMatrix>(x.data(), r_, c_);
      const ComplexMatrix S = t_[k] - T;
      total += (P * T * T.adjoint()).trace().real() + (Q * S.adjoint() * S).trace().real();
      if (gP) *gP += T * T.adjoint();
      if (gQ) *gQ += S.adjoint() * S;
    }
    return total;
  }

  // The dual is concave in the states (a parallel sum), with gradients
  // sum T T^dag and sum S^dag S at the inner minimizer. Exponentiated-gradient
  // ascent from the softmax states; every returned value is an exact dual value.
  double dual_ascent(const ComplexMatrix& P0, const ComplexMatrix& Q0, int iterations) const {
    auto log_state = [](const ComplexMatrix& x) {
      const mat::Eigh e = mat::eigh_lower(x);
      RealVector l(e.values.size());
      for (Index i = 0; i < l.size(); ++i) l(i) = std::log(std::max(e.values(i), 1e-200));
      return ComplexMatrix(e.vectors * l.cast<Complex>().asDiagonal() * e.vectors.adjoint());
    };
    auto exp_state = [](const ComplexMatrix& h) {
      const mat::Eigh e = mat::eigh_lower(h);
      RealVector w(e.values.size());
      for (Index i = 0; i < w.size(); ++i) w(i) = std::exp(e.values(i) - e.values(0));
      w /= w.sum();
      return ComplexMatrix(e.vectors * w.cast<Complex>().asDiagonal() * e.vectors.adjoint());
    };
    ComplexMatrix hP = log_state(P0), hQ = log_state(Q0);
    ComplexMatrix P = exp_state(hP), Q = exp_state(hQ), gP, gQ;
    double best = dual_bound(P, Q, &gP, &gQ);
    double eta = 1.0;
    for (int it = 0; it < iterations && eta > 1e-10; ++it) {
      const ComplexMatrix nhP = hP + eta * gP, nhQ = hQ + eta * gQ;
      const ComplexMatrix nP = exp_state(nhP), nQ = exp_state(nhQ);
      ComplexMatrix ngP, ngQ;
      const double v = dual_bound(nP, nQ, &ngP, &ngQ);
      if (v > best) {
        best = v;
        hP = nhP;
        hQ = nhQ;
        gP = std::move(ngP);
        gQ = std::move(ngQ);
        eta *= 1.5;
      } else {
        eta *= 0.5;
      }
    }
    return best;
  }

 private:
  const MatrixTuple& t_;
  Combine mode_;
  Index d_, r_, c_;
};

// Plain L-BFGS with Armijo backtracking.
RealVector lbfgs(const SplitProblem& prob, RealVector z, double mu, int iterations) {
  const int memory = 8;
  std::deque<RealVector> ss, ys;
  std::deque<double> rho;
  RealVector g;
  double f = prob.smoothed(z, mu, &g);
  for (int it = 0; it < iterations; ++it) {
    RealVector q = g;
    std::vector<double> alpha(ss.size());
    for (std::size_t i = ss.size(); i-- > 0;) {
      alpha[i] = rho[i] * ss[i].dot(q);
      q -= alpha[i] * ys[i];
    }
    if (!ss.empty()) q *= ss.back().dot(ys.back()) / ys.back().squaredNorm();
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const double beta = rho[i] * ys[i].dot(q);
      q += (alpha[i] - beta) * ss[i];
    }
    RealVector dir = -q;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      dir = -g;
      slope = -g.squaredNorm();
      ss.clear();
      ys.clear();
      rho.clear();
    }
    if (-slope < 1e-30) break;
    double step = 1.0;
    RealVector zn, gn;
    double fn = f;
    bool ok = false;
    for (int ls = 0; ls < 40; ++ls) {
      zn = z + step * dir;
      fn = prob.smoothed(zn, mu, &gn);
      if (fn <= f + 1e-4 * step * slope) {
        ok = true;
        break;
      }
      step *= 0.5;
    }
    if (!ok) break;
    const RealVector s = zn - z, y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-16 * s.norm() * y.norm()) {
      ss.push_back(s);
      ys.push_back(y);
      rho.push_back(1.0 / sy);
      if (static_cast<int>(ss.size()) > memory) {
        ss.pop_front();
        ys.pop_front();
        rho.pop_front();
      }
    }
    const double improvement = f - fn;
    z = zn;
    g = gn;
    f = fn;
    if (improvement <= 1e-15 * std::max(1.0, std::abs(f))) break;
  }
  return z;
}

SplitResult split_norm(const MatrixTuple& t, std::span<const MatrixTuple> seeds, const SplitOptions& options,
                       Combine mode) {
  const double scale = rc_norm(t);
  SplitResult res;
  if (scale == 0.0) {
    res.row_part = MatrixTuple::zeros(t.size(), t.rows(), t.cols());
    res.col_part = res.row_part;
    return res;
  }
  const MatrixTuple tn = t.scaled(1.0 / scale);
  SplitProblem prob(tn, mode);

  std::vector<std::vector<ComplexMatrix>> candidates;
  candidates.push_back(tn.items());
  candidates.push_back(MatrixTuple::zeros(t.size(), t.rows(), t.cols()).items());
  {
    auto half = tn.items();
    for (auto& x : half) x *= 0.5;
    candidates.push_back(std::move(half));
  }
  for (const auto& s : seeds) {
    if (s.size() != t.size() || s.rows() != t.rows() || s.cols() != t.cols()) {
      throw DimensionError("split seed has the wrong shape");
    }
    candidates.push_back(s.scaled(1.0 / scale).items());
  }
  std::vector<ComplexMatrix> best = candidates.front();
  double best_value = prob.exact(best);
  for (const auto& c : candidates) {
    const double v = prob.exact(c);
    if (v < best_value) {
      best_value = v;
      best = c;
    }
  }

  RealVector z = prob.pack(best);
  ComplexMatrix P, Q;
  for (double mu = 0.05; mu >= options.final_temperature * 0.999; mu *= 0.2) {
    z = lbfgs(prob, z, mu, options.iterations_per_stage);
    const auto T = prob.unpack(z);
    const double v = prob.exact(T);
    if (v < best_value) {
      best_value = v;
      best = T;
    }
  }
  // Dual certificate from the softmax states at the best point.
  double lower_q = 0.0;
  const RealVector zb = prob.pack(best);
  const SplitProblem quad(tn, Combine::Quadratic);
  ComplexMatrix bestP, bestQ;
  for (double mu : {1e-4, 1e-6, 1e-8}) {
    prob.smoothed(zb, mu, nullptr, &P, &Q);
    const double v = quad.dual_bound(P, Q);
    if (v > lower_q) {
      lower_q = v;
      bestP = P;
      bestQ = Q;
    }
  }
  if (best_value - lower_q > 0.5 * options.rel_accuracy * best_value && bestP.size() > 0) {
    lower_q = std::max(lower_q, quad.dual_ascent(bestP, bestQ, 3000));
  }
  double row2 = 0.0, col2 = 0.0;
  prob.exact(best, &row2, &col2);

  res.row_part = MatrixTuple(best).scaled(scale);
  res.col_part = t - res.row_part;
  if (mode == Combine::Quadratic) {
    res.value = std::sqrt(best_value) * scale;
    res.lower = std::sqrt(std::max(0.0, std::min(lower_q, best_value))) * scale;
    res.degraded = best_value - lower_q > 2.0 * options.rel_accuracy * best_value;
  } else {
    res.value = best_value * scale;
    res.lower = std::min(std::sqrt(std::max(0.0, lower_q)), best_value) * scale;
  }
  return res;
}

}  // namespace

SplitResult rplus2c_norm(const MatrixTuple& t, std::span<const MatrixTuple> seeds, const SplitOptions& options) {
  return split_norm(t, seeds, options, Combine::Quadratic);
}

SplitResult rplusc_norm(const MatrixTuple& t, std::span<const MatrixTuple> seeds, const SplitOptions& options) {
  return split_norm(t, seeds, options, Combine::Linear);
}

// ---------------------------------------------------------------------------
// Trace-class tuple norms by SDP.

namespace {

enum class Side { Row, Col };

// Chooses between I (x) P (row) and P^T (x) I (column) for a basis element.
ComplexMatrix lift(const ComplexMatrix& b, Index n, Side side) {
  return side == Side::Row ? mat::kron(ComplexMatrix::Identity(n, n), b)
                           : mat::kron(ComplexMatrix(b.transpose()), ComplexMatrix::Identity(n, n));
}

std::vector<lmi::Entry> dense_entries(const ComplexMatrix& m, Index offset = 0) {
  std::vector<lmi::Entry> out;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) != Complex(0.0)) out.push_back({i + offset, j + offset, m(i, j)});
    }
  }
  return out;
}

// Columns conj(vec(y_i)), column-major vec.
ComplexMatrix pairing_factor(const MatrixTuple& t) {
  const Index n = t.rows();
  ComplexMatrix w(n * n, t.size());
  for (Index i = 0; i < t.size(); ++i) {
    const ComplexMatrix c = t[i].conjugate();
    w.col(i) = Eigen::Map<const ComplexVector>(c.data(), n * n);
  }
  return w;
}

lmi::Options sdp_options() {
  lmi::Options o;
  o.rel_gap = 1e-10;
  o.abs_gap = 1e-14;
  return o;
}

double s1_side_norm(const MatrixTuple& t, Side side) {
  if (t.rows() != t.cols()) throw DimensionError("trace-class tuple entries must be square");
  const Index n = t.rows();
  const ComplexMatrix w = pairing_factor(t);
  const ComplexMatrix q = w * w.adjoint();
  const double top = top_eig(q);
  if (top == 0.0) return 0.0;
  const auto basis = mat::hermitian_basis(n);
  lmi::Problem p;
  p.cost = RealVector::Zero(n * n);
  lmi::Block blk;
  blk.constant = -q;
  for (Index l = 0; l < n * n; ++l) {
    p.cost(l) = basis[static_cast<std::size_t>(l)].trace().real();
    blk.coeffs.push_back(dense_entries(lift(basis[static_cast<std::size_t>(l)], n, side)));
  }
  p.blocks.push_back(std::move(blk));
  RealVector z0 = RealVector::Zero(n * n);
  for (Index i = 0; i < n; ++i) z0(i) = top * 1.5 + 1e-3;
  const lmi::Result r = lmi::minimize(p, z0, sdp_options());
  return std::sqrt(std::max(0.0, r.value));
}

}  // namespace

double s1_row_norm(const MatrixTuple& t) { return s1_side_norm(t, Side::Row); }
double s1_col_norm(const MatrixTuple& t) { return s1_side_norm(t, Side::Col); }
double s1_rc_norm(const MatrixTuple& t) { return std::max(s1_row_norm(t), s1_col_norm(t)); }

SplitResult s1_rplus2c_norm(const MatrixTuple& t) {
  if (t.rows() != t.cols()) throw DimensionError("trace-class tuple entries must be square");
  const Index n = t.rows(), d = t.size(), nn = n * n;
  SplitResult res;
  const double scale = t.max_abs();
  if (scale == 0.0) {
    res.row_part = MatrixTuple::zeros(d, n, n);
    res.col_part = res.row_part;
    return res;
  }
  const MatrixTuple tn = t.scaled(1.0 / scale);
  const auto basis = mat::hermitian_basis(n);
  // Variables: P1 (nn), P2 (nn), then Re/Im of T_i(r, c).
  const Index nv = 2 * nn + 2 * d * nn;
  lmi::Problem p;
  p.cost = RealVector::Zero(nv);
  for (Index l = 0; l < nn; ++l) {
    p.cost(l) = basis[static_cast<std::size_t>(l)].trace().real();
    p.cost(nn + l) = p.cost(l);
  }
  const ComplexMatrix wy = pairing_factor(tn);
  for (int b = 0; b < 2; ++b) {
    lmi::Block blk;
    blk.constant = ComplexMatrix::Zero(nn + d, nn + d);
    blk.constant.bottomRightCorner(d, d) = ComplexMatrix::Identity(d, d);
    if (b == 1) {
      blk.constant.topRightCorner(nn, d) = wy;
      blk.constant.bottomLeftCorner(d, nn) = wy.adjoint();
    }
    blk.coeffs.resize(static_cast<std::size_t>(nv));
    const Side side = b == 0 ? Side::Row : Side::Col;
    for (Index l = 0; l < nn; ++l) {
      blk.coeffs[static_cast<std::size_t>(b * nn + l)] = dense_entries(lift(basis[static_cast<std::size_t>(l)], n, side));
    }
    const double sgn = b == 0 ? 1.0 : -1.0;
    for (Index i = 0; i < d; ++i) {
      for (Index c = 0; c < n; ++c) {
        for (Index r = 0; r < n; ++r) {
          const Index row = r + n * c;
          const Index var = 2 * nn + 2 * (i * nn + row);
          // W entry is conj(T_i(r, c)) = x - i y.
          lmi::Problem::add_hermitian(blk.coeffs[static_cast<std::size_t>(var)], row, nn + i, Complex(sgn, 0.0));
          lmi::Problem::add_hermitian(blk.coeffs[static_cast<std::size_t>(var + 1)], row, nn + i, Complex(0.0, -sgn));
        }
      }
    }
    p.blocks.push_back(std::move(blk));
  }
  RealVector z0 = RealVector::Zero(nv);
  const double top = top_eig((0.5 * wy) * (0.5 * wy).adjoint());
  for (Index i = 0; i < n; ++i) {
    z0(i) = top * 1.5 + 1e-3;
    z0(nn + i) = top * 1.5 + 1e-3;
  }
  for (Index i = 0; i < d; ++i) {
    for (Index c = 0; c < n; ++c) {
      for (Index r = 0; r < n; ++r) {
        const Index var = 2 * nn + 2 * (i * nn + r + n * c);
        z0(var) = 0.5 * tn[i](r, c).real();
        z0(var + 1) = 0.5 * tn[i](r, c).imag();
      }
    }
  }
  const lmi::Result sol = lmi::minimize(p, z0, sdp_options());
  std::vector<ComplexMatrix> T(static_cast<std::size_t>(d), ComplexMatrix(n, n));
  for (Index i = 0; i < d; ++i) {
    for (Index c = 0; c < n; ++c) {
      for (Index r = 0; r < n; ++r) {
        const Index var = 2 * nn + 2 * (i * nn + r + n * c);
        T[static_cast<std::size_t>(i)](r, c) = Complex(sol.z(var), sol.z(var + 1));
      }
    }
  }
  // Pure splittings are feasible too.
  const double row2 = std::pow(s1_row_norm(tn), 2), col2 = std::pow(s1_col_norm(tn), 2);
  double value = sol.value;
  res.row_part = MatrixTuple(T).scaled(scale);
  if (row2 < value) {
    value = row2;
    res.row_part = t;
  }
  if (col2 < value) {
    value = col2;
    res.row_part = MatrixTuple::zeros(d, n, n);
  }
  res.col_part = t - res.row_part;
  res.value = std::sqrt(std::max(0.0, value)) * scale;
  res.lower = std::sqrt(std::max(0.0, std::min(value, sol.lower))) * scale;
  res.degraded = !sol.converged;
  return res;
}

// ---------------------------------------------------------------------------

OrderingResult ordering_check(const MatrixTuple& xs, const MatrixTuple& ys) {
  if (xs.rows() != ys.rows() || xs.cols() != ys.cols()) throw DimensionError("ordering_check: entry shapes differ");
  const Index N = xs.rows() * xs.cols();
  ComplexMatrix X(N, xs.size()), Y(N, ys.size());
  for (Index i = 0; i < xs.size(); ++i) X.col(i) = Eigen::Map<const ComplexVector>(xs[i].data(), N);
  for (Index j = 0; j < ys.size(); ++j) Y.col(j) = Eigen::Map<const ComplexVector>(ys[j].data(), N);
  Eigen::JacobiSVD<ComplexMatrix> svd(Y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  const double cut = s.size() > 0 ? kTol.rank * s(0) : 0.0;
  ComplexMatrix sinv = ComplexMatrix::Zero(s.size(), s.size());
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut && s(i) > 0.0) sinv(i, i) = 1.0 / s(i);
  }
  const ComplexMatrix at = svd.matrixV() * sinv * svd.matrixU().adjoint() * X;  // a^T
  OrderingResult out;
  out.residual = mat::max_abs(Y * at - X) / std::max(1.0, mat::max_abs(X));
  const ComplexMatrix a = at.transpose();
  out.witness_norm = mat::op_norm(a);
  out.dominated = out.residual <= 1e-9 && out.witness_norm <= 1.0 + 1e-9;
  if (out.dominated) out.witness = a;
  return out;
}

}  // namespace qxor::osn
