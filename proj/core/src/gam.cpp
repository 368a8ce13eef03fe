#include "qxor/gam.hpp"

#include <algorithm>
#include <cmath>

#include "qxor/game.hpp"

namespace qxor::gam {

namespace {

constexpr std::uint64_t kGammaSalt = 0x6A33A;

std::vector<osn::MatrixTuple> seeds_of(const osn::SplitResult& r) { return {r.row_part}; }

}  // namespace

double weight_w(const osn::MatrixTuple& t) {
  const double v = osn::rplus2c_norm(t).value;
  return v * v;
}

SandwichCheck weight_sandwich_check(const osn::MatrixTuple& t) {
  // Each solver is seeded with the other's splitting, which makes both
  // comparisons hold up to the accuracy of one solver.
  osn::SplitResult quad = osn::rplus2c_norm(t);
  auto seeds = seeds_of(quad);
  const osn::SplitResult lin = osn::rplusc_norm(t, seeds);
  seeds = seeds_of(lin);
  const osn::SplitResult quad2 = osn::rplus2c_norm(t, seeds);
  if (quad2.value < quad.value) quad = quad2;
  SandwichCheck out;
  out.w = quad.value * quad.value;
  out.lhs = lin.value * lin.value;
  out.rhs = out.lhs;
  out.ok = out.lhs / 2.0 - 1e-6 <= out.w && out.w <= out.rhs + 1e-6;
  return out;
}

// ---------------------------------------------------------------------------

TensorElement::TensorElement(osn::ConcreteSpace X, osn::ConcreteSpace Y, ComplexMatrix coeff)
    : x_(std::move(X)), y_(std::move(Y)), coeff_(std::move(coeff)) {
  if (coeff_.rows() != x_.dim() || coeff_.cols() != y_.dim()) throw DimensionError("TensorElement: coefficient shape");
  mat::require_finite(coeff_, "tensor coefficients");
  // Operator-Schmidt decomposition.
  Eigen::JacobiSVD<ComplexMatrix> svd(coeff_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  Index r = 0;
  while (r < s.size() && s(r) > kTol.rank * std::max(s(0), 1e-300) && s(r) > 0.0) ++r;
  r = std::max<Index>(r, 1);
  xc_.resize(r, x_.dim());
  yc_.resize(r, y_.dim());
  for (Index i = 0; i < r; ++i) {
    const double root = std::sqrt(s(i));
    xc_.row(i) = root * svd.matrixU().col(i).transpose();
    yc_.row(i) = root * svd.matrixV().col(i).adjoint();
  }
}

TensorElement TensorElement::from_map(const osn::LinearMapRep& u) {
  if (u.domain().blocks().size() != 1) throw DimensionError("from_map: the domain must be a full matrix algebra");
  const Index n = u.domain().blocks().front();
  return TensorElement(osn::ConcreteSpace::dual_matrix_algebra(n), u.codomain(), u.coefficients().transpose());
}

void TensorElement::set_decomposition(ComplexMatrix xc, ComplexMatrix yc) {
  if (xc.rows() != yc.rows() || xc.cols() != x_.dim() || yc.cols() != y_.dim()) {
    throw DimensionError("set_decomposition: shapes");
  }
  const double err = mat::max_abs(xc.transpose() * yc - coeff_);
  if (err > 1e-10 * std::max(1.0, mat::max_abs(coeff_))) {
    throw ValidationError("decomposition", "does not reconstruct z, error " + std::to_string(err));
  }
  xc_ = std::move(xc);
  yc_ = std::move(yc);
}

osn::MatrixTuple TensorElement::x_tuple() const {
  std::vector<ComplexMatrix> out;
  for (Index i = 0; i < xc_.rows(); ++i) out.push_back(x_.element(xc_.row(i).transpose()));
  return osn::MatrixTuple(std::move(out));
}

osn::MatrixTuple TensorElement::y_tuple() const {
  std::vector<ComplexMatrix> out;
  for (Index i = 0; i < yc_.rows(); ++i) out.push_back(y_.element(yc_.row(i).transpose()));
  return osn::MatrixTuple(std::move(out));
}

TensorElement TensorElement::scaled(double t) const {
  TensorElement out = *this;
  out.coeff_ *= t;
  out.xc_ *= t;
  return out;
}

osn::LinearMapRep TensorElement::map() const {
  if (!x_.is_dual()) throw DimensionError("T_z needs X to be a trace class");
  return osn::LinearMapRep(osn::ConcreteSpace::matrix_algebra(x_.ambient()), y_, coeff_.transpose());
}

double x_tuple_norm(const TensorElement& z) {
  const auto t = z.x_tuple();
  return z.X().is_dual() ? osn::s1_rc_norm(t) : osn::rc_norm(t);
}

double y_tuple_norm(const TensorElement& z) {
  const auto t = z.y_tuple();
  return z.Y().is_dual() ? osn::s1_rplus2c_norm(t).value : osn::rplus2c_norm(t).value;
}

GammaResult gamma_rc_upper(const TensorElement& z, const SolverBudget& budget, const GammaOptions& options) {
  budget.validate();
  GammaResult out{0.0, z, 0, 0, 0.0};
  if (mat::max_abs(z.coefficients()) == 0.0) return out;

  auto value_of = [](const TensorElement& e) { return x_tuple_norm(e) * y_tuple_norm(e); };
  TensorElement best = z;
  double best_value = value_of(best);
  out.start_value = best_value;
  const Index r = z.rank();
  mat::Rng rng = mat::make_stream(budget.seed ^ kGammaSalt, 0);
  double step = options.initial_step;
  std::normal_distribution<double> normal;
  for (int it = 0; it < options.iterations; ++it) {
    ComplexMatrix R;
    if (it % 3 == 2) {
      // Diagonal rebalancing.
      R = ComplexMatrix::Identity(r, r);
      for (Index i = 0; i < r; ++i) R(i, i) = std::exp(step * normal(rng));
    } else {
      ComplexMatrix g = mat::random_ginibre(r, r, rng);
      R = ComplexMatrix::Identity(r, r) + step * g / std::max(1e-300, mat::op_norm(g));
    }
    Eigen::FullPivLU<ComplexMatrix> lu(R);
    if (!lu.isInvertible() || 1.0 / (mat::op_norm(R) * mat::op_norm(lu.inverse())) < 1e-3) {
      step *= 0.7;
      continue;
    }
    const ComplexMatrix xc = R * best.x_coords();
    const ComplexMatrix yc = lu.inverse().transpose() * best.y_coords();
    TensorElement cand = best;
    cand.set_decomposition(xc, yc);
    ++out.proposals;
    const double v = value_of(cand);
    if (v < best_value) {
      best_value = v;
      best = std::move(cand);
      ++out.accepted;
      step = std::min(step * 1.5, 2.0);
    } else {
      step *= 0.7;
    }
    if (step < 1e-6) step = options.initial_step;
  }
  // Balance the two tuple norms.
  const double nx = x_tuple_norm(best), ny = y_tuple_norm(best);
  if (nx > 0.0 && ny > 0.0) {
    const double s = std::sqrt(ny / nx);
    best.set_decomposition(best.x_coords() * s, best.y_coords() / s);
  }
  out.gamma_upper = best_value;
  out.decomposition = std::move(best);
  return out;
}

BoundInterval gamma_to_Gamma(const TensorElement& z, double gamma_upper, const SolverBudget& budget,
                             std::span<const Index> levels) {
  BoundInterval out;
  out.upper = std::sqrt(2.0) * gamma_upper;
  out.upper_method = "sqrt2*gamma";
  out.lower_method = "cb-lower";
  if (mat::max_abs(z.coefficients()) == 0.0) {
    out.lower = 0.0;
    return out;
  }
  out.lower = osn::cb_norm_bounds(z.map(), budget, levels).bounds.lower;
  if (out.lower > out.upper + 1e-6) {
    throw ConsistencyError("Gamma interval inverted: cb lower " + std::to_string(out.lower) + " exceeds " +
                           std::to_string(out.upper));
  }
  return out;
}

MabCertificate mab_certify(const ComplexMatrix& a, const ComplexMatrix& b, const SolverBudget& budget,
                           std::span<const Index> levels) {
  if (a.norm() > 1.0 + 1e-12 || b.norm() > 1.0 + 1e-12) throw ValidationError("schatten2", "a and b must lie in the S_2 unit ball");
  MabCertificate out;
  if (a.norm() == 0.0 || b.norm() == 0.0) {
    out.ok = true;
    return out;
  }
  out.cb_lower = osn::cb_norm_bounds(mab_map(a, b), budget, levels).bounds.lower;
  out.ok = out.cb_lower <= 4.0 * std::sqrt(2.0) + 1e-4;
  return out;
}

ChainCheck chain_check(const osn::LinearMapRep& u, double known_pi1cb, const SolverBudget& budget,
                       std::span<const Index> levels) {
  ChainCheck out;
  out.bound = 8.0 * std::sqrt(2.0) * known_pi1cb;
  if (u.coefficients().norm() != 0.0) out.cb_lower = osn::cb_norm_bounds(u, budget, levels).bounds.lower;
  out.ok = out.cb_lower <= out.bound + 1e-4;
  return out;
}

}  // namespace qxor::gam
