#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "qxor/bias.hpp"
#include "qxor/gam.hpp"
#include "qxor/game.hpp"
#include "qxor/io.hpp"
#include "qxor/osn.hpp"

namespace qxor::acceptance {

namespace {

// Collects failures; the first few are kept for the detail line.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) first_ += (first_.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream s;
    s << checks_ << " checks";
    if (!summary.empty()) s << ", " << summary;
    if (failures_ > 0) s << ", " << failures_ << " failed: " << first_;
    return {failures_ == 0 && checks_ > 0, s.str()};
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::string first_;
};

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

SolverBudget budget_of(const Settings& s, int restarts, int max_sweeps = 500) {
  SolverBudget b;
  b.seed = s.seed;
  b.restarts = restarts;
  b.max_sweeps = max_sweeps;
  return b;
}

RealMatrix random_l1_matrix(Index n, Index m, double mass, mat::Rng& rng) {
  std::normal_distribution<double> normal;
  RealMatrix M(n, m);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < m; ++k) M(i, k) = normal(rng);
  }
  return M * (mass / M.cwiseAbs().sum());
}

std::vector<Index> iota_levels(Index top) {
  std::vector<Index> out;
  for (Index l = 1; l <= top; ++l) out.push_back(l);
  return out;
}

// 1: closed forms.
Outcome exact_values(const Settings& s) {
  Tally t;
  for (Index n : {2, 3}) {
    const double owq = bias::beta_owq(swap_game(n)).value;
    t.check(std::abs(owq - 1.0) <= 1e-10 * s.tol_scale, "beta_owq(swap " + std::to_string(n) + ") = " + num(owq));
    const double p = bias::pi1o_exact(swap_operator(n));
    t.check(std::abs(p - double(n * n)) <= 1e-8 * s.tol_scale, "pi1o(SWAP " + std::to_string(n) + ") = " + num(p));
  }
  mat::Rng rng = mat::make_stream(s.seed, 1);
  for (int i = 0; i < 10; ++i) {
    const RealMatrix M = random_l1_matrix(2 + i % 2, 2 + (i / 2) % 2, 0.5 + 0.05 * i, rng);
    const double p = bias::pi1o_exact(diagonal_game(M));
    t.check(std::abs(p - M.cwiseAbs().sum()) <= 1e-10 * s.tol_scale, "pi1o(diagonal) = " + num(p));
  }
  return t.outcome("");
}

// 2: transpose maps.
Outcome transpose_norms(const Settings& s) {
  Tally t;
  const SolverBudget b = budget_of(s, 4);
  std::string summary;
  for (Index n : {2, 3}) {
    const BipartiteOperator tau = swap_operator(n);
    const auto r = bias::pi1cb_bounds(tau, bias::default_pi1cb_schedule(n), b);
    const double nn = double(n * n);
    t.check(r.bounds.lower >= double(n) - 1e-6 * s.tol_scale, "pi1cb lower (n=" + std::to_string(n) + ") " + num(r.bounds.lower));
    t.check(r.bounds.upper <= nn * (1.0 + 1e-12), "pi1cb upper (n=" + std::to_string(n) + ") " + num(r.bounds.upper));
    summary += "tau_" + std::to_string(n) + " in [" + num(r.bounds.lower) + ", " + num(r.bounds.upper) + "] ";
  }
  const osn::LinearMapRep u = associated_map(swap_operator(2));
  const std::vector<Index> levels{1, 2};
  const double cb = osn::cb_norm_bounds(u, b, levels).bounds.lower;
  t.check(cb >= 2.0 - 1e-6 * s.tol_scale, "cb lower of tau_2 at level 2 = " + num(cb));
  // The transpose on M_2 with operator-norm codomain: level 1 gives 1, level 2 gives 2.
  ComplexMatrix coeff = ComplexMatrix::Zero(4, 4);
  ComplexMatrix w = ComplexMatrix::Zero(4, 4);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      coeff(j * 2 + i, i * 2 + j) = 1.0;
      w(i * 2 + j, j * 2 + i) = 1.0;
    }
  }
  const osn::LinearMapRep transpose(osn::ConcreteSpace::matrix_algebra(2), osn::ConcreteSpace::matrix_algebra(2), coeff);
  const double level2 = osn::cb_norm_bounds(transpose, b, levels).bounds.lower;
  t.check(level2 >= 2.0 - 1e-6 * s.tol_scale, "transpose on M_2 at level 2 = " + num(level2));
  const double ratio = osn::amplified_ratio(transpose, 2, w);
  t.check(ratio >= 2.0 - 1e-6 * s.tol_scale, "witness ratio " + num(ratio));
  summary += "cb(tau_2) >= " + num(cb) + ", transpose level 2 " + num(level2);
  return t.outcome(summary);
}

// 3: CHSH.
Outcome chsh_oracles(const Settings& s) {
  Tally t;
  const QuantumXorGame g = chsh();
  RealMatrix M(2, 2);
  M << 1, 1, 1, -1;
  M /= 4.0;
  const double oracle = bias::classical_bias(M);
  const double product = bias::beta_product(g, budget_of(s, 8)).bounds.lower;
  t.check(std::abs(product - 0.5) <= 1e-6 * s.tol_scale, "beta lower " + num(product));
  t.check(std::abs(product - oracle) <= 1e-6 * s.tol_scale, "exhaustive oracle " + num(oracle));

  // Alice measures i and forwards it; Bob answers sign M(i, k).
  std::vector<ComplexMatrix> plus, minus, obs;
  for (Index i = 0; i < 2; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(2, 2);
    e(i, i) = 1.0;
    plus.push_back(e);
    minus.push_back(ComplexMatrix::Zero(2, 2));
    ComplexMatrix b = ComplexMatrix::Zero(2, 2);
    for (Index k = 0; k < 2; ++k) b(k, k) = M(i, k) >= 0 ? 1.0 : -1.0;
    obs.push_back(b);
  }
  const double forward = bias_of(g, OwcStrategy(plus, minus, obs));
  t.check(forward >= 1.0 - 1e-6 * s.tol_scale, "measure-and-forward bias " + num(forward));
  const double owc = bias::beta_owc(g, 2, budget_of(s, 4)).bounds.lower;
  t.check(owc >= 1.0 - 1e-6 * s.tol_scale, "beta_owc(d=2) lower " + num(owc));
  const double star = bias::beta_entangled(g, 2, 2, budget_of(s, 8)).bounds.lower;
  t.check(star >= 0.7071 - 1e-3 * s.tol_scale, "beta*(2,2) lower " + num(star));
  return t.outcome("beta " + num(product) + ", owc " + num(owc) + ", star " + num(star));
}

// 4: hierarchy soundness over random and gallery games.
Outcome sandwich_soundness(const Settings& s) {
  Tally t;
  std::vector<bias::NamedGame> games = bias::random_games(50, 2, 2, s.seed);
  for (const char* spec : {"swap:2", "chsh", "hadamard:2", "diagonal:2:2", "mab:2", "product_state:2:2"}) {
    games.push_back({spec, gallery(spec)});
  }
  const SolverBudget b = budget_of(s, 5, 300);
  bias::HierarchyConfig config;
  config.messages = {1, 2, 3, 4};
  config.with_pi1cb = false;
  const double soundness = kTol.soundness * s.tol_scale;
  double worst_margin = -1e300;
  for (std::size_t i = 0; i < games.size(); ++i) {
    const auto& g = games[i];
    const bias::GameReport r = bias::analyze_game(g.id, g.game, b, config);
    for (const auto& f : r.flags) t.check(false, g.id + ": " + f);
    const auto margin = [&](const BoundInterval& x) { worst_margin = std::max(worst_margin, x.lower - r.beta_owq); };
    margin(r.beta);
    t.check(r.beta.lower <= r.beta_owq + soundness, g.id + ": beta above beta_owq");
    double prev = -1.0;
    for (const auto& e : r.beta_star) {
      margin(e.bounds);
      t.check(e.bounds.lower <= r.beta_owq + soundness, g.id + ": beta* above beta_owq");
      t.check(e.bounds.lower >= prev - kTol.monotonicity, g.id + ": beta* not monotone");
      prev = e.bounds.lower;
    }
    prev = -1.0;
    for (const auto& o : r.beta_owc) {
      margin(o.bounds);
      t.check(o.bounds.lower <= r.beta_owq + soundness, g.id + ": beta_owc above beta_owq");
      t.check(o.bounds.lower >= prev - kTol.monotonicity, g.id + ": beta_owc not monotone");
      prev = o.bounds.lower;
    }
    t.check(std::abs(r.beta_owc.front().bounds.lower - r.beta.lower) <= 1e-9 * s.tol_scale,
            g.id + ": beta_owc(d=1) " + num(r.beta_owc.front().bounds.lower) + " vs beta " + num(r.beta.lower));

    // Gamma sandwich on the gallery and the first few random games.
    if (i < 5 || i >= 50) {
      const auto z = gam::TensorElement::from_map(associated_map(g.game));
      const auto gamma = gam::gamma_rc_upper(z, b, {8, 0.3});
      const std::vector<Index> levels{1, 2};
      try {
        const BoundInterval big = gam::gamma_to_Gamma(z, gamma.gamma_upper, b, levels);
        t.check(big.lower <= big.upper + 1e-6 * s.tol_scale, g.id + ": Gamma inverted");
      } catch (const ConsistencyError& e) {
        t.check(false, g.id + ": " + e.what());
      }
    }
  }
  return t.outcome(std::to_string(games.size()) + " games, max lower - beta_owq " + num(worst_margin));
}

// 5: M_{a,b} certificates.
Outcome mab_certificates(const Settings& s) {
  Tally t;
  mat::Rng rng = mat::make_stream(s.seed, 5);
  const SolverBudget b = budget_of(s, 2, 200);
  std::uniform_real_distribution<double> radius(0.3, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Index n = 2 + i % 2;
    ComplexMatrix a = mat::random_ginibre(n, n, rng);
    ComplexMatrix c = mat::random_ginibre(n, n, rng);
    a *= (i % 4 == 0 ? 1.0 : radius(rng)) / a.norm();
    c *= (i % 4 == 0 ? 1.0 : radius(rng)) / c.norm();
    // x -> a x b attains its cb norm at level 1; higher levels only cost time.
    const std::vector<Index> levels = iota_levels(n);
    const auto cert = gam::mab_certify(a, c, b, levels);
    worst = std::max(worst, cert.cb_lower);
    t.check(cert.ok, "pair " + std::to_string(i) + " cb lower " + num(cert.cb_lower));
  }
  return t.outcome("largest cb lower " + num(worst) + " against 4 sqrt 2");
}

// 6: cb <= 8 sqrt 2 pi_{1,cb} on known values.
Outcome chain_known(const Settings& s) {
  Tally t;
  const SolverBudget b = budget_of(s, 3, 300);
  double worst = 0.0;
  for (Index n : {2, 3}) {
    const std::vector<Index> levels = iota_levels(n);
    const auto c = gam::chain_check(associated_map(swap_operator(n)), double(n), b, levels);
    worst = std::max(worst, c.cb_lower / c.bound);
    t.check(c.ok, "tau_" + std::to_string(n) + " cb lower " + num(c.cb_lower));
  }
  mat::Rng rng = mat::make_stream(s.seed, 6);
  for (int i = 0; i < 20; ++i) {
    const RealMatrix M = random_l1_matrix(2 + i % 2, 2 + (i / 2) % 2, 1.0, rng);
    const QuantumXorGame g = diagonal_game(M);
    const std::vector<Index> levels{1, 2};
    const auto c = gam::chain_check(associated_map(g), bias::pi1o_exact(g), b, levels);
    worst = std::max(worst, c.cb_lower / c.bound);
    t.check(c.ok, "diagonal " + std::to_string(i) + " cb lower " + num(c.cb_lower));
  }
  return t.outcome("largest cb lower / bound " + num(worst));
}

// 7: weight axioms.
Outcome weight_axioms(const Settings& s) {
  Tally t;
  mat::Rng rng = mat::make_stream(s.seed, 7);
  std::uniform_real_distribution<double> scale(0.2, 3.0);
  const double tol = 1e-6 * s.tol_scale;
  for (int i = 0; i < 100; ++i) {
    const Index d = 1 + i % 4;
    std::vector<ComplexMatrix> xs, ys;
    for (Index k = 0; k < d; ++k) {
      xs.push_back(mat::random_ginibre(3, 3, rng) * scale(rng));
      ys.push_back(mat::random_ginibre(3, 3, rng) * scale(rng));
    }
    const osn::MatrixTuple x(xs), y(ys);
    const std::string tag = "tuple " + std::to_string(i);

    const osn::SplitResult wx = osn::rplus2c_norm(x);
    const osn::SplitResult wy = osn::rplus2c_norm(y);
    const double w_x = wx.value * wx.value, w_y = wy.value * wy.value;

    const double tt = scale(rng);
    const double w_scaled = gam::weight_w(x.scaled(std::sqrt(tt)));
    t.check(std::abs(w_scaled - tt * w_x) <= tol * tt * w_x, tag + " homogeneity");

    // The joint splitting is a feasible point of the concatenated problem.
    const osn::MatrixTuple joint_seed = osn::MatrixTuple::concat(wx.row_part, wy.row_part);
    const std::vector<osn::MatrixTuple> seeds{joint_seed};
    const osn::SplitResult wxy = osn::rplus2c_norm(osn::MatrixTuple::concat(x, y), seeds);
    t.check(wxy.value * wxy.value <= w_x + w_y + tol, tag + " subadditivity");

    const ComplexMatrix a = mat::random_contraction(d, d, rng);
    const osn::MatrixTuple mixed = y.mixed(a);
    const osn::OrderingResult ord = osn::ordering_check(mixed, y);
    t.check(ord.dominated, tag + " ordering witness");
    if (ord.dominated) {
      const std::vector<osn::MatrixTuple> mseeds{wy.row_part.mixed(a)};
      const osn::SplitResult wm = osn::rplus2c_norm(mixed, mseeds);
      t.check(wm.value * wm.value <= w_y + tol, tag + " monotonicity");
    }

    const gam::SandwichCheck sw = gam::weight_sandwich_check(x);
    t.check(sw.ok, tag + " sandwich " + num(sw.lhs) + " " + num(sw.w) + " " + num(sw.rhs));
  }
  return t.outcome("");
}

// 8: Pietsch against the R cap C cb norm.
Outcome pietsch_cross_check(const Settings& s) {
  Tally t;
  mat::Rng rng = mat::make_stream(s.seed, 8);
  const SolverBudget b = budget_of(s, 50, 300);
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < 30; ++i) {
    const Index d = 1 + i % 4, p = 1 + (i / 4) % 4;
    const ComplexMatrix h = mat::random_ginibre(p, d, rng);
    const double pi2 = osn::pietsch_pi2(h).value;
    const osn::LinearMapRep u(osn::ConcreteSpace::diagonal(d), osn::ConcreteSpace::row_intersect_column(p), h);
    const std::vector<Index> levels = iota_levels(d);
    const double cb = osn::cb_norm_bounds(u, b, levels).bounds.lower;
    const double rel = cb / pi2 - 1.0;
    lo = std::min(lo, rel);
    hi = std::max(hi, rel);
    t.check(rel >= -0.05 * s.tol_scale && rel <= 0.02 * s.tol_scale,
            "map " + std::to_string(i) + " cb " + num(cb) + " pi2 " + num(pi2));
  }
  return t.outcome("relative gap range [" + num(lo) + ", " + num(hi) + "]");
}

// 9: Hadamard separation.
Outcome hadamard_gap(const Settings& s) {
  (void)s;
  Tally t;
  std::string summary;
  for (Index n : {2, 4}) {
    const RealMatrix H = sylvester_hadamard(n) / double(n * n);
    const double pi1o = bias::pi1o_exact(hadamard_game(n));
    const double classical = bias::classical_bias(H);
    const double ratio = pi1o / classical;
    t.check(ratio >= std::sqrt(double(n)) / std::sqrt(2.0), "n=" + std::to_string(n) + " ratio " + num(ratio));
    summary += "n=" + std::to_string(n) + " ratio " + num(ratio) + " ";
  }
  return t.outcome(summary);
}

// 10: the hierarchy command's JSON is reproducible.
Outcome determinism(const Settings& s) {
  Tally t;
  SolverBudget b = budget_of(s, 3, 300);
  const bias::HierarchyConfig config;
  auto document = [&] {
    const auto games = bias::random_games(6, 2, 2, s.seed);
    return io::dump(io::report_to_json(bias::hierarchy_report(games, b, config)));
  };
  const std::string first = document();
  const std::string second = document();
  t.check(!first.empty() && first == second, "reports differ");
  return t.outcome(std::to_string(first.size()) + " bytes");
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "exact values", exact_values},
      {2, "transpose norms", transpose_norms},
      {3, "classical and CHSH oracles", chsh_oracles},
      {4, "sandwich soundness", sandwich_soundness},
      {5, "M_ab certificate", mab_certificates},
      {6, "cb chain on known values", chain_known},
      {7, "weight axioms and sandwich", weight_axioms},
      {8, "Pietsch cross-check", pietsch_cross_check},
      {9, "Hadamard gap direction", hadamard_gap},
      {10, "determinism", determinism},
  };
  return all;
}

std::vector<Result> run(const Settings& settings, std::ostream& out, const std::vector<int>& only) {
  std::vector<Result> results;
  for (const Criterion& c : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Result r{c.id, c.title, {}, 0.0};
    try {
      r.outcome = c.run(settings);
    } catch (const std::exception& e) {
      r.outcome = {false, std::string("exception: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << (r.outcome.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << ") " << std::fixed
        << std::setprecision(2) << r.seconds << "s: " << r.outcome.detail << std::defaultfloat << "\n";
    out.flush();
    results.push_back(std::move(r));
  }
  return results;
}

void list(std::ostream& out) {
  for (const Criterion& c : criteria()) out << c.id << "  " << c.title << "\n";
}

}  // namespace qxor::acceptance
