#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "qxor/bias.hpp"

namespace qxor::bias {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void flag_interval(GameReport& r, const BoundInterval& b, const std::string& what) {
  if (b.lower > b.upper + 1e-9) r.flags.push_back(what + "_interval_inverted");
  if (b.lower > r.beta_owq + kTol.soundness && what != "pi1cb") r.flags.push_back(what + "_exceeds_beta_owq");
}

}  // namespace

GameReport analyze_game(const std::string& id, const QuantumXorGame& g, const SolverBudget& budget,
                        const HierarchyConfig& config) {
  GameReport r;
  r.id = id;
  r.n = g.n();
  r.m = g.m();
  {
    Stopwatch t;
    r.beta_owq = beta_owq(g).value;
    r.pi1o = pi1o_exact(g);
    r.seconds["beta_owq"] = t.seconds();
  }
  double product_lower = 0.0;
  {
    Stopwatch t;
    const ProductResult p = beta_product(g, budget);
    r.beta = p.bounds;
    product_lower = p.bounds.lower;
    r.seconds["beta"] = t.seconds();
    flag_interval(r, r.beta, "beta");
  }
  double best_star = 0.0;
  {
    Stopwatch t;
    const auto ent = beta_entangled_schedule(g, config.ancilla, budget);
    for (std::size_t i = 0; i < ent.size(); ++i) {
      r.beta_star.push_back({config.ancilla[i], ent[i].bounds});
      flag_interval(r, ent[i].bounds, "beta_star");
      if (i > 0 && ent[i].bounds.lower < ent[i - 1].bounds.lower - kTol.monotonicity) r.flags.push_back("beta_star_not_monotone");
      best_star = std::max(best_star, ent[i].bounds.lower);
    }
    r.seconds["beta_star"] = t.seconds();
  }
  double best_owc = 0.0;
  {
    Stopwatch t;
    const auto owc = beta_owc_schedule(g, config.messages, budget);
    for (std::size_t i = 0; i < owc.size(); ++i) {
      r.beta_owc.push_back({config.messages[i], owc[i].bounds, owc[i].instrument_gap});
      flag_interval(r, owc[i].bounds, "beta_owc");
      if (i > 0 && owc[i].bounds.lower < owc[i - 1].bounds.lower - kTol.monotonicity) r.flags.push_back("beta_owc_not_monotone");
      best_owc = std::max(best_owc, owc[i].bounds.lower);
    }
    r.seconds["beta_owc"] = t.seconds();
  }
  if (product_lower > best_owc + kTol.soundness) r.flags.push_back("product_exceeds_owc");
  if (config.with_pi1cb) {
    Stopwatch t;
    const Pi1cbResult c = pi1cb_bounds(g, default_pi1cb_schedule(g.n()), budget);
    r.pi1cb = c.bounds;
    flag_interval(r, r.pi1cb, "pi1cb");
    if (best_star > 8.0 * std::sqrt(2.0) * c.bounds.upper + kTol.soundness) r.flags.push_back("beta_star_exceeds_cb_ratio");
    r.seconds["pi1cb"] = t.seconds();
  } else {
    r.pi1cb = BoundInterval{best_owc, std::min(r.pi1o, 4.0 * r.beta_owq), "owc-seesaw", "pi1o"};
  }
  r.ratio_star_owc = best_owc > 0.0 ? best_star / best_owc : 0.0;
  return r;
}

HierarchyReport hierarchy_report(std::span<const NamedGame> games, const SolverBudget& budget,
                                 const HierarchyConfig& config, int threads) {
  HierarchyReport out;
  out.rows.resize(games.size());
  std::vector<std::exception_ptr> errors(games.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < games.size(); i = next++) {
      try {
        out.rows[i] = analyze_game(games[i].id, games[i].game, budget, config);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto workers = static_cast<std::size_t>(std::clamp(threads, 1, 64));
  if (workers == 1 || games.size() < 2) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(workers, games.size()); ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  // The first failure in input order wins, whatever the scheduling.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const GameReport& a, const GameReport& b) { return a.id < b.id; });
  for (const GameReport& r : out.rows) {
    out.max_ratio_star_owc = std::max(out.max_ratio_star_owc, r.ratio_star_owc);
    for (const std::string& f : r.flags) out.violations.push_back(r.id + ": " + f);
  }
  return out;
}

std::vector<NamedGame> random_games(Index count, Index n, Index m, std::uint64_t seed) {
  if (count < 1) throw ValidationError("count", "at least one game is required");
  std::vector<NamedGame> out;
  for (Index i = 0; i < count; ++i) {
    mat::Rng rng = mat::make_stream(seed, static_cast<std::uint64_t>(i));
    char id[32];
    std::snprintf(id, sizeof id, "random-%04lld", static_cast<long long>(i));
    out.push_back({id, random_game(n, m, rng())});
  }
  return out;
}

}  // namespace qxor::bias
