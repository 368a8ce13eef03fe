#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "qxor/errors.hpp"
#include "qxor/gam.hpp"
#include "qxor/game.hpp"
#include "qxor/io.hpp"
#include "qxor/osn.hpp"

namespace qxor::cli {

using nlohmann::json;

void RunConfig::validate() const {
  if (messages.empty()) throw ValidationError("messages", "the message schedule is empty");
  if (ancilla.empty()) throw ValidationError("ancilla", "the ancilla schedule is empty");
  for (Index d : messages) {
    if (d < 1) throw ValidationError("messages", "message counts must be positive");
  }
  for (Index l : levels) {
    if (l < 1) throw ValidationError("levels", "levels must be positive");
  }
  if (format != "json" && format != "csv") throw ValidationError("format", "expected json or csv, got '" + format + "'");
  if (threads < 1) throw ValidationError("threads", "at least one thread is required");
  budget().validate();
}

SolverBudget RunConfig::budget() const {
  SolverBudget b;
  b.seed = seed;
  b.restarts = restarts;
  b.max_sweeps = max_sweeps;
  b.tol = tol;
  return b;
}

bias::HierarchyConfig RunConfig::hierarchy() const {
  bias::HierarchyConfig h;
  h.messages = messages;
  h.ancilla.clear();
  for (const auto& a : ancilla) h.ancilla.push_back(parse_ancilla(a));
  return h;
}

bias::AncillaDims parse_ancilla(const std::string& s) {
  const auto x = s.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(s);
    std::size_t p1 = 0, p2 = 0;
    const long a = std::stol(s.substr(0, x), &p1);
    const long b = std::stol(s.substr(x + 1), &p2);
    if (p1 != x || p2 != s.size() - x - 1 || a < 1 || b < 1) throw std::invalid_argument(s);
    return {static_cast<Index>(a), static_cast<Index>(b)};
  } catch (const std::exception&) {
    throw ValidationError("ancilla", "expected AxB, got '" + s + "'");
  }
}

namespace {

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
  } else {
    io::write_file(cfg.out, text);
  }
}

void emit_report(const RunConfig& cfg, const bias::HierarchyReport& report, std::ostream& out) {
  if (cfg.format == "csv") {
    emit(cfg, io::report_to_csv(report, cfg.hierarchy()), out);
  } else {
    emit(cfg, io::dump(io::report_to_json(report)), out);
  }
}

// File stem for a gallery name: "swap:2" becomes "swap_2".
std::string stem_of(const std::string& spec) {
  std::string s = spec;
  std::replace(s.begin(), s.end(), ':', '_');
  return s;
}

std::vector<std::string> gallery_for(Index n, Index m) {
  std::vector<std::string> out;
  const std::string nm = std::to_string(n) + ":" + std::to_string(m);
  if (n == m) out.push_back("swap:" + std::to_string(n));
  if (n == 2 && m == 2) out.push_back("chsh");
  if (n == m && (n & (n - 1)) == 0) out.push_back("hadamard:" + std::to_string(n));
  out.push_back("diagonal:" + nm);
  out.push_back("product_state:" + nm);
  if (n == m) out.push_back("mab:" + std::to_string(n));
  return out;
}

int cmd_analyze(const RunConfig& cfg, const std::string& file, std::string id, std::ostream& out) {
  const QuantumXorGame g = io::game_from_json(io::read_file(file));
  if (id.empty()) id = std::filesystem::path(file).stem().string();
  std::vector<bias::NamedGame> games{{id, g}};
  emit_report(cfg, bias::hierarchy_report(games, cfg.budget(), cfg.hierarchy(), cfg.threads), out);
  return kOk;
}

int cmd_hierarchy(const RunConfig& cfg, long long count, Index n, Index m, bool with_gallery, std::ostream& out,
                  std::ostream& err) {
  if (count < 1) throw ValidationError("count", "at least one game is required");
  std::vector<bias::NamedGame> games = bias::random_games(static_cast<Index>(count), n, m, cfg.seed);
  if (with_gallery) {
    for (const auto& spec : gallery_for(n, m)) games.push_back({spec, gallery(spec)});
  }
  const bias::HierarchyReport report = bias::hierarchy_report(games, cfg.budget(), cfg.hierarchy(), cfg.threads);
  emit_report(cfg, report, out);
  err << "games " << report.rows.size() << ", max beta*/beta_owc " << io::format_double(report.max_ratio_star_owc)
      << ", violations " << report.violations.size() << "\n";
  for (const auto& v : report.violations) err << "  " << v << "\n";
  return report.violations.empty() ? kOk : kFailure;
}

int cmd_gallery(const RunConfig& cfg, const std::vector<std::string>& specs, bool list, std::ostream& out) {
  if (list || specs.empty()) {
    for (const auto& name : gallery_names()) out << name << "\n";
    return kOk;
  }
  if (cfg.out.empty()) {
    if (specs.size() != 1) throw ValidationError("out", "several games need --out DIR");
    out << io::dump(io::game_to_json(gallery(specs.front())));
    return kOk;
  }
  std::filesystem::create_directories(cfg.out);
  for (const auto& spec : specs) {
    const auto path = std::filesystem::path(cfg.out) / (stem_of(spec) + ".json");
    io::write_file(path.string(), io::dump(io::game_to_json(gallery(spec))));
    out << path.string() << "\n";
  }
  return kOk;
}

json split_json(const osn::SplitResult& r) {
  return {{"value", r.value}, {"lower", r.lower}, {"degraded", r.degraded}};
}

int cmd_norms(const RunConfig& cfg, const std::string& file, std::ostream& out, std::ostream& err) {
  const io::TupleDocument doc = io::tuple_from_json(io::read_file(file));
  const osn::MatrixTuple& t = doc.tuple;
  json j{{"schema", io::kSchema}, {"size", t.size()}, {"trace_class", doc.trace_class}};
  bool degraded = false;
  if (doc.trace_class) {
    const osn::SplitResult s = osn::s1_rplus2c_norm(t);
    j["row"] = osn::s1_row_norm(t);
    j["col"] = osn::s1_col_norm(t);
    j["rc"] = osn::s1_rc_norm(t);
    j["rplus2c"] = split_json(s);
    j["w"] = s.value * s.value;
  } else {
    const osn::SplitResult q = osn::rplus2c_norm(t);
    const osn::SplitResult l = osn::rplusc_norm(t);
    const gam::SandwichCheck sw = gam::weight_sandwich_check(t);
    j["row"] = osn::row_norm(t);
    j["col"] = osn::col_norm(t);
    j["rc"] = osn::rc_norm(t);
    j["rplus2c"] = split_json(q);
    j["rplusc"] = split_json(l);
    j["w"] = sw.w;
    j["sandwich"] = {{"lhs", sw.lhs}, {"w", sw.w}, {"rhs", sw.rhs}, {"ok", sw.ok}};
    degraded = q.degraded || l.degraded;
  }
  emit(cfg, io::dump(j), out);
  if (degraded) {
    err << "splitting solver stopped above the requested accuracy\n";
    return kBudget;
  }
  return kOk;
}

int cmd_factor(const RunConfig& cfg, const std::string& file, int iterations, std::ostream& out) {
  const gam::TensorElement z = io::tensor_from_json(io::read_file(file));
  gam::GammaOptions opt;
  opt.iterations = iterations;
  const gam::GammaResult g = gam::gamma_rc_upper(z, cfg.budget(), opt);
  json j{{"schema", io::kSchema},
         {"rank", z.rank()},
         {"gamma", {{"upper", g.gamma_upper}, {"start", g.start_value}, {"accepted", g.accepted}, {"proposals", g.proposals}}},
         {"x_norm", gam::x_tuple_norm(g.decomposition)},
         {"y_norm", gam::y_tuple_norm(g.decomposition)}};
  if (z.X().is_dual()) {
    j["Gamma"] = io::interval_to_json(gam::gamma_to_Gamma(z, g.gamma_upper, cfg.budget(), cfg.levels));
  }
  emit(cfg, io::dump(j), out);
  return kOk;
}

int cmd_selftest(const RunConfig& cfg, bool list, const std::vector<int>& only, bool seed_given, std::ostream& out,
                 std::ostream& err) {
  if (list) {
    acceptance::list(out);
    return kOk;
  }
  acceptance::Settings s;
  if (seed_given) s.seed = cfg.seed;
  s.tol_scale = cfg.tol / 1e-8;
  const auto results = acceptance::run(s, out, only);
  double total = 0.0;
  for (const auto& r : results) total += r.seconds;
  out << "total " << io::format_double(std::round(total * 100.0) / 100.0) << "s\n";
  for (const auto& r : results) {
    if (!r.outcome.pass) {
      err << "criterion " << r.id << " (" << r.title << ") failed\n";
      return kFailure;
    }
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounds for the biases of quantum XOR games", "qxor"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::vector<std::string> ancilla;
  app.add_option("--seed", cfg.seed, "Seed for all randomness");
  app.add_option("--restarts", cfg.restarts, "Restarts per see-saw");
  app.add_option("--max-sweeps", cfg.max_sweeps, "Sweep cap per restart");
  app.add_option("--tol", cfg.tol, "Relative convergence tolerance");
  app.add_option("--threads", cfg.threads, "Worker threads for independent games");
  app.add_option("--messages", cfg.messages, "Message schedule for beta_owc")->delimiter(',');
  app.add_option("--ancilla", ancilla, "Ancilla schedule, AxB entries")->delimiter(',');
  app.add_option("--levels", cfg.levels, "Amplification levels for cb bounds")->delimiter(',');
  app.add_option("--format", cfg.format, "Report format: json or csv");
  app.add_option("--out", cfg.out, "Output path (directory for gallery)");
  app.fallthrough();

  std::string file, id;
  auto* analyze = app.add_subcommand("analyze", "Analyze one game file");
  analyze->add_option("game", file, "Game JSON file")->required();
  analyze->add_option("--id", id, "Row id (default: file stem)");

  long long count = 1;
  Index n = 2, m = 2;
  bool with_gallery = false;
  auto* hierarchy = app.add_subcommand("hierarchy", "Analyze random games and check the strategy hierarchy");
  hierarchy->add_option("--count", count, "Number of random games");
  hierarchy->add_option("--n", n, "Alice dimension");
  hierarchy->add_option("--m", m, "Bob dimension");
  hierarchy->add_flag("--gallery", with_gallery, "Add the gallery games of the same size");

  std::vector<std::string> specs;
  bool list = false;
  auto* gal = app.add_subcommand("gallery", "Write named games to files");
  gal->add_option("names", specs, "Gallery names such as swap:2 or random:2:2:7");
  gal->add_flag("--list", list, "List the available names");

  auto* norms = app.add_subcommand("norms", "Tuple norms of a tuple file");
  norms->add_option("tuple", file, "Tuple JSON file")->required();

  int iterations = 60;
  auto* factor = app.add_subcommand("factor", "gamma and Gamma bounds for a tensor file");
  factor->add_option("tensor", file, "Tensor JSON file")->required();
  factor->add_option("--iterations", iterations, "Decomposition search iterations");

  std::vector<int> only;
  auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
  selftest->add_flag("--list", list, "List the criteria without running them");
  selftest->add_option("--only", only, "Run only these criteria")->delimiter(',');

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }
  if (!ancilla.empty()) cfg.ancilla = ancilla;

  try {
    cfg.validate();
    if (*analyze) return cmd_analyze(cfg, file, id, out);
    if (*hierarchy) return cmd_hierarchy(cfg, count, n, m, with_gallery, out, err);
    if (*gal) return cmd_gallery(cfg, specs, list, out);
    if (*norms) return cmd_norms(cfg, file, out, err);
    if (*factor) return cmd_factor(cfg, file, iterations, out);
    if (*selftest) return cmd_selftest(cfg, list, only, app.count("--seed") > 0, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ValidationError& e) {
    err << "validation error (" << e.invariant() << "): " << e.what() << "\n";
    return kValidation;
  } catch (const DimensionError& e) {
    err << "validation error (dimensions): " << e.what() << "\n";
    return kValidation;
  } catch (const ConvergenceError& e) {
    err << "solver budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace qxor::cli
