#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qxor/errors.hpp"
#include "qxor/io.hpp"

using namespace qxor;
using nlohmann::json;

namespace {

template <class F>
std::string parse_field(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.field();
  }
  return "<no ParseError>";
}

template <class F>
std::string invariant(F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.invariant();
  }
  return "<no ValidationError>";
}

}  // namespace

TEST(GameJson, RoundTripIsBitExact) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const QuantumXorGame g = random_game(2, 1 + s % 3, s);
    const json j = io::game_to_json(g);
    const QuantumXorGame back = io::game_from_json(io::parse_text(io::dump(j), "game"));
    EXPECT_EQ(back.n(), g.n());
    EXPECT_EQ(back.m(), g.m());
    EXPECT_TRUE((back.G().array() == g.G().array()).all()) << s;
    EXPECT_EQ(io::dump(io::game_to_json(back)), io::dump(j));
  }
}

TEST(GameJson, EpisodesSurvive) {
  const QuantumXorGame g = chsh();
  const QuantumXorGame withEpisodes = QuantumXorGame::from_episodes(2, 2, to_episodes(g));
  const json j = io::game_to_json(withEpisodes);
  ASSERT_TRUE(j.contains("episodes"));
  const QuantumXorGame back = io::game_from_json(j);
  ASSERT_TRUE(back.episodes().has_value());
  EXPECT_EQ(back.episodes()->size(), withEpisodes.episodes()->size());
  EXPECT_LT(mat::max_abs(back.G() - g.G()), 1e-12);
}

TEST(GameJson, EpisodesMustSumToG) {
  json j = io::game_to_json(QuantumXorGame::from_episodes(2, 2, to_episodes(chsh())));
  for (auto& x : j["G_re"]) x = x.get<double>() * 0.99;
  EXPECT_EQ(invariant([&] { io::game_from_json(j); }), "episodes");
}

TEST(GameJson, RejectsMalformedDocuments) {
  const json good = io::game_to_json(chsh());
  json extra = good;
  extra["colour"] = 1;
  EXPECT_EQ(parse_field([&] { io::game_from_json(extra); }), "colour");
  json missing = good;
  missing.erase("G_im");
  EXPECT_EQ(parse_field([&] { io::game_from_json(missing); }), "G_im");
  json schema = good;
  schema["schema"] = "qxor/0";
  EXPECT_EQ(parse_field([&] { io::game_from_json(schema); }), "schema");
  json shortG = good;
  shortG["G_re"].erase(0);
  EXPECT_EQ(parse_field([&] { io::game_from_json(shortG); }), "G_re");
  json badN = good;
  badN["n"] = 0;
  EXPECT_EQ(parse_field([&] { io::game_from_json(badN); }), "n");
  json text = good;
  text["G_re"][1] = "x";
  EXPECT_EQ(parse_field([&] { io::game_from_json(text); }), "G_re[1]");
  EXPECT_THROW(io::parse_text("{\"schema\": ", "input"), ParseError);
}

TEST(GameJson, RejectsNonHermitianAndOversizedGames) {
  json j = io::game_to_json(chsh());
  j["G_re"][1] = 0.25;
  EXPECT_EQ(invariant([&] { io::game_from_json(j); }), "hermiticity");
  json big = io::game_to_json(chsh());
  for (auto& x : big["G_re"]) x = x.get<double>() * 3.0;
  EXPECT_EQ(invariant([&] { io::game_from_json(big); }), "trace_norm");
}

TEST(TupleJson, RoundTrip) {
  mat::Rng rng = mat::make_stream(1, 0);
  std::vector<ComplexMatrix> items{mat::random_ginibre(2, 3, rng), mat::random_ginibre(2, 3, rng)};
  const io::TupleDocument doc{osn::MatrixTuple(items), false};
  const auto back = io::tuple_from_json(io::parse_text(io::dump(io::tuple_to_json(doc)), "tuple"));
  EXPECT_FALSE(back.trace_class);
  ASSERT_EQ(back.tuple.size(), 2);
  for (Index k = 0; k < 2; ++k) EXPECT_TRUE((back.tuple[k].array() == items[k].array()).all());
  json rect = io::tuple_to_json(doc);
  rect["trace_class"] = true;
  EXPECT_EQ(parse_field([&] { io::tuple_from_json(rect); }), "trace_class");
}

TEST(SpaceJson, RoundTripAllTypes) {
  const std::vector<osn::ConcreteSpace> spaces{
      osn::ConcreteSpace::matrix_algebra(3), osn::ConcreteSpace::dual_matrix_algebra(2),
      osn::ConcreteSpace::diagonal(4), osn::ConcreteSpace::block_diagonal({1, 2}),
      osn::ConcreteSpace::row_intersect_column(3)};
  for (const auto& s : spaces) {
    const auto back = io::space_from_json(io::space_to_json(s), "X");
    EXPECT_EQ(back.label(), s.label());
    EXPECT_EQ(back.dim(), s.dim());
    EXPECT_EQ(back.ambient(), s.ambient());
  }
  EXPECT_EQ(parse_field([] { io::space_from_json(json{{"type", "hilbert"}}, "X"); }), "X.type");
}

TEST(TensorJson, RoundTrip) {
  const auto z = gam::TensorElement::from_map(associated_map(random_game(2, 2, 8)));
  const auto back = io::tensor_from_json(io::parse_text(io::dump(io::tensor_to_json(z)), "tensor"));
  EXPECT_TRUE(back.X().is_dual());
  EXPECT_EQ(back.Y().label(), z.Y().label());
  EXPECT_TRUE((back.coefficients().array() == z.coefficients().array()).all());
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(io::format_double(0.5), "0.5");
  EXPECT_EQ(io::format_double(1.0), "1");
  mat::Rng rng = mat::make_stream(2, 0);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    EXPECT_EQ(std::stod(io::format_double(x)), x);
  }
}

TEST(Report, IntervalsAndCsvColumns) {
  EXPECT_TRUE(io::interval_to_json(BoundInterval{0.5}).at("upper").is_null());
  bias::HierarchyConfig config;
  config.with_pi1cb = false;
  config.messages = {1, 2};
  config.ancilla = {{1, 1}, {2, 2}};
  SolverBudget b;
  b.restarts = 2;
  b.max_sweeps = 100;
  const auto games = bias::random_games(3, 2, 2, 5);
  const auto report = bias::hierarchy_report(games, b, config);
  const std::string csv = io::report_to_csv(report, config);
  std::istringstream lines(csv);
  std::string header, line;
  std::getline(lines, header);
  EXPECT_EQ(header, io::csv_header(config));
  EXPECT_EQ(header.rfind("id,n,m,beta_owq,beta_lo,beta_hi,", 0), 0u);
  const auto columns = std::count(header.begin(), header.end(), ',');
  int rows = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), columns);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
  const json j = io::report_to_json(report);
  EXPECT_EQ(j.at("rows").size(), 3u);
  EXPECT_EQ(j.at("summary").at("games"), 3);
  EXPECT_FALSE(j.at("rows")[0].contains("seconds"));
}
