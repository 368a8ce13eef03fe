#include "qxor/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace qxor::io {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& field, std::initializer_list<const char*> allowed,
                    std::initializer_list<const char*> required) {
  if (!j.is_object()) throw ParseError(field, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ok.count(it.key())) throw ParseError(field.empty() ? it.key() : field + "." + it.key(), "unknown field");
  }
  for (const char* r : required) {
    if (!j.contains(r)) throw ParseError(field.empty() ? r : field + "." + r, "missing");
  }
}

std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

void check_schema(const json& j) {
  if (!j.at("schema").is_string() || j.at("schema").get<std::string>() != kSchema) {
    throw ParseError("schema", "expected \"" + std::string(kSchema) + "\"");
  }
}

Index get_dim(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ParseError(field, "expected a positive integer");
  const auto v = j.get<long long>();
  if (v < 1 || v > 4096) throw ParseError(field, "expected a positive integer");
  return static_cast<Index>(v);
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ParseError(field, "expected a number");
  return j.get<double>();
}

std::vector<double> get_array(const json& j, const std::string& field, std::size_t expected) {
  if (!j.is_array()) throw ParseError(field, "expected an array of numbers");
  if (j.size() != expected) {
    throw ParseError(field, "expected " + std::to_string(expected) + " entries, got " + std::to_string(j.size()));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

ComplexMatrix get_matrix(const json& re, const json& im, Index rows, Index cols, const std::string& re_field,
                         const std::string& im_field) {
  const auto n = static_cast<std::size_t>(rows * cols);
  const std::vector<double> a = get_array(re, re_field, n);
  const std::vector<double> b = get_array(im, im_field, n);
  ComplexMatrix out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const auto k = static_cast<std::size_t>(r * cols + c);
      out(r, c) = Complex(a[k], b[k]);
    }
  }
  return out;
}

std::pair<json, json> put_matrix(const ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return {re, im};
}

Episode episode_from_json(const json& j, const std::string& field, Index nm) {
  require_object(j, field, {"probability", "sign", "state_re", "state_im"}, {"probability", "sign", "state_re", "state_im"});
  Episode e;
  e.probability = get_number(j.at("probability"), join(field, "probability"));
  if (!j.at("sign").is_number_integer()) throw ParseError(join(field, "sign"), "expected +1 or -1");
  e.sign = j.at("sign").get<int>();
  const ComplexMatrix raw =
      get_matrix(j.at("state_re"), j.at("state_im"), nm, nm, join(field, "state_re"), join(field, "state_im"));
  e.state = HermitianMatrix(raw);
  return e;
}

std::string flatten_dims(const bias::AncillaDims& a) { return std::to_string(a.dA) + "x" + std::to_string(a.dB); }

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

QuantumXorGame game_from_json(const json& j) {
  require_object(j, "", {"schema", "n", "m", "G_re", "G_im", "episodes"}, {"schema", "n", "m", "G_re", "G_im"});
  check_schema(j);
  const Index n = get_dim(j.at("n"), "n");
  const Index m = get_dim(j.at("m"), "m");
  const ComplexMatrix g = get_matrix(j.at("G_re"), j.at("G_im"), n * m, n * m, "G_re", "G_im");
  QuantumXorGame game{BipartiteOperator(HermitianMatrix(g), n, m)};
  if (!j.contains("episodes")) return game;

  const json& eps = j.at("episodes");
  if (!eps.is_array() || eps.empty()) throw ParseError("episodes", "expected a non-empty array");
  std::vector<Episode> list;
  for (std::size_t i = 0; i < eps.size(); ++i) list.push_back(episode_from_json(eps[i], "episodes[" + std::to_string(i) + "]", n * m));
  QuantumXorGame from = QuantumXorGame::from_episodes(n, m, std::move(list));
  const double err = mat::max_abs(from.G() - g);
  if (err > kTol.identity * std::max(1.0, mat::max_abs(g))) {
    throw ValidationError("episodes", "episodes do not sum to G (max deviation " + format_double(err) + ")");
  }
  return from;
}

json game_to_json(const QuantumXorGame& g) {
  json j;
  j["schema"] = kSchema;
  j["n"] = g.n();
  j["m"] = g.m();
  auto [re, im] = put_matrix(g.G());
  j["G_re"] = std::move(re);
  j["G_im"] = std::move(im);
  if (g.episodes()) {
    json eps = json::array();
    for (const Episode& e : *g.episodes()) {
      auto [sr, si] = put_matrix(e.state.matrix());
      eps.push_back({{"probability", e.probability}, {"sign", e.sign}, {"state_re", sr}, {"state_im", si}});
    }
    j["episodes"] = std::move(eps);
  }
  return j;
}

TupleDocument tuple_from_json(const json& j) {
  require_object(j, "", {"schema", "rows", "cols", "trace_class", "items"}, {"schema", "rows", "cols", "items"});
  check_schema(j);
  const Index rows = get_dim(j.at("rows"), "rows");
  const Index cols = get_dim(j.at("cols"), "cols");
  TupleDocument out{osn::MatrixTuple::zeros(1, rows, cols), false};
  if (j.contains("trace_class")) {
    if (!j.at("trace_class").is_boolean()) throw ParseError("trace_class", "expected a boolean");
    out.trace_class = j.at("trace_class").get<bool>();
  }
  const json& items = j.at("items");
  if (!items.is_array() || items.empty()) throw ParseError("items", "expected a non-empty array");
  std::vector<ComplexMatrix> xs;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string f = "items[" + std::to_string(i) + "]";
    require_object(items[i], f, {"re", "im"}, {"re", "im"});
    xs.push_back(get_matrix(items[i].at("re"), items[i].at("im"), rows, cols, f + ".re", f + ".im"));
  }
  if (out.trace_class && rows != cols) throw ParseError("trace_class", "trace-class tuples must be square");
  out.tuple = osn::MatrixTuple(std::move(xs));
  return out;
}

json tuple_to_json(const TupleDocument& t) {
  json items = json::array();
  for (Index i = 0; i < t.tuple.size(); ++i) {
    auto [re, im] = put_matrix(t.tuple[i]);
    items.push_back({{"re", re}, {"im", im}});
  }
  return {{"schema", kSchema}, {"rows", t.tuple.rows()}, {"cols", t.tuple.cols()}, {"trace_class", t.trace_class},
          {"items", items}};
}

osn::ConcreteSpace space_from_json(const json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) throw ParseError(join(field, "type"), "missing");
  const std::string type = j.at("type").get<std::string>();
  if (type == "block_diagonal") {
    require_object(j, field, {"type", "sizes"}, {"sizes"});
    const json& s = j.at("sizes");
    if (!s.is_array() || s.empty()) throw ParseError(join(field, "sizes"), "expected a non-empty array");
    std::vector<Index> sizes;
    for (std::size_t i = 0; i < s.size(); ++i) sizes.push_back(get_dim(s[i], join(field, "sizes")));
    return osn::ConcreteSpace::block_diagonal(std::move(sizes));
  }
  static const std::set<std::string> known{"matrix_algebra", "dual_matrix_algebra", "diagonal", "row_intersect_column"};
  if (!known.count(type)) throw ParseError(join(field, "type"), "unknown space type '" + type + "'");
  const char* key = type == "row_intersect_column" ? "p" : (type == "diagonal" ? "d" : "n");
  require_object(j, field, {"type", key}, {key});
  const Index v = get_dim(j.at(key), join(field, key));
  if (type == "matrix_algebra") return osn::ConcreteSpace::matrix_algebra(v);
  if (type == "dual_matrix_algebra") return osn::ConcreteSpace::dual_matrix_algebra(v);
  if (type == "diagonal") return osn::ConcreteSpace::diagonal(v);
  return osn::ConcreteSpace::row_intersect_column(v);
}

json space_to_json(const osn::ConcreteSpace& s) {
  if (s.is_dual()) return {{"type", "dual_matrix_algebra"}, {"n", s.ambient()}};
  const std::string& label = s.label();
  const auto& b = s.blocks();
  if (!b.empty()) {
    if (b.size() == 1) return {{"type", "matrix_algebra"}, {"n", b.front()}};
    const bool diag = std::all_of(b.begin(), b.end(), [](Index k) { return k == 1; });
    if (diag) return {{"type", "diagonal"}, {"d", static_cast<Index>(b.size())}};
    return {{"type", "block_diagonal"}, {"sizes", b}};
  }
  if (label.rfind("RcapC", 0) == 0) return {{"type", "row_intersect_column"}, {"p", s.dim()}};
  throw ParseError("space", "space '" + label + "' has no file representation");
}

gam::TensorElement tensor_from_json(const json& j) {
  require_object(j, "", {"schema", "X", "Y", "coeff_re", "coeff_im"}, {"schema", "X", "Y", "coeff_re", "coeff_im"});
  check_schema(j);
  osn::ConcreteSpace x = space_from_json(j.at("X"), "X");
  osn::ConcreteSpace y = space_from_json(j.at("Y"), "Y");
  ComplexMatrix c = get_matrix(j.at("coeff_re"), j.at("coeff_im"), x.dim(), y.dim(), "coeff_re", "coeff_im");
  return gam::TensorElement(std::move(x), std::move(y), std::move(c));
}

json tensor_to_json(const gam::TensorElement& z) {
  auto [re, im] = put_matrix(z.coefficients());
  return {{"schema", kSchema}, {"X", space_to_json(z.X())}, {"Y", space_to_json(z.Y())}, {"coeff_re", re},
          {"coeff_im", im}};
}

json interval_to_json(const BoundInterval& b) {
  return {{"lower", number_or_null(b.lower)},
          {"upper", number_or_null(b.upper)},
          {"lower_method", b.lower_method},
          {"upper_method", b.upper_method}};
}

json report_to_json(const bias::GameReport& r) {
  json star = json::array();
  for (const auto& e : r.beta_star) {
    star.push_back({{"dA", e.dims.dA}, {"dB", e.dims.dB}, {"bounds", interval_to_json(e.bounds)}});
  }
  json owc = json::array();
  for (const auto& o : r.beta_owc) {
    owc.push_back({{"d", o.d}, {"bounds", interval_to_json(o.bounds)}, {"instrument_gap", o.instrument_gap}});
  }
  return {{"id", r.id},
          {"n", r.n},
          {"m", r.m},
          {"beta_owq", r.beta_owq},
          {"beta", interval_to_json(r.beta)},
          {"beta_star", star},
          {"beta_owc", owc},
          {"pi1o", r.pi1o},
          {"pi1cb", interval_to_json(r.pi1cb)},
          {"ratio_star_owc", r.ratio_star_owc},
          {"flags", r.flags}};
}

json report_to_json(const bias::HierarchyReport& h) {
  json rows = json::array();
  for (const auto& r : h.rows) rows.push_back(report_to_json(r));
  return {{"schema", kSchema},
          {"rows", rows},
          {"summary", {{"games", h.rows.size()}, {"max_ratio_star_owc", h.max_ratio_star_owc}, {"violations", h.violations}}}};
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string csv_header(const bias::HierarchyConfig& config) {
  std::ostringstream out;
  out << "id,n,m,beta_owq,beta_lo,beta_hi";
  for (const auto& a : config.ancilla) out << ",beta_star_" << flatten_dims(a) << "_lo,beta_star_" << flatten_dims(a) << "_hi";
  for (Index d : config.messages) out << ",beta_owc_d" << d << "_lo,beta_owc_d" << d << "_hi";
  out << ",pi1o,pi1cb_lo,pi1cb_hi,ratio_star_owc,flags";
  out << ",t_beta_owq,t_beta,t_beta_star,t_beta_owc,t_pi1cb";
  return out.str();
}

std::string csv_row(const bias::GameReport& r, const bias::HierarchyConfig& config) {
  std::ostringstream out;
  const auto pair = [&](const BoundInterval& b) { out << ',' << format_double(b.lower) << ',' << format_double(b.upper); };
  out << r.id << ',' << r.n << ',' << r.m << ',' << format_double(r.beta_owq);
  pair(r.beta);
  for (std::size_t i = 0; i < config.ancilla.size(); ++i) {
    if (i < r.beta_star.size()) pair(r.beta_star[i].bounds);
    else out << ",,";
  }
  for (std::size_t i = 0; i < config.messages.size(); ++i) {
    if (i < r.beta_owc.size()) pair(r.beta_owc[i].bounds);
    else out << ",,";
  }
  out << ',' << format_double(r.pi1o);
  pair(r.pi1cb);
  out << ',' << format_double(r.ratio_star_owc) << ',';
  for (std::size_t i = 0; i < r.flags.size(); ++i) out << (i ? ";" : "") << r.flags[i];
  for (const char* k : {"beta_owq", "beta", "beta_star", "beta_owc", "pi1cb"}) {
    const auto it = r.seconds.find(k);
    out << ',';
    if (it != r.seconds.end()) out << format_double(it->second);
  }
  return out.str();
}

std::string report_to_csv(const bias::HierarchyReport& h, const bias::HierarchyConfig& config) {
  std::string out = csv_header(config) + "\n";
  for (const auto& r : h.rows) out += csv_row(r, config) + "\n";
  return out;
}

json parse_text(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what, std::string("malformed JSON: ") + e.what());
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error("write failed for '" + path + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace qxor::io
