#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "qxor/bias.hpp"
#include "qxor/gam.hpp"
#include "qxor/game.hpp"
#include "qxor/osn.hpp"

// File formats. Every document carries "schema": "qxor/1" and unknown fields
// are rejected with a ParseError naming the field.
namespace qxor::io {

inline constexpr std::string_view kSchema = "qxor/1";

// Game: {schema, n, m, G_re, G_im, episodes?}. G_* are (nm)^2 row-major
// arrays under the index i*m + k. Episodes are
// {probability, sign, state_re, state_im}; when present they must sum to G.
QuantumXorGame game_from_json(const nlohmann::json& j);
nlohmann::json game_to_json(const QuantumXorGame& g);

// Tuple: {schema, rows, cols, trace_class?, items: [{re, im}, ...]}.
struct TupleDocument {
  osn::MatrixTuple tuple;
  bool trace_class = false;  // entries live in S_1 instead of M_n
};
TupleDocument tuple_from_json(const nlohmann::json& j);
nlohmann::json tuple_to_json(const TupleDocument& t);

// Space descriptor: {type, n | sizes | p}, with type one of matrix_algebra,
// dual_matrix_algebra, diagonal, block_diagonal, row_intersect_column.
osn::ConcreteSpace space_from_json(const nlohmann::json& j, const std::string& field);
nlohmann::json space_to_json(const osn::ConcreteSpace& s);

// Tensor: {schema, X, Y, coeff_re, coeff_im}; coeff is dim X x dim Y, row-major.
gam::TensorElement tensor_from_json(const nlohmann::json& j);
nlohmann::json tensor_to_json(const gam::TensorElement& z);

nlohmann::json interval_to_json(const BoundInterval& b);

// Reports exclude timings so equal inputs give byte-equal documents.
nlohmann::json report_to_json(const bias::GameReport& r);
nlohmann::json report_to_json(const bias::HierarchyReport& h);

// Fixed CSV columns (documented in the README); intervals as _lo/_hi pairs.
std::string csv_header(const bias::HierarchyConfig& config);
std::string csv_row(const bias::GameReport& r, const bias::HierarchyConfig& config);
std::string report_to_csv(const bias::HierarchyReport& h, const bias::HierarchyConfig& config);

// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

nlohmann::json parse_text(std::string_view text, const std::string& what);
nlohmann::json read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);
// JSON text with two-space indent and a trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace qxor::io
