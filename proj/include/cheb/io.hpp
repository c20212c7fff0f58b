// Dataset and coefficient file handling.  Two dataset formats: CSV rows
// x1,...,xd,f with an optional header line, and a JSON object
// {"dimension": d, "samples": [{"x": [...], "f": v}, ...]}.  Parse failures
// raise ParseError with the offending line or sample named.
#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cheb/approx.hpp"
#include "cheb/core.hpp"

namespace cheb {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// strict full-token parse; returns false on anything but a finite number
inline bool parse_double(std::string_view token, double& out) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return false;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last && std::isfinite(out);
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

inline std::string shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void check_duplicates(const Mat& points, const std::vector<std::size_t>& labels,
                             const char* prefix, const char* noun) {
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (points[i] == points[j])
        throw ParseError(std::string(prefix) + noun + " " + std::to_string(labels[i]) +
                         ": duplicate of the point on " + noun + " " + std::to_string(labels[j]));
}

}  // namespace detail

// CSV rows x1,...,xd,f.  A first row with any non-numeric field is treated as
// a header and skipped; blank lines and lines starting with # are ignored.
// The dimension is the column count minus one unless expected_dimension pins
// it beforehand.
inline Dataset parse_dataset_csv(std::istream& in,
                                 std::optional<std::size_t> expected_dimension = {}) {
  Mat points;
  Vec values;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t lineno = 0, columns = 0;
  bool saw_row = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto stripped = detail::trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    auto fields = detail::split_fields(stripped);
    Vec row(fields.size());
    bool numeric = true;
    for (std::size_t c = 0; c < fields.size() && numeric; ++c)
      numeric = detail::parse_double(fields[c], row[c]);
    if (!saw_row && !numeric) continue;  // header line
    if (!numeric) {
      std::size_t c = 0;
      double ignored;
      while (detail::parse_double(fields[c], ignored)) ++c;
      throw ParseError("line " + std::to_string(lineno) + ": cannot parse '" +
                       std::string(detail::trim(fields[c])) + "' as a number");
    }
    if (!saw_row) {
      saw_row = true;
      columns = fields.size();
      if (columns < 2)
        throw ParseError("line " + std::to_string(lineno) +
                         ": need at least two columns (coordinates then value)");
      if (expected_dimension && columns != *expected_dimension + 1)
        throw ParseError("line " + std::to_string(lineno) + ": found " +
                         std::to_string(columns - 1) + " coordinate columns, expected " +
                         std::to_string(*expected_dimension));
    } else if (fields.size() != columns) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " +
                       std::to_string(columns) + " fields, found " +
                       std::to_string(fields.size()));
    }
    values.push_back(row.back());
    row.pop_back();
    points.push_back(std::move(row));
    lines.push_back(lineno);
  }
  if (!saw_row) throw ParseError("no data rows found");
  detail::check_duplicates(points, lines, "", "line");
  return make_dataset(columns - 1, std::move(points), std::move(values));
}

inline Dataset parse_dataset_json(std::istream& in,
                                  std::optional<std::size_t> expected_dimension = {}) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON dataset: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("JSON dataset: top level must be an object");
  if (!j.contains("dimension") || !j["dimension"].is_number_unsigned())
    throw ParseError("JSON dataset: missing or non-integral \"dimension\"");
  const std::size_t d = j["dimension"].get<std::size_t>();
  if (d == 0) throw ParseError("JSON dataset: \"dimension\" must be positive");
  if (expected_dimension && d != *expected_dimension)
    throw ParseError("JSON dataset: \"dimension\" is " + std::to_string(d) + ", expected " +
                     std::to_string(*expected_dimension));
  if (!j.contains("samples") || !j["samples"].is_array())
    throw ParseError("JSON dataset: missing \"samples\" array");

  Mat points;
  Vec values;
  std::vector<std::size_t> labels;
  std::size_t k = 0;
  for (const auto& s : j["samples"]) {
    const std::string where = "JSON dataset: samples[" + std::to_string(k) + "]";
    if (!s.is_object() || !s.contains("x") || !s.contains("f"))
      throw ParseError(where + ": expected an object with \"x\" and \"f\"");
    if (!s["x"].is_array() || s["x"].size() != d)
      throw ParseError(where + ": \"x\" must hold exactly " + std::to_string(d) + " numbers");
    Vec x;
    for (const auto& c : s["x"]) {
      if (!c.is_number()) throw ParseError(where + ": non-numeric coordinate");
      x.push_back(c.get<double>());
      if (!std::isfinite(x.back())) throw ParseError(where + ": non-finite coordinate");
    }
    if (!s["f"].is_number()) throw ParseError(where + ": \"f\" must be a number");
    const double f = s["f"].get<double>();
    if (!std::isfinite(f)) throw ParseError(where + ": non-finite value");
    points.push_back(std::move(x));
    values.push_back(f);
    labels.push_back(k);
    ++k;
  }
  if (points.empty()) throw ParseError("JSON dataset: \"samples\" is empty");
  detail::check_duplicates(points, labels, "JSON dataset: ", "sample");
  return make_dataset(d, std::move(points), std::move(values));
}

// sniffs the format: a leading { means JSON, anything else CSV
inline Dataset parse_dataset(std::istream& in, std::optional<std::size_t> expected_dimension = {}) {
  int c;
  while ((c = in.peek()) != std::char_traits<char>::eof() &&
         std::isspace(static_cast<unsigned char>(c)))
    in.get();
  if (c == '{') return parse_dataset_json(in, expected_dimension);
  return parse_dataset_csv(in, expected_dimension);
}

inline Dataset load_dataset(const std::string& path,
                            std::optional<std::size_t> expected_dimension = {}) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset file '" + path + "'");
  try {
    return parse_dataset(in, expected_dimension);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void write_dataset_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t c = 0; c < data.dimension; ++c) out << "x" << (c + 1) << ",";
  out << "f\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double c : data.points[i]) out << detail::shortest(c) << ",";
    out << detail::shortest(data.values[i]) << "\n";
  }
}

inline Json dataset_to_json(const Dataset& data) {
  Json samples = Json::array();
  for (std::size_t i = 0; i < data.size(); ++i)
    samples.push_back(Json{{"x", data.points[i]}, {"f", data.values[i]}});
  return Json{{"dimension", data.dimension}, {"samples", std::move(samples)}};
}

inline void write_dataset_json(std::ostream& out, const Dataset& data) {
  out << dataset_to_json(data).dump(2) << "\n";
}

// Coefficient files: either a JSON array (or {"coefficients": [...]}) or
// plain whitespace-separated numbers.
inline Vec parse_coefficients(std::istream& in) {
  int c;
  while ((c = in.peek()) != std::char_traits<char>::eof() &&
         std::isspace(static_cast<unsigned char>(c)))
    in.get();
  Vec out;
  if (c == '[' || c == '{') {
    Json j;
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("coefficients: ") + e.what());
    }
    if (j.is_object()) {
      if (!j.contains("coefficients"))
        throw ParseError("coefficients: object form needs a \"coefficients\" array");
      j = j["coefficients"];
    }
    if (!j.is_array()) throw ParseError("coefficients: expected a JSON array");
    for (const auto& v : j) {
      if (!v.is_number()) throw ParseError("coefficients: non-numeric entry");
      out.push_back(v.get<double>());
      if (!std::isfinite(out.back())) throw ParseError("coefficients: non-finite entry");
    }
  } else {
    std::string tok;
    std::size_t k = 0;
    while (in >> tok) {
      ++k;
      double v;
      if (!detail::parse_double(tok, v))
        throw ParseError("coefficients: cannot parse token " + std::to_string(k) + " '" + tok +
                         "'");
      out.push_back(v);
    }
  }
  if (out.empty()) throw ParseError("coefficients: no values found");
  return out;
}

inline Vec load_coefficients(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open coefficients file '" + path + "'");
  try {
    return parse_coefficients(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace cheb
