#pragma once

// JSON documents for CLI output, plus flat CSV / table renderings of them.
// Complex values serialize as {re, im}; exact rationals as {num, den} with
// 64-bit integers when they fit and decimal strings otherwise.

#include "heunforge/nu_engine.hpp"
#include "heunforge/poly_text.hpp"
#include "heunforge/series_oracle.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace heunforge::report {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum class Format { json, csv, table };
std::optional<Format> parse_format(std::string_view s);

Json to_json(const Complex& z);
Json to_json(const Rational& r);
Json to_json(const GaussRational& z);

Complex complex_from_json(const Json& j);
GaussRational gauss_from_json(const Json& j);

template <Scalar T>
Json poly_json(const Poly<T>& p) {
  Json coeffs = Json::array();
  for (const T& c : p.coeffs()) coeffs.push_back(to_json(c));
  return Json{{"text", format_poly(p)}, {"degree", p.degree()}, {"coeffs", coeffs}};
}

template <Scalar T>
Json branch_json(const nu::PiBranch<T>& b) {
  return Json{{"sign", nu::to_string(b.sign)}, {"g", poly_json(b.g)},   {"pi", poly_json(b.pi)},
              {"tau", poly_json(b.tau)},       {"h", poly_json(b.h)}};
}

Json phi_json(const nu::PhiFactor& phi);
Json eigenstate_json(const series::Eigenstate& st);

/// Whole document in the requested format. CSV and table list one leaf per
/// row, keyed by its JSON path.
std::string render(const Json& doc, Format f);

}  // namespace heunforge::report
