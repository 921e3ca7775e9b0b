#include "heunforge/report.hpp"

#include <limits>
#include <sstream>
#include <utility>
#include <vector>

namespace heunforge::report {

namespace {

Json bigint_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

BigInt bigint_from_json(const Json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  throw InvalidInput("expected an integer or a decimal string");
}

void flatten(const Json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    // {re, im} leaves read better as one value
    if (j.size() == 2 && j.contains("re") && j.contains("im") && j["re"].is_number()) {
      out.emplace_back(path, to_string(complex_from_json(j)));
      return;
    }
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
  } else if (j.is_string()) {
    out.emplace_back(path, j.get<std::string>());
  } else {
    out.emplace_back(path, j.dump());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::optional<Format> parse_format(std::string_view s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "table") return Format::table;
  return std::nullopt;
}

Json to_json(const Complex& z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json to_json(const Rational& r) {
  return Json{{"num", bigint_json(numerator(r))}, {"den", bigint_json(denominator(r))}};
}

Json to_json(const GaussRational& z) { return Json{{"re", to_json(z.re)}, {"im", to_json(z.im)}}; }

Complex complex_from_json(const Json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

GaussRational gauss_from_json(const Json& j) {
  auto rat = [](const Json& r) {
    return Rational(bigint_from_json(r.at("num")), bigint_from_json(r.at("den")));
  };
  return {rat(j.at("re")), rat(j.at("im"))};
}

Json phi_json(const nu::PhiFactor& phi) {
  Json powers = Json::array();
  for (const nu::PowerFactor& f : phi.powers)
    powers.push_back(Json{{"point", to_json(f.point)}, {"exponent", to_json(f.exponent)}});
  return Json{{"exponential", poly_json(phi.exponential_part)}, {"powers", powers}};
}

Json eigenstate_json(const series::Eigenstate& st) {
  return Json{{"family", st.family},
              {"class", st.label},
              {"n", st.n},
              {"accessory", to_json(st.accessory)},
              {"prefactor", phi_json(st.prefactor)},
              {"polynomial", poly_json(st.polynomial)},
              {"residual", st.residual}};
}

std::string render(const Json& doc, Format f) {
  if (f == Format::json) return doc.dump(2) + "\n";
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(doc, "", rows);
  std::ostringstream os;
  if (f == Format::csv) {
    os << "key,value\n";
    for (const auto& [k, v] : rows) os << csv_field(k) << ',' << csv_field(v) << '\n';
    return os.str();
  }
  std::size_t width = 0;
  for (const auto& row : rows) width = std::max(width, row.first.size());
  for (const auto& [k, v] : rows) os << k << std::string(width - k.size() + 2, ' ') << v << '\n';
  return os.str();
}

}  // namespace heunforge::report
