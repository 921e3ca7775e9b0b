#include "heunforge/poly_text.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace heunforge {

namespace {

Rational pow10(int e) {
  Rational r(1);
  for (int i = 0; i < std::abs(e); ++i) r *= 10;
  return e < 0 ? Rational(1) / r : r;
}

Rational decimal_to_rational(std::string_view s) {
  // [digits][.digits][e[+-]digits]
  std::size_t pos = 0;
  BigInt mantissa = 0;
  int scale = 0;
  bool seen_dot = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c == '.') {
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      if (seen_dot) --scale;
    } else {
      break;
    }
  }
  int exponent = 0;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) exponent = std::stoi(std::string(s.substr(pos + 1)));
  return Rational(mantissa) * pow10(scale + exponent);
}

template <Scalar T>
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Poly<T> parse() {
    Poly<T> p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("polynomial parse error at position " + std::to_string(pos_) + ": " + what +
                     " in \"" + std::string(text_) + "\"");
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Poly<T> expr() {
    Poly<T> acc = term();
    for (;;) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        acc += term();
      } else if (c == '-') {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  static bool starts_primary(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'i' || c == 'z' || c == '(';
  }

  Poly<T> term() {
    Poly<T> acc = unary();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        acc *= unary();
      } else if (c == '/') {
        ++pos_;
        Poly<T> d = unary();
        if (d.degree() != 0) fail("division by a non-constant or zero expression");
        acc = acc / d.coeff(0);
      } else if (starts_primary(c)) {
        acc *= power();  // implicit multiplication: 2z, 3i, (z-1)(z-2)
      } else {
        return acc;
      }
    }
  }

  Poly<T> unary() {
    char c = peek();
    if (c == '-') {
      ++pos_;
      return -unary();
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  Poly<T> power() {
    Poly<T> base = primary();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a nonnegative integer exponent");
      int e = std::stoi(std::string(text_.substr(start, pos_ - start)));
      Poly<T> r = Poly<T>::constant(scalar<T>(1));
      for (int i = 0; i < e; ++i) r *= base;
      return r;
    }
    return base;
  }

  Poly<T> primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Poly<T> p = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return p;
    }
    if (c == 'z') {
      ++pos_;
      return Poly<T>::z();
    }
    if (c == 'i') {
      ++pos_;
      return Poly<T>::constant(imaginary_unit());
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Poly<T>::constant(number());
    fail(c == '\0' ? "unexpected end of input" : std::string("unexpected '") + c + "'");
  }

  T number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      std::size_t digits = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (digits == pos_) pos_ = save;
    }
    std::string_view lit = text_.substr(start, pos_ - start);
    if (lit.find_first_of("0123456789") == std::string_view::npos) fail("malformed number");
    T value;
    if constexpr (is_exact_v<T>) {
      value = GaussRational(decimal_to_rational(lit));
    } else {
      value = Complex(std::stod(std::string(lit)), 0.0);
    }
    return value;
  }

  static T imaginary_unit() {
    if constexpr (is_exact_v<T>) {
      return GaussRational(0, 1);
    } else {
      return Complex(0.0, 1.0);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

template <Scalar T>
Poly<T> parse_poly(std::string_view text) {
  return Parser<T>(text).parse();
}

template <Scalar T>
T parse_scalar(std::string_view text) {
  Poly<T> p = parse_poly<T>(text);
  if (p.degree() > 0) throw ParseError("expected a constant, got a polynomial in z: " + std::string(text));
  return p.coeff(0);
}

template <>
std::string format_scalar<Complex>(const Complex& v) {
  return to_string(v);
}

template <>
std::string format_scalar<GaussRational>(const GaussRational& v) {
  return to_string(v);
}

namespace {

template <Scalar T>
bool is_negative_real(const T& v) {
  if constexpr (is_exact_v<T>) {
    return v.im == 0 && v.re < 0;
  } else {
    return v.imag() == 0.0 && v.real() < 0.0;
  }
}

template <Scalar T>
bool is_real(const T& v) {
  if constexpr (is_exact_v<T>) {
    return v.im == 0;
  } else {
    return v.imag() == 0.0;
  }
}

}  // namespace

template <Scalar T>
std::string format_poly(const Poly<T>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (int k = 0; k <= p.degree(); ++k) {
    T c = p.coeff(k);
    if (is_exact_zero(c)) continue;
    bool negative = is_negative_real(c);
    T shown = negative ? T(-c) : c;
    if (!first) out += negative ? " - " : " + ";
    else if (negative) out += "-";
    first = false;
    std::string coef = format_scalar<T>(shown);
    bool unit = is_real(shown) && coef == "1";
    if (!is_real(shown)) coef = "(" + coef + ")";
    if (k == 0) {
      out += coef;
      continue;
    }
    if (!unit) out += coef + "*";
    out += "z";
    if (k > 1) out += "^" + std::to_string(k);
  }
  return out;
}

template Poly<Complex> parse_poly<Complex>(std::string_view);
template Poly<GaussRational> parse_poly<GaussRational>(std::string_view);
template Complex parse_scalar<Complex>(std::string_view);
template GaussRational parse_scalar<GaussRational>(std::string_view);
template std::string format_poly<Complex>(const Poly<Complex>&);
template std::string format_poly<GaussRational>(const Poly<GaussRational>&);

}  // namespace heunforge
