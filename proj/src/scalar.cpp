#include "heunforge/scalar.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cmath>
#include <sstream>

namespace heunforge {

namespace {

std::optional<BigInt> exact_isqrt(const BigInt& v) {
  if (v < 0) return std::nullopt;
  BigInt r = boost::multiprecision::sqrt(v);
  if (r * r != v) return std::nullopt;
  return r;
}

std::optional<Rational> exact_sqrt(const Rational& v) {
  if (v < 0) return std::nullopt;
  auto n = exact_isqrt(boost::multiprecision::numerator(v));
  auto d = exact_isqrt(boost::multiprecision::denominator(v));
  if (!n || !d) return std::nullopt;
  return Rational(*n, *d);
}

}  // namespace

std::optional<Rational> rationalize(double x, std::int64_t max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  // continued-fraction convergents
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double frac = x;
  Rational best;
  bool have = false;
  for (int iter = 0; iter < 64; ++iter) {
    double a = std::floor(frac);
    if (std::abs(a) > 9e15) break;
    auto ai = static_cast<std::int64_t>(a);
    std::int64_t h2 = ai * h1 + h0;
    std::int64_t k2 = ai * k1 + k0;
    if (k2 > max_den || k2 <= 0) break;
    best = Rational(h2, k2);
    have = true;
    if (std::abs(static_cast<double>(h2) / static_cast<double>(k2) - x) <=
        tol * std::max(1.0, std::abs(x)))
      return best;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    double rest = frac - a;
    if (rest == 0.0) break;
    frac = 1.0 / rest;
  }
  if (have && std::abs(static_cast<double>(best) - x) <= tol * std::max(1.0, std::abs(x)))
    return best;
  return std::nullopt;
}

std::optional<GaussRational> rationalize(const Complex& z, std::int64_t max_den, double tol) {
  auto re = rationalize(z.real(), max_den, tol);
  auto im = rationalize(z.imag(), max_den, tol);
  if (!re || !im) return std::nullopt;
  return GaussRational(*re, *im);
}

std::optional<GaussRational> exact_sqrt(const GaussRational& w) {
  if (w.im == 0) {
    if (w.re >= 0) {
      auto r = exact_sqrt(w.re);
      if (!r) return std::nullopt;
      return GaussRational(*r, 0);
    }
    auto r = exact_sqrt(Rational(-w.re));
    if (!r) return std::nullopt;
    return GaussRational(0, *r);
  }
  // (a+bi)^2 = x+iy  =>  a^2 = (x+|w|)/2, b = y/(2a)
  auto modulus = exact_sqrt(Rational(w.re * w.re + w.im * w.im));
  if (!modulus) return std::nullopt;
  auto a = exact_sqrt(Rational((w.re + *modulus) / 2));
  if (!a || *a == 0) return std::nullopt;
  Rational b = w.im / (2 * *a);
  return GaussRational(*a, b);
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(r);
  if (boost::multiprecision::denominator(r) != 1) os << '/' << boost::multiprecision::denominator(r);
  return os.str();
}

std::string to_string(const GaussRational& z) {
  if (z.im == 0) return to_string(z.re);
  std::string im = to_string(z.im >= 0 ? z.im : Rational(-z.im));
  std::string sign = z.im >= 0 ? "+" : "-";
  if (z.re == 0) return (z.im >= 0 ? "" : "-") + im + "i";
  return to_string(z.re) + sign + im + "i";
}

std::string to_string(const Complex& z) {
  std::ostringstream os;
  os.precision(17);
  if (z.imag() == 0.0) {
    os << z.real();
    return os.str();
  }
  if (z.real() != 0.0) os << z.real() << (z.imag() >= 0 || std::isnan(z.imag()) ? "+" : "");
  os << z.imag() << 'i';
  return os.str();
}

}  // namespace heunforge
