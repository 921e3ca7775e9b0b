#pragma once

// Coefficient backends: binary64 complex numbers and exact Gaussian rationals.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace heunforge {

using Complex = std::complex<double>;
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Complex number with rational real and imaginary parts.
struct GaussRational {
  Rational re{0};
  Rational im{0};

  GaussRational() = default;
  GaussRational(Rational r) : re(std::move(r)) {}  // NOLINT: implicit on purpose
  GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  GaussRational(long long v) : re(v) {}  // NOLINT

  GaussRational& operator+=(const GaussRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  GaussRational& operator/=(const GaussRational& o);

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  bool is_zero() const { return re == 0 && im == 0; }
  GaussRational conj() const { return {re, -im}; }
  Complex to_complex() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }
};

inline GaussRational& GaussRational::operator/=(const GaussRational& o) {
  if (o.is_zero()) throw std::domain_error("GaussRational: division by zero");
  Rational den = o.re * o.re + o.im * o.im;
  Rational r = (re * o.re + im * o.im) / den;
  Rational i = (im * o.re - re * o.im) / den;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static Complex from_int(long long v) { return {static_cast<double>(v), 0.0}; }
  static Complex from_ratio(long long num, long long den) {
    return {static_cast<double>(num) / static_cast<double>(den), 0.0};
  }
  static Complex to_complex(const Complex& v) { return v; }
  static double magnitude(const Complex& v) { return std::abs(v); }
  static bool is_zero(const Complex& v) { return v == Complex{}; }
};

template <>
struct ScalarTraits<GaussRational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
  static GaussRational from_int(long long v) { return GaussRational(v); }
  static GaussRational from_ratio(long long num, long long den) {
    return GaussRational(Rational(num, den));
  }
  static Complex to_complex(const GaussRational& v) { return v.to_complex(); }
  static double magnitude(const GaussRational& v) { return std::abs(v.to_complex()); }
  static bool is_zero(const GaussRational& v) { return v.is_zero(); }
};

template <class T>
concept Scalar = requires(const T& a, const T& b) {
  { ScalarTraits<T>::exact } -> std::convertible_to<bool>;
  { a + b } -> std::convertible_to<T>;
  { a * b } -> std::convertible_to<T>;
  { a / b } -> std::convertible_to<T>;
};

template <Scalar T>
inline constexpr bool is_exact_v = ScalarTraits<T>::exact;

template <Scalar T>
T scalar(long long v) {
  return ScalarTraits<T>::from_int(v);
}

template <Scalar T>
T ratio(long long num, long long den) {
  return ScalarTraits<T>::from_ratio(num, den);
}

template <Scalar T>
Complex to_complex(const T& v) {
  return ScalarTraits<T>::to_complex(v);
}

template <Scalar T>
double magnitude(const T& v) {
  return ScalarTraits<T>::magnitude(v);
}

template <Scalar T>
bool is_exact_zero(const T& v) {
  return ScalarTraits<T>::is_zero(v);
}

/// |a - b| <= tol * max(1, |a|, |b|) for floats; equality for exact values.
template <Scalar T>
bool near(const T& a, const T& b, double tol) {
  if constexpr (is_exact_v<T>) {
    return a == b;
  } else {
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= tol * scale;
  }
}

/// Best rational approximation with denominator <= max_den; empty when the
/// approximation misses x by more than tol * max(1, |x|).
std::optional<Rational> rationalize(double x, std::int64_t max_den = 1'000'000,
                                    double tol = 1e-12);

/// Snap a float complex value to a Gaussian rational (see rationalize).
std::optional<GaussRational> rationalize(const Complex& z, std::int64_t max_den = 1'000'000,
                                         double tol = 1e-12);

/// Exact square root in Q(i); principal branch (Re > 0, or Re == 0 and Im >= 0).
std::optional<GaussRational> exact_sqrt(const GaussRational& w);

/// Principal square root; complex sqrt for floats.
inline Complex principal_sqrt(const Complex& z) { return std::sqrt(z); }

std::string to_string(const Rational& r);
std::string to_string(const GaussRational& z);
std::string to_string(const Complex& z);

}  // namespace heunforge
