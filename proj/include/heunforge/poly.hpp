#pragma once

// Dense univariate polynomials over Complex or GaussRational coefficients.
// Coefficients are stored constant term first; the zero polynomial has no
// coefficients and degree Poly::kZeroDegree.

#include "heunforge/scalar.hpp"

#include <algorithm>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace heunforge {

/// Relative threshold below which trailing float coefficients are dropped.
inline constexpr double kTrimThreshold = 1e-13;

template <Scalar T>
class Poly {
 public:
  static constexpr int kZeroDegree = -1;

  Poly() = default;
  Poly(std::initializer_list<T> coeffs) : coeffs_(coeffs) { canonicalize(); }
  explicit Poly(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) { canonicalize(); }

  static Poly constant(T c) { return Poly(std::vector<T>{std::move(c)}); }
  static Poly z() { return Poly({scalar<T>(0), scalar<T>(1)}); }
  static Poly monomial(T c, int power) {
    if (power < 0) throw std::invalid_argument("Poly::monomial: negative power");
    std::vector<T> v(static_cast<std::size_t>(power) + 1, scalar<T>(0));
    v.back() = std::move(c);
    return Poly(std::move(v));
  }
  /// (z - r1)(z - r2)...
  static Poly from_roots(std::span<const T> roots) {
    Poly p = constant(scalar<T>(1));
    for (const T& r : roots) p *= Poly({-r, scalar<T>(1)});
    return p;
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  std::span<const T> coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }

  /// Coefficient of z^k; zero outside the stored range.
  T coeff(int k) const {
    if (k < 0 || k > degree()) return scalar<T>(0);
    return coeffs_[static_cast<std::size_t>(k)];
  }
  T leading() const { return is_zero() ? scalar<T>(0) : coeffs_.back(); }

  double max_abs() const {
    double m = 0.0;
    for (const T& c : coeffs_) m = std::max(m, magnitude(c));
    return m;
  }

  /// Horner evaluation.
  T operator()(const T& z) const {
    T acc = scalar<T>(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  Poly& operator+=(const Poly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), scalar<T>(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    canonicalize();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), scalar<T>(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    canonicalize();
    return *this;
  }
  Poly& operator*=(const Poly& o) {
    *this = *this * o;
    return *this;
  }
  Poly& operator*=(const T& c) {
    for (T& v : coeffs_) v *= c;
    canonicalize();
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a) {
    Poly r = a;
    for (T& v : r.coeffs_) v = -v;
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> out(a.coeffs_.size() + b.coeffs_.size() - 1, scalar<T>(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Poly(std::move(out));
  }
  friend Poly operator*(Poly a, const T& c) { return a *= c; }
  friend Poly operator*(const T& c, Poly a) { return a *= c; }
  friend Poly operator/(Poly a, const T& c) {
    if (is_exact_zero(c)) throw std::domain_error("Poly: division by zero scalar");
    for (T& v : a.coeffs_) v = v / c;
    a.canonicalize();
    return a;
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void canonicalize() {
    if constexpr (is_exact_v<T>) {
      while (!coeffs_.empty() && is_exact_zero(coeffs_.back())) coeffs_.pop_back();
    } else {
      double cut = kTrimThreshold * max_abs();
      while (!coeffs_.empty() && magnitude(coeffs_.back()) <= cut) coeffs_.pop_back();
    }
  }

  std::vector<T> coeffs_;
};

template <Scalar T>
struct DivRem {
  Poly<T> quotient;
  Poly<T> remainder;
};

/// a = b*q + r with deg r < deg b.
template <Scalar T>
DivRem<T> divrem(const Poly<T>& a, const Poly<T>& b) {
  if (b.is_zero()) throw std::domain_error("divrem: division by the zero polynomial");
  if (a.degree() < b.degree()) return {Poly<T>{}, a};
  std::vector<T> rem(a.coeffs().begin(), a.coeffs().end());
  const int db = b.degree();
  const T lead = b.leading();
  std::vector<T> quo(static_cast<std::size_t>(a.degree() - db + 1), scalar<T>(0));
  for (int k = a.degree(); k >= db; --k) {
    T c = rem[static_cast<std::size_t>(k)] / lead;
    quo[static_cast<std::size_t>(k - db)] = c;
    for (int i = 0; i <= db; ++i) rem[static_cast<std::size_t>(k - db + i)] -= c * b.coeff(i);
    rem[static_cast<std::size_t>(k)] = scalar<T>(0);
  }
  rem.resize(static_cast<std::size_t>(db));
  return {Poly<T>(std::move(quo)), Poly<T>(std::move(rem))};
}

template <Scalar T>
Poly<T> derivative(const Poly<T>& a) {
  if (a.degree() < 1) return {};
  std::vector<T> out;
  out.reserve(a.size() - 1);
  for (int k = 1; k <= a.degree(); ++k) out.push_back(scalar<T>(k) * a.coeff(k));
  return Poly<T>(std::move(out));
}

template <Scalar T>
Poly<T> derivative(const Poly<T>& a, int order) {
  Poly<T> r = a;
  for (int i = 0; i < order; ++i) r = derivative(r);
  return r;
}

/// p(z + shift), the Taylor expansion about `shift`.
template <Scalar T>
Poly<T> taylor_shift(const Poly<T>& p, const T& shift) {
  Poly<T> out;
  const Poly<T> lin({shift, scalar<T>(1)});
  for (int k = p.degree(); k >= 0; --k) out = out * lin + Poly<T>::constant(p.coeff(k));
  return out;
}

template <Scalar T>
struct SqrtHead {
  Poly<T> root;
  Poly<T> remainder;
};

/// Square-root extraction from the top: root has degree deg(d)/2 and the
/// remainder d - root^2 has degree < deg(d)/2. The leading coefficient of
/// root is the principal square root of the leading coefficient of d.
template <Scalar T>
SqrtHead<T> sqrt_head(const Poly<T>& d) {
  if (d.is_zero()) return {};
  if (d.degree() % 2 != 0) throw std::domain_error("sqrt_head: odd degree");
  const int m = d.degree() / 2;
  std::vector<T> s(static_cast<std::size_t>(m) + 1, scalar<T>(0));
  if constexpr (is_exact_v<T>) {
    auto lead = exact_sqrt(d.leading());
    if (!lead) throw std::domain_error("sqrt_head: leading coefficient is not a square in Q(i)");
    s[static_cast<std::size_t>(m)] = *lead;
  } else {
    s[static_cast<std::size_t>(m)] = principal_sqrt(d.leading());
  }
  const T two_lead = scalar<T>(2) * s[static_cast<std::size_t>(m)];
  for (int k = m - 1; k >= 0; --k) {
    // coefficient of z^(m+k) in s^2 must equal d_(m+k)
    T acc = d.coeff(m + k);
    for (int i = k + 1; i < m; ++i) {
      int j = m + k - i;
      if (j > k && j <= m - 1) acc -= s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)];
    }
    s[static_cast<std::size_t>(k)] = acc / two_lead;
  }
  Poly<T> root(std::move(s));
  return {root, d - root * root};
}

/// All complex roots with multiplicity (companion-matrix eigenvalues,
/// Newton-polished).
std::vector<Complex> roots(const Poly<Complex>& a);

template <Scalar T>
Poly<Complex> to_complex(const Poly<T>& p) {
  if constexpr (std::is_same_v<T, Complex>) {
    return p;
  } else {
    std::vector<Complex> v;
    v.reserve(p.size());
    for (const T& c : p.coeffs()) v.push_back(to_complex(c));
    return Poly<Complex>(std::move(v));
  }
}

template <Scalar T>
std::vector<Complex> roots(const Poly<T>& a) {
  return roots(to_complex(a));
}

/// Coefficientwise |a_k - b_k| <= tol * max(1, max|a|, max|b|).
template <Scalar T>
bool approx_equal(const Poly<T>& a, const Poly<T>& b, double tol) {
  if constexpr (is_exact_v<T>) {
    return a == b;
  } else {
    const double scale = std::max({1.0, a.max_abs(), b.max_abs()});
    const int deg = std::max(a.degree(), b.degree());
    for (int k = 0; k <= deg; ++k)
      if (std::abs(a.coeff(k) - b.coeff(k)) > tol * scale) return false;
    return true;
  }
}

/// Zero test for a polynomial that is expected to vanish, measured against
/// a reference scale (exact zero in exact mode).
template <Scalar T>
bool negligible(const Poly<T>& p, double scale, double tol) {
  if constexpr (is_exact_v<T>) {
    return p.is_zero();
  } else {
    return p.max_abs() <= tol * std::max(1.0, scale);
  }
}

}  // namespace heunforge
