#pragma once

// Brute-force checks: Frobenius recurrences about a point, series
// coefficients, termination conditions in one unknown, and pointwise ODE
// residuals of assembled eigenfunctions.

#include "heunforge/errors.hpp"
#include "heunforge/nu_engine.hpp"
#include "heunforge/poly.hpp"

#include <string>
#include <vector>

namespace heunforge::series {

/// P2 w'' + P1 w' + P0 w = 0
template <Scalar T>
struct OdeForm {
  Poly<T> p2;
  Poly<T> p1;
  Poly<T> p0;
};

template <Scalar T>
OdeForm<Complex> to_complex(const OdeForm<T>& ode) {
  return {heunforge::to_complex(ode.p2), heunforge::to_complex(ode.p1), heunforge::to_complex(ode.p0)};
}

/// A form whose P0 is base.p0 + u * p0_slope for an unknown scalar u.
template <Scalar T>
struct OdeFamily {
  OdeForm<T> base;
  Poly<T> p0_slope;

  OdeForm<T> at(const T& u) const { return {base.p2, base.p1, base.p0 + p0_slope * u}; }
};

/// Coefficient relation for w = (z - point)^exponent * sum_j c_j (z - point)^j:
///   bands[0](m) c_m = - sum_{k=1..bandwidth} bands[k](m - k) c_{m-k}
/// with each band a polynomial in the index j.
template <Scalar T>
struct Recurrence {
  T point{};
  T exponent{};
  int bandwidth = 0;
  std::vector<Poly<T>> bands;
};

namespace detail {

template <Scalar T>
int order_at_zero(const Poly<T>& p) {
  if (p.is_zero()) return 1 << 20;
  for (int k = 0; k <= p.degree(); ++k) {
    if constexpr (is_exact_v<T>) {
      if (!is_exact_zero(p.coeff(k))) return k;
    } else {
      if (magnitude(p.coeff(k)) > 1e-14 * p.max_abs()) return k;
    }
  }
  return 1 << 20;
}

/// Coefficient of (z-point)^(j + rho + d) contributed by c_j, as a
/// polynomial in j, for shifted coefficient polynomials a (P2), b (P1), c (P0).
template <Scalar T>
Poly<T> band_poly(const Poly<T>& a, const Poly<T>& b, const Poly<T>& c, int d, const T& rho) {
  const Poly<T> jr({rho, scalar<T>(1)});                    // j + rho
  const Poly<T> jr1({rho - scalar<T>(1), scalar<T>(1)});  // j + rho - 1
  Poly<T> out = Poly<T>::constant(c.coeff(d));
  out += jr * b.coeff(d + 1);
  out += (jr * jr1) * a.coeff(d + 2);
  return out;
}

}  // namespace detail

/// Recurrence for a Frobenius series about `point` with the given indicial
/// exponent. Throws InvalidInput when the point is an irregular singular
/// point or the exponent is not an indicial root.
template <Scalar T>
Recurrence<T> frobenius_recurrence(const OdeForm<T>& ode, const T& point, const T& exponent) {
  if (ode.p2.is_zero()) throw InvalidInput("ODE leading coefficient P2 is identically zero");
  const Poly<T> a = taylor_shift(ode.p2, point);
  const Poly<T> b = taylor_shift(ode.p1, point);
  const Poly<T> c = taylor_shift(ode.p0, point);
  const int r = detail::order_at_zero(a);
  if (r > 2 || detail::order_at_zero(b) < r - 1 || detail::order_at_zero(c) < r - 2)
    throw InvalidInput("expansion point " + to_string(point) + " is an irregular singular point");
  const int d_min = r - 2;
  const int d_max = std::max({a.degree() - 2, b.degree() - 1, c.degree()});
  Recurrence<T> rec;
  rec.point = point;
  rec.exponent = exponent;
  rec.bandwidth = d_max - d_min;
  for (int d = d_min; d <= d_max; ++d) rec.bands.push_back(detail::band_poly(a, b, c, d, exponent));
  const T indicial = rec.bands[0](scalar<T>(0));
  const double scale = std::max(1.0, rec.bands[0].max_abs());
  if (is_exact_v<T> ? !is_exact_zero(indicial) : magnitude(indicial) > 1e-10 * scale)
    throw InvalidInput("exponent " + to_string(exponent) + " is not an indicial root at " +
                       to_string(point));
  return rec;
}

/// c_0 = seed and `count` coefficients in total. Throws Unsupported when the
/// leading band vanishes at some j >= 1 (a second indicial root there).
template <Scalar T>
std::vector<T> series_coeffs(const Recurrence<T>& rec, const T& seed, int count) {
  if (count < 1) throw InvalidInput("series_coeffs: count must be at least 1");
  std::vector<T> c;
  c.reserve(static_cast<std::size_t>(count));
  c.push_back(seed);
  const double scale = std::max(1.0, rec.bands[0].max_abs());
  for (int m = 1; m < count; ++m) {
    const T lead = rec.bands[0](scalar<T>(m));
    if (is_exact_zero(lead) || (!is_exact_v<T> && magnitude(lead) <= 1e-13 * scale * m * m))
      throw Unsupported("indicial collision: the recurrence leading factor vanishes at j = " +
                        std::to_string(m));
    T acc = scalar<T>(0);
    for (int k = 1; k <= rec.bandwidth && k <= m; ++k)
      acc += rec.bands[static_cast<std::size_t>(k)](scalar<T>(m - k)) * c[static_cast<std::size_t>(m - k)];
    c.push_back(-acc / lead);
  }
  return c;
}

/// c_{n+1}(u) for the exponent-0 series about `point` with c_0 = 1: a
/// polynomial of degree <= n+1 in the unknown whose roots make the series a
/// polynomial of degree n (together with the vanishing of the next
/// `bandwidth - 1` coefficients, which the class relation provides).
template <Scalar T>
Poly<T> termination_polynomial(const OdeFamily<T>& family, int n, const T& point = scalar<T>(0)) {
  if (n < 0) throw InvalidInput("termination: n must be nonnegative");
  const Recurrence<T> rec = frobenius_recurrence(family.base, point, scalar<T>(0));
  const Poly<T> slope = taylor_shift(family.p0_slope, point);
  // band k sees the shifted P0 slope coefficient at offset dmin + k, where
  // dmin follows from the order of P2 at the point
  const int r = detail::order_at_zero(taylor_shift(family.base.p2, point));
  const int dmin = r - 2;
  if (!is_exact_zero(slope.coeff(dmin)) &&
      (is_exact_v<T> || magnitude(slope.coeff(dmin)) > 1e-14 * std::max(1.0, slope.max_abs())))
    throw InvalidInput("the unknown enters the indicial band; c_j would not be polynomial in it");
  if (slope.degree() > dmin + rec.bandwidth)
    throw InvalidInput("the unknown's P0 term exceeds the recurrence bandwidth");

  std::vector<Poly<T>> c;
  c.push_back(Poly<T>::constant(scalar<T>(1)));
  for (int m = 1; m <= n + 1; ++m) {
    const T lead = rec.bands[0](scalar<T>(m));
    if (is_exact_zero(lead) || (!is_exact_v<T> && magnitude(lead) <= 1e-13 * std::max(1.0, rec.bands[0].max_abs()) * m * m))
      throw Unsupported("indicial collision: the recurrence leading factor vanishes at j = " +
                        std::to_string(m));
    Poly<T> acc;
    for (int k = 1; k <= rec.bandwidth && k <= m; ++k) {
      const Poly<T> band({rec.bands[static_cast<std::size_t>(k)](scalar<T>(m - k)), slope.coeff(dmin + k)});
      acc += band * c[static_cast<std::size_t>(m - k)];
    }
    c.push_back(-acc / lead);
  }
  return c.back();
}

/// First candidate point where the exponent-0 recurrence is usable up to
/// index n + bandwidth (regular singular, no indicial collision). A
/// polynomial solution is a polynomial about any point, so the termination
/// condition may be taken at whichever singular point is not resonant.
template <Scalar T>
T expansion_point(const OdeForm<T>& ode, int n, const std::vector<T>& candidates) {
  for (const T& pt : candidates) {
    Recurrence<T> rec;
    try {
      rec = frobenius_recurrence(ode, pt, scalar<T>(0));
    } catch (const InvalidInput&) {
      continue;
    }
    const double scale = std::max(1.0, rec.bands[0].max_abs());
    bool clear = true;
    for (int m = 1; m <= n + rec.bandwidth && clear; ++m) {
      const T lead = rec.bands[0](scalar<T>(m));
      clear = !(is_exact_zero(lead) || (!is_exact_v<T> && magnitude(lead) <= 1e-13 * scale * m * m));
    }
    if (clear) return pt;
  }
  throw Unsupported("exponent 0 is resonant at every candidate expansion point");
}

struct TerminationOptions {
  double validation_tol = 1e-8;
};

template <Scalar T>
struct Termination {
  Poly<T> condition;           // c_{n+1}(u)
  std::vector<Complex> roots;  // all roots, validated
  /// max over the roots of max_{k=1..bandwidth} |c_{n+k}| / max_{j<=n} |c_j|
  double worst_tail = 0.0;
};

/// |c_{n+1..n+bandwidth}| relative to max_{j<=n} |c_j| for the numeric series.
double termination_tail(const OdeForm<Complex>& ode, int n, Complex point = 0.0);

/// All values of the unknown for which the exponent-0 series about `point`
/// terminates at degree n. Every root is re-checked on the numeric series;
/// a failing root throws VerificationError.
template <Scalar T>
Termination<T> termination_solve(const OdeFamily<T>& family, int n, const TerminationOptions& opts = {},
                                 const T& point = scalar<T>(0)) {
  Termination<T> out;
  out.condition = termination_polynomial(family, n, point);
  if (out.condition.is_zero())
    throw NoSolution("termination condition vanishes identically; the unknown is not determined");
  if (out.condition.degree() < 1) return out;
  out.roots = roots(out.condition);
  const OdeFamily<Complex> cf{to_complex(family.base), heunforge::to_complex(family.p0_slope)};
  for (Complex u : out.roots) {
    const double tail = termination_tail(cf.at(u), n, heunforge::to_complex(point));
    out.worst_tail = std::max(out.worst_tail, tail);
    if (!(tail <= opts.validation_tol))
      throw VerificationError("termination root " + to_string(u) + " leaves a series tail of " +
                              std::to_string(tail));
  }
  return out;
}

/// psi = phi(z) p(z), with phi given by its logarithmic derivative.
struct Eigenstate {
  std::string family;  // "heun", "che" or "nu"
  std::string label;   // class label
  int n = 0;
  Complex accessory{};  // q (Heun) or mu (CHE)
  nu::PhiFactor prefactor;
  Poly<Complex> polynomial;
  double residual = -1.0;  // filled in by ode_residual; -1 until checked
};

struct ResidualOptions {
  int samples = 50;
  Complex center{0.5, 0.0};
  double radius = 0.45;
  double clearance = 0.1;
};

/// Sample points on the contour, pushed off the roots of P2.
std::vector<Complex> residual_contour(const Poly<Complex>& p2, const ResidualOptions& opts = {});

/// max over contour points of |P2 psi'' + P1 psi' + P0 psi| / max(|each term|).
double ode_residual(const Eigenstate& state, const OdeForm<Complex>& ode, const ResidualOptions& opts = {});

}  // namespace heunforge::series
