#pragma once

// Nikiforov-Uvarov reduction, classic and extended.
//
// An equation  psi'' + (tau~/sigma) psi' + (sigma~/sigma^2) psi = 0  is
// reduced by psi = phi(z) y(z), phi'/phi = pi/sigma, to
//
//     sigma y'' + tau y' + h y = 0,   tau = tau~ + 2 pi,   h = g + pi'
//
// where pi = (sigma' - tau~)/2 +- sqrt(((sigma' - tau~)/2)^2 - sigma~ + g sigma)
// and g is chosen so that the radicand is a perfect square. Classic mode
// bounds the degrees of (tau~, sigma, sigma~) by (1, 2, 2) and g is a
// constant k; extended mode allows (2, 3, 4) with g linear.

#include "heunforge/errors.hpp"
#include "heunforge/poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace heunforge::nu {

enum class Mode { classic, extended };
enum class Sign { plus, minus };

inline const char* to_string(Mode m) { return m == Mode::classic ? "classic" : "extended"; }
inline const char* to_string(Sign s) { return s == Sign::plus ? "+" : "-"; }

struct DegreeBounds {
  int tau_tilde;
  int sigma;
  int sigma_tilde;
  int g;
};

inline DegreeBounds bounds(Mode m) {
  return m == Mode::classic ? DegreeBounds{1, 2, 2, 0} : DegreeBounds{2, 3, 4, 1};
}

template <Scalar T>
struct NuEquation {
  Poly<T> tau_tilde;
  Poly<T> sigma;
  Poly<T> sigma_tilde;
  Mode mode = Mode::extended;
};

template <Scalar T>
void validate(const NuEquation<T>& eq) {
  const DegreeBounds b = bounds(eq.mode);
  if (eq.sigma.is_zero()) throw InvalidInput("sigma must not be identically zero");
  auto check = [&](const Poly<T>& p, int bound, const char* name) {
    if (p.degree() > bound)
      throw InvalidInput(std::string(name) + " has degree " + std::to_string(p.degree()) +
                         ", above the " + to_string(eq.mode) + " bound " + std::to_string(bound));
  };
  check(eq.tau_tilde, b.tau_tilde, "tau~");
  check(eq.sigma, b.sigma, "sigma");
  check(eq.sigma_tilde, b.sigma_tilde, "sigma~");
}

template <Scalar T>
NuEquation<Complex> to_complex(const NuEquation<T>& eq) {
  return {heunforge::to_complex(eq.tau_tilde), heunforge::to_complex(eq.sigma),
          heunforge::to_complex(eq.sigma_tilde), eq.mode};
}

template <Scalar T>
struct PiBranch {
  Poly<T> g;  // the constant k in classic mode
  Sign sign = Sign::plus;
  Poly<T> pi;
  Poly<T> tau;
  Poly<T> h;  // constant lambda = k + pi' in classic mode
  Poly<T> s;  // square root of the radicand
};

template <Scalar T>
PiBranch<Complex> to_complex(const PiBranch<T>& b) {
  return {heunforge::to_complex(b.g), b.sign,
          heunforge::to_complex(b.pi), heunforge::to_complex(b.tau),
          heunforge::to_complex(b.h), heunforge::to_complex(b.s)};
}

/// (sigma' - tau~) / 2
template <Scalar T>
Poly<T> half_gap(const NuEquation<T>& eq) {
  return (derivative(eq.sigma) - eq.tau_tilde) / scalar<T>(2);
}

/// ((sigma' - tau~)/2)^2 - sigma~ + g sigma
template <Scalar T>
Poly<T> radicand(const NuEquation<T>& eq, const Poly<T>& g) {
  validate(eq);
  if (g.degree() > bounds(eq.mode).g)
    throw InvalidInput("g has degree " + std::to_string(g.degree()) + ", above the " +
                       to_string(eq.mode) + " bound " + std::to_string(bounds(eq.mode).g));
  const Poly<T> a = half_gap(eq);
  return a * a - eq.sigma_tilde + g * eq.sigma;
}

/// sigma~ + pi^2 + pi (tau~ - sigma') + pi' sigma
template <Scalar T>
Poly<T> sigma_bar(const NuEquation<T>& eq, const Poly<T>& pi) {
  return eq.sigma_tilde + pi * pi + pi * (eq.tau_tilde - derivative(eq.sigma)) +
         derivative(pi) * eq.sigma;
}

/// Relative tolerance for float perfect-square and divisibility checks.
inline constexpr double kBranchTolerance = 1e-10;

/// Square root of the radicand for a given g, or nullopt when it is not a
/// perfect square of a polynomial within the mode's pi-degree bound.
template <Scalar T>
std::optional<Poly<T>> radicand_root(const NuEquation<T>& eq, const Poly<T>& g) {
  const Poly<T> rad = radicand(eq, g);
  if (rad.is_zero()) return Poly<T>{};
  if (rad.degree() % 2 != 0) return std::nullopt;
  SqrtHead<T> sq;
  try {
    sq = sqrt_head(rad);
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
  const double scale = std::max({rad.max_abs(), half_gap(eq).max_abs() * half_gap(eq).max_abs(),
                                 eq.sigma_tilde.max_abs()});
  if (!negligible(sq.remainder, scale, kBranchTolerance)) return std::nullopt;
  return sq.root;
}

/// Assemble the branch for an admissible g. Throws NoSolution when the
/// radicand is not a perfect square.
template <Scalar T>
PiBranch<T> make_branch(const NuEquation<T>& eq, const Poly<T>& g, Sign sign) {
  auto s = radicand_root(eq, g);
  if (!s) throw NoSolution("radicand is not a perfect square for this g");
  PiBranch<T> b;
  b.g = g;
  b.sign = sign;
  b.s = *s;
  b.pi = sign == Sign::plus ? half_gap(eq) + *s : half_gap(eq) - *s;
  b.tau = eq.tau_tilde + scalar<T>(2) * b.pi;
  b.h = g + derivative(b.pi);
  return b;
}

template <Scalar T>
struct Reduced {
  Poly<T> tau;
  Poly<T> h;
};

/// sigma y'' + tau y' + h y = 0 with h = sigma_bar / sigma. Throws
/// VerificationError when the division leaves a remainder (an inadmissible,
/// numerically spurious branch).
template <Scalar T>
Reduced<T> reduce(const NuEquation<T>& eq, const PiBranch<T>& b) {
  const Poly<T> bar = sigma_bar(eq, b.pi);
  DivRem<T> qr = divrem(bar, eq.sigma);
  if (!negligible(qr.remainder, std::max(bar.max_abs(), eq.sigma_tilde.max_abs()), kBranchTolerance))
    throw VerificationError("sigma_bar is not divisible by sigma for this branch");
  return {eq.tau_tilde + scalar<T>(2) * b.pi, qr.quotient};
}

template <Scalar T>
struct QuantizationRelation {
  int n = 0;
  /// Coefficient of z in h - h_n (extended), or lambda - lambda_n (classic).
  /// Zero is the eigenvalue condition.
  T slope_residual{};
  /// Value C_n must take so that h == h_n; the accessory combination that
  /// the reduction leaves undetermined. Zero in classic mode.
  T integration_constant{};
  /// lambda_n = -n tau' - n(n-1)/2 sigma'' (classic mode only).
  std::optional<T> lambda_n;
};

/// h_n = -(n/2) tau' - n(n-1)/6 sigma'' without its integration constant.
template <Scalar T>
Poly<T> h_n_without_constant(const Poly<T>& tau, const Poly<T>& sigma, int n) {
  const T nn = scalar<T>(n);
  return -(nn / scalar<T>(2)) * derivative(tau) -
         (nn * scalar<T>(n - 1) / scalar<T>(6)) * derivative(sigma, 2);
}

template <Scalar T>
QuantizationRelation<T> quantization(const NuEquation<T>& eq, const PiBranch<T>& b, int n) {
  if (n < 0) throw InvalidInput("quantization: n must be nonnegative");
  QuantizationRelation<T> rel;
  rel.n = n;
  if (eq.mode == Mode::classic) {
    const T nn = scalar<T>(n);
    const T lambda_n = -nn * derivative(b.tau).coeff(0) -
                       nn * scalar<T>(n - 1) / scalar<T>(2) * derivative(eq.sigma, 2).coeff(0);
    rel.lambda_n = lambda_n;
    rel.slope_residual = b.h.coeff(0) - lambda_n;
    rel.integration_constant = scalar<T>(0);
    return rel;
  }
  const Poly<T> hn = h_n_without_constant(b.tau, eq.sigma, n);
  rel.slope_residual = b.h.coeff(1) - hn.coeff(1);
  rel.integration_constant = b.h.coeff(0) - hn.coeff(0);
  return rel;
}

struct PowerFactor {
  Complex point;
  Complex exponent;
};

/// phi(z) = exp(E(z)) * prod_i (z - z_i)^{e_i}
struct PhiFactor {
  Poly<Complex> exponential_part;
  std::vector<PowerFactor> powers;

  /// phi'/phi
  Complex log_derivative(Complex z) const;
  /// d/dz (phi'/phi)
  Complex log_derivative_prime(Complex z) const;
  bool trivial(double tol = 1e-12) const;
};

/// Partial fractions of pi/sigma. Throws Unsupported when sigma has a
/// repeated root.
PhiFactor phi_factor(const Poly<Complex>& pi, const Poly<Complex>& sigma);

template <Scalar T>
PhiFactor phi_factor(const PiBranch<T>& b, const NuEquation<T>& eq) {
  return phi_factor(heunforge::to_complex(b.pi), heunforge::to_complex(eq.sigma));
}

/// Degree-n polynomial y with sigma y'' + tau y' + h y = 0, from the
/// one-dimensional null space of the (n+2)x(n+1) coefficient map. Returns
/// the monic representative. Throws NoSolution when the null space is not
/// one-dimensional or its generator has degree below n.
Poly<Complex> polynomial_solution(const Poly<Complex>& sigma, const Poly<Complex>& tau,
                                  const Poly<Complex>& h, int n, double null_tol = 1e-8);

/// Same, for a branch of eq. The quantization slope constraint must hold to
/// slope_tol (relative); any accessory parameter is already inside eq.
template <Scalar T>
Poly<Complex> polynomial_solution(const NuEquation<T>& eq, const PiBranch<T>& b, int n,
                                  double slope_tol = 1e-8) {
  const QuantizationRelation<T> rel = quantization(eq, b, n);
  const double scale = std::max({1.0, b.h.max_abs(), b.tau.max_abs()});
  if (magnitude(rel.slope_residual) > slope_tol * scale)
    throw NoSolution("quantization condition not satisfied for n = " + std::to_string(n));
  const Reduced<T> red = reduce(eq, b);
  return polynomial_solution(heunforge::to_complex(eq.sigma), heunforge::to_complex(red.tau),
                             heunforge::to_complex(red.h), n);
}

struct SearchOptions {
  int grid_size = 32;
  int max_iterations = 100;
  double damping = 0.5;
  double dedup_tol = 1e-8;
};

struct BranchSearch {
  std::vector<PiBranch<Complex>> branches;
  int starts = 0;
  int converged = 0;
  int singular = 0;
  /// Why the list is empty, if it is.
  std::string note;
};

/// All (g, sign) pairs that make the radicand a perfect square.
/// Extended mode: damped Newton on the two remainder coefficients of the
/// square-root extraction, from a deterministic low-discrepancy lattice of
/// grid_size starting points per pass (three passes, found roots deflated),
/// plus the closed-form cases where the radicand's leading coefficient
/// vanishes. Classic mode: the discriminant condition, a quadratic in k.
/// An empty result is reported in `note`, not thrown.
BranchSearch enumerate_branches(const NuEquation<Complex>& eq, const SearchOptions& opts = {});

/// Branches certified in exact arithmetic: the float search is snapped to
/// Gaussian rationals and every perfect-square condition is re-checked
/// exactly. Throws VerificationError when a branch cannot be certified.
std::vector<PiBranch<GaussRational>> exact_branches(const NuEquation<GaussRational>& eq,
                                                    const SearchOptions& opts = {});

template <Scalar T>
std::vector<PiBranch<T>> branches(const NuEquation<T>& eq, const SearchOptions& opts = {}) {
  if constexpr (is_exact_v<T>) {
    return exact_branches(eq, opts);
  } else {
    return enumerate_branches(eq, opts).branches;
  }
}

/// The remainder r(g) = (r1, r0) of the square-root extraction of a
/// degree-4 radicand with g = g1 z + g0, and its Jacobian. Exposed for
/// testing the Newton search.
struct RemainderJacobian {
  Complex r1, r0;
  Complex dr1_dg1, dr1_dg0, dr0_dg1, dr0_dg0;
  bool finite() const;
};
RemainderJacobian remainder_and_jacobian(const Poly<Complex>& known, const Poly<Complex>& sigma,
                                         Complex g1, Complex g0);

}  // namespace heunforge::nu
