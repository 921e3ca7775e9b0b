#pragma once

// Confluent Heun equation in the form
//
//   psi'' + (alpha + (beta+1)/z + (gamma+1)/(z-1)) psi'
//         + ((mu+nu) z - mu) / (z(z-1)) psi = 0
//
// with regular singular points 0, 1 and an irregular one at infinity. Its
// eight polynomial classes are labelled by the branch index k of pi_ek.

#include "heunforge/nu_engine.hpp"
#include "heunforge/series_oracle.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>

namespace heunforge::che {

template <Scalar T>
struct CheParams {
  T alpha{}, beta{}, gamma{}, mu{}, nu{};
};

template <Scalar T>
CheParams<Complex> to_complex(const CheParams<T>& p) {
  using heunforge::to_complex;
  return {to_complex(p.alpha), to_complex(p.beta), to_complex(p.gamma), to_complex(p.mu), to_complex(p.nu)};
}

/// delta = mu+nu - (alpha/2)(beta+gamma+2), eta = (alpha/2)(beta+1) - mu - (beta+gamma+beta gamma)/2
template <Scalar T>
std::pair<T, T> che_auxiliary(const CheParams<T>& p) {
  const T half = ratio<T>(1, 2);
  const T delta = p.mu + p.nu - half * p.alpha * (p.beta + p.gamma + scalar<T>(2));
  const T eta = half * p.alpha * (p.beta + scalar<T>(1)) - p.mu - half * (p.beta + p.gamma + p.beta * p.gamma);
  return {delta, eta};
}

template <Scalar T>
nu::NuEquation<T> che_to_nu(const CheParams<T>& p) {
  const T one = scalar<T>(1);
  const Poly<T> z = Poly<T>::z();
  const Poly<T> zm1({-one, one});
  nu::NuEquation<T> eq;
  eq.sigma = z * zm1;
  eq.tau_tilde = p.alpha * eq.sigma + (p.beta + one) * zm1 + (p.gamma + one) * z;
  eq.sigma_tilde = Poly<T>({-p.mu, p.mu + p.nu}) * eq.sigma;
  eq.mode = nu::Mode::extended;
  return eq;
}

/// The equation multiplied through by z(z-1).
template <Scalar T>
series::OdeForm<T> che_ode(const CheParams<T>& p) {
  const nu::NuEquation<T> eq = che_to_nu(p);
  return {eq.sigma, eq.tau_tilde, Poly<T>({-p.mu, p.mu + p.nu})};
}

inline void check_class(int k) {
  if (k < 1 || k > 8) throw InvalidInput("CHE class index must be 1..8");
}

/// Which of -alpha z(z-1), -beta(z-1), -gamma z (bits 0, 1, 2) make up pi_ek.
inline int class_mask(int k) {
  check_class(k);
  constexpr std::array<int, 8> masks = {7, 0, 4, 3, 6, 1, 2, 5};
  return masks[static_cast<std::size_t>(k - 1)];
}

template <Scalar T>
Poly<T> catalog_pi(int k, const T& alpha, const T& beta, const T& gamma) {
  const int m = class_mask(k);
  const T one = scalar<T>(1);
  const Poly<T> z = Poly<T>::z();
  const Poly<T> zm1({-one, one});
  Poly<T> pi;
  if (m & 1) pi -= alpha * (z * zm1);
  if (m & 2) pi -= beta * zm1;
  if (m & 4) pi -= gamma * z;
  return pi;
}

/// g_1 .. g_4; branches pi_e(2j-1), pi_e(2j) share g_j.
template <Scalar T>
Poly<T> catalog_g(int j, const CheParams<T>& p) {
  const T s = p.mu + p.nu;
  const T ab = p.alpha * p.beta, ag = p.alpha * p.gamma;
  switch (j) {
    case 1:
      return Poly<T>({-p.mu, s});
    case 2:
      return Poly<T>({-p.mu - p.gamma * p.beta, s - ag});
    case 3:
      return Poly<T>({-p.mu + ab, s - ab - ag});
    case 4:
      return Poly<T>({-p.mu + ab - p.beta * p.gamma, s - ab});
    default:
      throw InvalidInput("g index must be 1..4");
  }
}

/// The value of mu+nu that class k requires at degree n.
template <Scalar T>
T class_sum(int k, int n, const T& alpha, const T& beta, const T& gamma) {
  check_class(k);
  if (n < 0) throw InvalidInput("n must be nonnegative");
  const T nn = scalar<T>(n);
  const T two = scalar<T>(2);
  switch (k) {
    case 1: return two * alpha + nn * alpha;
    case 2: return -nn * alpha;
    case 3: return gamma * alpha - nn * alpha;
    case 4: return gamma * alpha + two * alpha + nn * alpha;
    case 5: return gamma * alpha + beta * alpha - nn * alpha;
    case 6: return gamma * alpha + beta * alpha + two * alpha + nn * alpha;
    case 7: return beta * alpha - nn * alpha;
    default: return beta * alpha + two * alpha + nn * alpha;
  }
}

/// Residual of class k's linear relation: mu + nu - class_sum.
template <Scalar T>
T che_class_relation(int k, int n, const CheParams<T>& p) {
  return p.mu + p.nu - class_sum(k, n, p.alpha, p.beta, p.gamma);
}

/// Exponential slope and exponents at 0, 1 of the class-k prefactor.
template <Scalar T>
std::array<T, 3> class_signature(int k, const T& alpha, const T& beta, const T& gamma) {
  const int m = class_mask(k);
  return {(m & 1) ? -alpha : scalar<T>(0), (m & 2) ? -beta : scalar<T>(0), (m & 4) ? -gamma : scalar<T>(0)};
}

template <Scalar T>
nu::PiBranch<T> branch_from_pi(const nu::NuEquation<T>& eq, const Poly<T>& pi) {
  nu::PiBranch<T> b;
  b.pi = pi;
  const nu::Reduced<T> red = nu::reduce(eq, b);
  b.tau = red.tau;
  b.h = red.h;
  b.g = red.h - derivative(pi);
  b.s = pi - nu::half_gap(eq);
  return b;
}

template <Scalar T>
std::vector<int> identify(const nu::PiBranch<T>& b, const T& alpha, const T& beta, const T& gamma,
                          double tol = 1e-8) {
  std::vector<int> out;
  for (int k = 1; k <= 8; ++k)
    if (approx_equal(b.pi, catalog_pi(k, alpha, beta, gamma), tol)) out.push_back(k);
  return out;
}

/// Class-k reduced equation with mu+nu fixed by the class relation, as a
/// family in mu (h depends on mu through -mu only).
template <Scalar T>
series::OdeFamily<T> class_family(const T& alpha, const T& beta, const T& gamma, int k, int n) {
  const CheParams<T> p0{alpha, beta, gamma, scalar<T>(0), class_sum(k, n, alpha, beta, gamma)};
  const nu::NuEquation<T> eq = che_to_nu(p0);
  const nu::PiBranch<T> b = branch_from_pi(eq, catalog_pi(k, alpha, beta, gamma));
  return {{eq.sigma, b.tau, b.h}, Poly<T>::constant(-scalar<T>(1))};
}

/// mu values admitting a degree-n class-k solution; mu+nu is set by the
/// class relation, so only alpha, beta, gamma of p are used. The series is
/// taken about 0, or about 1 when exponent 0 is resonant at 0.
template <Scalar T>
series::Termination<T> che_mu_values(const CheParams<T>& p, int k, int n) {
  const series::OdeFamily<T> fam = class_family(p.alpha, p.beta, p.gamma, k, n);
  const T point = series::expansion_point(fam.base, n, {scalar<T>(0), scalar<T>(1)});
  return series::termination_solve(fam, n, {}, point);
}

template <Scalar T>
series::Eigenstate che_eigenstate(const CheParams<T>& p, int k, int n, const Complex& mu,
                                  const series::ResidualOptions& ropts = {}) {
  CheParams<Complex> pc = to_complex(p);
  const Complex s = class_sum(k, n, pc.alpha, pc.beta, pc.gamma);
  pc.mu = mu;
  pc.nu = s - mu;
  const nu::NuEquation<Complex> eq = che_to_nu(pc);
  const nu::PiBranch<Complex> b = branch_from_pi(eq, catalog_pi(k, pc.alpha, pc.beta, pc.gamma));
  series::Eigenstate st;
  st.family = "che";
  st.label = std::to_string(k);
  st.n = n;
  st.accessory = mu;
  st.prefactor = nu::phi_factor(b.pi, eq.sigma);
  st.polynomial = nu::polynomial_solution(eq, b, n);
  st.residual = series::ode_residual(st, che_ode(pc), ropts);
  return st;
}

/// Raw input recognized as a CHE, up to an overall scale of sigma.
template <Scalar T>
std::optional<CheParams<T>> detect_shape(const nu::NuEquation<T>& eq);

}  // namespace heunforge::che
