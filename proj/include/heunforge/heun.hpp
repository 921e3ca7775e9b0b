#pragma once

// General Heun equation
//
//   psi'' + (gamma/z + delta/(z-1) + epsilon/(z-a)) psi'
//         + (alpha beta z - q) / (z(z-1)(z-a)) psi = 0,
//   epsilon = alpha + beta - gamma - delta + 1,
//
// its eight polynomial classes and accessory-parameter resolution.

#include "heunforge/nu_engine.hpp"
#include "heunforge/series_oracle.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace heunforge::heun {

template <Scalar T>
struct HeunParams {
  T gamma{}, delta{}, epsilon{}, alpha{}, beta{}, q{}, a{};
};

template <Scalar T>
HeunParams<Complex> to_complex(const HeunParams<T>& p) {
  using heunforge::to_complex;
  return {to_complex(p.gamma), to_complex(p.delta), to_complex(p.epsilon), to_complex(p.alpha),
          to_complex(p.beta), to_complex(p.q), to_complex(p.a)};
}

inline constexpr double kFuchsianTolerance = 1e-10;

template <Scalar T>
T fuchsian_residual(const HeunParams<T>& p) {
  return p.epsilon - (p.alpha + p.beta - p.gamma - p.delta + scalar<T>(1));
}

template <Scalar T>
void validate(const HeunParams<T>& p) {
  const T r = fuchsian_residual(p);
  if (!near(r, scalar<T>(0), kFuchsianTolerance))
    throw InvalidInput("Fuchsian condition violated: epsilon - (alpha+beta-gamma-delta+1) = " + heunforge::to_string(r));
  if (near(p.a, scalar<T>(0), 1e-12) || near(p.a, scalar<T>(1), 1e-12))
    throw InvalidInput("singular point a must differ from 0 and 1");
}

/// Polynomial classes. The class id encodes which of the exponents 1-gamma, 1-delta,
/// 1-epsilon (bits 0, 1, 2) appear in the prefactor: I = none ... VIII = all.
enum class HeunClass { I = 1, II, III, IV, V, VI, VII, VIII };

inline constexpr std::array<HeunClass, 8> kAllClasses = {
    HeunClass::I, HeunClass::II, HeunClass::III, HeunClass::IV,
    HeunClass::V, HeunClass::VI, HeunClass::VII, HeunClass::VIII};

const char* to_string(HeunClass c);
std::optional<HeunClass> parse_class(std::string_view name);

inline int class_mask(HeunClass c) { return static_cast<int>(c) - 1; }

/// Branch index k of pi_ek for each class and back.
int branch_index(HeunClass c);
HeunClass class_of_branch(int k);

template <Scalar T>
std::array<T, 3> class_exponents(HeunClass c, const T& gamma, const T& delta, const T& epsilon) {
  const int m = class_mask(c);
  const T one = scalar<T>(1);
  return {(m & 1) ? one - gamma : scalar<T>(0), (m & 2) ? one - delta : scalar<T>(0),
          (m & 4) ? one - epsilon : scalar<T>(0)};
}

/// Class alpha and beta for degree n: alpha collects the flagged local
/// parameters, beta the others.
template <Scalar T>
std::pair<T, T> class_alpha_beta(HeunClass c, int n, const T& gamma, const T& delta, const T& epsilon) {
  const int m = class_mask(c);
  const std::array<T, 3> par = {gamma, delta, epsilon};
  T flagged = scalar<T>(0), rest = scalar<T>(0);
  int count = 0;
  for (int i = 0; i < 3; ++i) {
    if (m & (1 << i)) {
      flagged += par[static_cast<std::size_t>(i)];
      ++count;
    } else {
      rest += par[static_cast<std::size_t>(i)];
    }
  }
  return {flagged - scalar<T>(n + count), rest + scalar<T>(n + count - 1)};
}

/// alpha*beta required by class c at degree n.
template <Scalar T>
T class_ab(HeunClass c, int n, const T& gamma, const T& delta, const T& epsilon) {
  auto [al, be] = class_alpha_beta(c, n, gamma, delta, epsilon);
  return al * be;
}

/// alpha beta - (class formula); zero iff class c admits a degree-n solution.
template <Scalar T>
T class_relation(HeunClass c, int n, const HeunParams<T>& p) {
  if (n < 0) throw InvalidInput("n must be nonnegative");
  return p.alpha * p.beta - class_ab(c, n, p.gamma, p.delta, p.epsilon);
}

/// Parameters for class c at degree n with alpha, beta taken from the class.
template <Scalar T>
HeunParams<T> class_params(HeunClass c, int n, const T& gamma, const T& delta, const T& epsilon,
                           const T& a, const T& q = scalar<T>(0)) {
  auto [al, be] = class_alpha_beta(c, n, gamma, delta, epsilon);
  return {gamma, delta, epsilon, al, be, q, a};
}

template <Scalar T>
nu::NuEquation<T> heun_to_nu(const HeunParams<T>& p) {
  validate(p);
  const Poly<T> z = Poly<T>::z();
  const Poly<T> zm1({-scalar<T>(1), scalar<T>(1)});
  const Poly<T> zma({-p.a, scalar<T>(1)});
  nu::NuEquation<T> eq;
  eq.sigma = z * zm1 * zma;
  eq.tau_tilde = p.gamma * (zm1 * zma) + p.delta * (z * zma) + p.epsilon * (z * zm1);
  eq.sigma_tilde = Poly<T>({-p.q, p.alpha * p.beta}) * eq.sigma;
  eq.mode = nu::Mode::extended;
  return eq;
}

/// The Heun equation multiplied through by z(z-1)(z-a).
template <Scalar T>
series::OdeForm<T> heun_ode(const HeunParams<T>& p) {
  const nu::NuEquation<T> eq = heun_to_nu(p);
  return {eq.sigma, eq.tau_tilde, Poly<T>({-p.q, p.alpha * p.beta})};
}

/// Closed-form pi for the branch paired with class c: the sum of
/// (1-gamma)(z-1)(z-a), (1-delta)z(z-a), (1-epsilon)z(z-1) over the flagged
/// exponents. Independent of alpha, beta and q.
template <Scalar T>
Poly<T> catalog_pi(HeunClass c, const T& gamma, const T& delta, const T& epsilon, const T& a) {
  const int m = class_mask(c);
  const T one = scalar<T>(1);
  const Poly<T> z = Poly<T>::z();
  const Poly<T> zm1({-one, one});
  const Poly<T> zma({-a, one});
  Poly<T> pi;
  if (m & 1) pi += (one - gamma) * (zm1 * zma);
  if (m & 2) pi += (one - delta) * (z * zma);
  if (m & 4) pi += (one - epsilon) * (z * zm1);
  return pi;
}

/// The four closed-form g's, g_1 .. g_4 (k = 1..4); branches pi_e(2k-1) and
/// pi_e(2k) share g_k.
template <Scalar T>
Poly<T> catalog_g(int k, const HeunParams<T>& p) {
  const T one = scalar<T>(1);
  const Poly<T> base({-p.q, p.alpha * p.beta});
  const T g1 = one - p.gamma, d1 = one - p.delta, e1 = one - p.epsilon;
  switch (k) {
    case 1:
      return base;
    case 2:  // - (1-gamma)[(1-delta)(z-a) + (1-epsilon)(z-1)]
      return base - g1 * Poly<T>({-(d1 * p.a) - e1, d1 + e1});
    case 3:  // - (1-epsilon)[(1-gamma)(z-1) + (1-delta) z]
      return base - e1 * Poly<T>({-g1, g1 + d1});
    case 4:  // - (1-delta)[(1-gamma)(z-a) + (1-epsilon) z]
      return base - d1 * Poly<T>({-(g1 * p.a), g1 + e1});
    default:
      throw InvalidInput("g index must be 1..4");
  }
}

/// Branch with a known pi: tau, h = sigma_bar / sigma and g = h - pi'.
template <Scalar T>
nu::PiBranch<T> branch_from_pi(const nu::NuEquation<T>& eq, const Poly<T>& pi) {
  nu::PiBranch<T> b;
  b.pi = pi;
  b.sign = nu::Sign::plus;
  const nu::Reduced<T> red = nu::reduce(eq, b);
  b.tau = red.tau;
  b.h = red.h;
  b.g = red.h - derivative(pi);
  b.s = pi - nu::half_gap(eq);
  return b;
}

/// Classes whose catalog pi matches the branch (several when parameters make
/// catalog entries coincide).
template <Scalar T>
std::vector<HeunClass> identify(const nu::PiBranch<T>& b, const T& gamma, const T& delta,
                                const T& epsilon, const T& a, double tol = 1e-8) {
  std::vector<HeunClass> out;
  for (HeunClass c : kAllClasses)
    if (approx_equal(b.pi, catalog_pi(c, gamma, delta, epsilon, a), tol)) out.push_back(c);
  return out;
}

/// Class-c reduced equation sigma y'' + tau y' + h(q) y = 0 as a family in q
/// (h depends on q through -q only).
template <Scalar T>
series::OdeFamily<T> class_family(const HeunParams<T>& p, HeunClass c) {
  HeunParams<T> p0 = p;
  p0.q = scalar<T>(0);
  const nu::NuEquation<T> eq = heun_to_nu(p0);
  const nu::PiBranch<T> b = branch_from_pi(eq, catalog_pi(c, p.gamma, p.delta, p.epsilon, p.a));
  return {{eq.sigma, b.tau, b.h}, Poly<T>::constant(-scalar<T>(1))};
}

/// det of the (n+1)x(n+1) tridiagonal matrix for the bare Heun series,
/// written out for n = 1, 2; a polynomial in q.
template <Scalar T>
Poly<T> determinant_condition(const HeunParams<T>& p, int n) {
  const Poly<T> q = Poly<T>::z();
  const T ab = p.alpha * p.beta;
  const T two = scalar<T>(2);
  const Poly<T> d0 = q;
  const Poly<T> d1 = q + Poly<T>::constant(p.a * (p.delta + p.gamma) + p.epsilon + p.gamma);
  if (n == 1) return d0 * d1 - Poly<T>::constant(p.a * p.gamma * ab);
  if (n == 2) {
    const Poly<T> d2 =
        q + Poly<T>::constant(two * (p.a + scalar<T>(1)) + two * (p.a * (p.delta + p.gamma) + p.epsilon + p.gamma));
    const T up0 = -(p.a * p.gamma);                          // (0,1)
    const T up1 = -(two * p.a * (scalar<T>(1) + p.gamma));   // (1,2)
    const T lo0 = -ab;                                       // (1,0)
    const T lo1 = -ab - (p.gamma + p.epsilon + p.delta);     // (2,1)
    // continuant: D2 = d2*D1 - up1*lo1*D0, D1 = d1*d0 - up0*lo0
    const Poly<T> D1 = d0 * d1 - Poly<T>::constant(up0 * lo0);
    return d2 * D1 - Poly<T>::constant(up1 * lo1) * d0;
  }
  throw InvalidInput("explicit determinant is only written out for n = 1, 2");
}

template <Scalar T>
struct Accessory {
  series::Termination<T> termination;
  /// Largest root mismatch against the explicit determinant (class I,
  /// n = 1, 2), or -1 when no cross-check applies.
  double determinant_mismatch = -1.0;
};

/// q values admitting a degree-n class-c solution.
template <Scalar T>
Accessory<T> heun_accessory(const HeunParams<T>& p, HeunClass c, int n) {
  validate(p);
  const T rel = class_relation(c, n, p);
  const double scale = std::max({1.0, magnitude(p.alpha * p.beta), magnitude(class_ab(c, n, p.gamma, p.delta, p.epsilon))});
  if (magnitude(rel) > 1e-8 * scale)
    throw NoSolution(std::string("class ") + to_string(c) + " relation fails for n = " + std::to_string(n) +
                     ": residual " + heunforge::to_string(rel));
  Accessory<T> out;
  const series::OdeFamily<T> fam = class_family(p, c);
  const T point = series::expansion_point(fam.base, n, {scalar<T>(0), scalar<T>(1), p.a});
  out.termination = series::termination_solve(fam, n, {}, point);
  if (c == HeunClass::I && (n == 1 || n == 2) && !out.termination.roots.empty()) {
    const Poly<T> det = determinant_condition(p, n);
    std::vector<Complex> dr = roots(det);
    double worst = 0.0;
    for (Complex r : out.termination.roots) {
      double best = 1e300;
      for (Complex s : dr) best = std::min(best, std::abs(r - s) / std::max(1.0, std::abs(s)));
      worst = std::max(worst, best);
    }
    out.determinant_mismatch = worst;
    if (worst > 1e-10)
      throw VerificationError("termination roots disagree with the explicit determinant by " +
                              std::to_string(worst));
  }
  return out;
}

/// psi = z^s1 (z-1)^s2 (z-a)^s3 p(z) for class c at the given q, with its
/// residual in the Heun equation.
template <Scalar T>
series::Eigenstate heun_eigenstate(const HeunParams<T>& p, HeunClass c, int n, const Complex& q,
                                   const series::ResidualOptions& ropts = {}) {
  HeunParams<Complex> pc = to_complex(p);
  pc.q = q;
  const nu::NuEquation<Complex> eq = heun_to_nu(pc);
  const nu::PiBranch<Complex> b = branch_from_pi(eq, catalog_pi(c, pc.gamma, pc.delta, pc.epsilon, pc.a));
  series::Eigenstate st;
  st.family = "heun";
  st.label = to_string(c);
  st.n = n;
  st.accessory = q;
  st.prefactor = nu::phi_factor(b.pi, eq.sigma);
  st.polynomial = nu::polynomial_solution(eq, b, n);
  st.residual = series::ode_residual(st, heun_ode(pc), ropts);
  return st;
}

/// Exponents of the prefactor at 0, 1, a (zero where phi has no factor).
std::array<Complex, 3> prefactor_exponents(const nu::PhiFactor& phi, Complex a);

/// Raw (tau~, sigma, sigma~) recognized as a Heun equation, up to an overall
/// scale of sigma.
template <Scalar T>
struct HeunShape {
  T gamma{}, delta{}, epsilon{}, a{}, ab{}, q{};
};

template <Scalar T>
std::optional<HeunShape<T>> detect_shape(const nu::NuEquation<T>& eq);

}  // namespace heunforge::heun
