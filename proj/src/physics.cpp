#include "heunforge/physics.hpp"

#include <cmath>

namespace heunforge::physics {

namespace {

template <Scalar T>
T imag_unit() {
  if constexpr (is_exact_v<T>) {
    return GaussRational(Rational(0), Rational(1));
  } else {
    return Complex(0.0, 1.0);
  }
}

template <Scalar T>
T root_of(const T& w) {
  if constexpr (is_exact_v<T>) {
    auto r = exact_sqrt(w);
    if (!r) throw InvalidInput("square root of " + heunforge::to_string(w) + " is not a Gaussian rational");
    return *r;
  } else {
    return principal_sqrt(w);
  }
}

}  // namespace

double coulomb3s_energy(const Coulomb3SphereInput& in) {
  if (in.n < 0) throw InvalidInput("n must be nonnegative");
  const double k = in.n + std::abs(in.m);
  return k * (k + 2.0) - in.gamma * in.gamma / (4.0 * (k + 1.0) * (k + 1.0));
}

Rational coulomb3s_energy_exact(int n, int m, const Rational& gamma) {
  if (n < 0) throw InvalidInput("n must be nonnegative");
  const Rational k(n + std::abs(m));
  return k * (k + 2) - gamma * gamma / (4 * (k + 1) * (k + 1));
}

template <Scalar T>
CoulombCheck<T> coulomb3s_verify(int n, int m, const T& gamma) {
  if (n < 0) throw InvalidInput("n must be nonnegative");
  const T one = scalar<T>(1);
  const T am = scalar<T>(std::abs(m));
  const T k = scalar<T>(n + std::abs(m));
  const T nn = scalar<T>(n);
  const T ig = imag_unit<T>() * gamma;
  CoulombCheck<T> out;
  out.energy = k * (k + scalar<T>(2)) - gamma * gamma / (scalar<T>(4) * (k + one) * (k + one));
  const T sp = root_of(one + out.energy + ig);
  const T sm = root_of(one + out.energy - ig);
  const T delta = am + one;  // Delta_m = eps_m
  for (int sign : {1, -1}) {
    const T s = scalar<T>(sign);
    const T Sp = s * sp, Sm = s * sm;
    const T Gamma = one - Sp;
    const T a = one + am + (Sm - Sp) / scalar<T>(2);
    const T b = one + am - (Sm + Sp) / scalar<T>(2);
    const double r1 = magnitude(a * b + nn * (delta + Gamma + delta + nn - one));
    const double r2 = magnitude(a * b - (nn + delta + delta) * (Gamma - nn - one));
    if (sign == 1) {
      out.Gamma = Gamma;
      out.a = a;
      out.b = b;
      out.class1_principal = r1;
      out.class2_principal = r2;
    } else {
      out.class1_negated = r1;
      out.class2_negated = r2;
    }
  }
  return out;
}

template CoulombCheck<Complex> coulomb3s_verify(int, int, const Complex&);
template CoulombCheck<GaussRational> coulomb3s_verify(int, int, const GaussRational&);

CoulombCheck<Complex> coulomb3s_verify(const Coulomb3SphereInput& in) {
  return coulomb3s_verify<Complex>(in.n, in.m, Complex(in.gamma, 0.0));
}

heun::HeunParams<Complex> electrons_heun_params(int n, double gamma, double delta) {
  if (n < 1) throw InvalidInput("electrons on a sphere: n must be positive");
  if (gamma == 0.0) throw InvalidInput("electrons on a sphere: gamma must be nonzero");
  const Complex g = 1.0 / gamma;
  const Complex side = 0.5 * (delta - 1.0 / gamma);
  return heun::class_params<Complex>(heun::HeunClass::I, n, g, side, side, Complex(-1.0), Complex(0.0));
}

ElectronsState electrons_sphere_state(const ElectronsSphereInput& in) {
  ElectronsState st;
  st.n = in.n;
  heun::HeunParams<Complex> p = electrons_heun_params(in.n, in.gamma, in.delta);
  const heun::Accessory<Complex> acc = heun::heun_accessory(p, heun::HeunClass::I, in.n);
  st.accessory_roots = acc.termination.roots;
  st.determinant_mismatch = acc.determinant_mismatch;
  st.tail = acc.termination.worst_tail;
  // R = -q/2 must be real and positive
  std::optional<Complex> pick;
  for (Complex q : acc.termination.roots) {
    if (std::abs(q.imag()) > 1e-9 * std::max(1.0, std::abs(q)) || q.real() >= 0.0) continue;
    if (!pick || q.real() < pick->real()) pick = Complex(q.real(), 0.0);
  }
  if (!pick) throw NoSolution("no accessory root gives a positive radius");
  st.q = *pick;
  st.R = -pick->real() / 2.0;
  st.E = in.n * (in.n + in.delta - 1.0) / (4.0 * st.R * st.R);
  p.q = st.q;
  st.heun = p;
  const series::Eigenstate es = heun::heun_eigenstate(p, heun::HeunClass::I, in.n, st.q);
  st.polynomial = es.polynomial;
  st.residual = es.residual;
  st.roots = roots(es.polynomial);
  st.bethe = bethe_residual(st.roots, in.gamma, in.delta);
  return st;
}

double bethe_residual(const std::vector<Complex>& roots, double gamma, double delta) {
  if (gamma == 0.0) throw InvalidInput("bethe_residual: gamma must be nonzero");
  const double side = 0.5 * (delta - 1.0 / gamma);
  double worst = 0.0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const Complex zi = roots[i];
    Complex pair = 0.0;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j == i) continue;
      if (std::abs(zi - roots[j]) <= 1e-12 * std::max(1.0, std::abs(zi)))
        throw InvalidInput("bethe_residual: coincident roots");
      pair += 2.0 / (zi - roots[j]);
    }
    const double clearance = std::min({std::abs(zi), std::abs(zi - 1.0), std::abs(zi + 1.0)});
    if (clearance > 1e-6) {
      worst = std::max(worst, std::abs(pair + (1.0 / gamma) / zi + side / (zi + 1.0) + side / (zi - 1.0)));
    } else {
      // root on a singular point (its exponent term is then zero): use the
      // equations multiplied through by z(z^2-1)
      const Complex cleared = zi * (zi * zi - 1.0) * pair + (1.0 / gamma) * (zi * zi - 1.0) +
                              side * zi * (zi + 1.0) + side * zi * (zi - 1.0);
      worst = std::max(worst, std::abs(cleared));
    }
  }
  return worst;
}

std::optional<ElectronsClosedForm> electrons_closed_form(int n, double gamma, double delta) {
  if (n == 1) return ElectronsClosedForm{0.5 * std::sqrt(delta / gamma), gamma};
  if (n == 2) {
    const double c2 = 2.0 * (delta + 2.0) + (4.0 * delta + 6.0) / gamma;
    return ElectronsClosedForm{0.5 * std::sqrt(c2),
                               gamma * (delta + 1.0) / (gamma * (delta + 2.0) + 2.0 * delta + 3.0)};
  }
  return std::nullopt;
}

const char* to_string(Parity p) { return p == Parity::symmetric ? "symmetric" : "antisymmetric"; }

std::optional<Parity> parse_parity(std::string_view s) {
  if (s == "symmetric" || s == "s") return Parity::symmetric;
  if (s == "antisymmetric" || s == "a") return Parity::antisymmetric;
  return std::nullopt;
}

void validate(const DoubleWellInput& in) {
  if (in.N < 0) throw InvalidInput("double well: N must be nonnegative");
  if (!(in.d > 0.0)) throw InvalidInput("double well: d must be positive");
  if (!(in.U0 > 0.0)) throw InvalidInput("double well: U0 must be positive");
}

double doublewell_spectrum(const DoubleWellInput& in) {
  validate(in);
  const double shift = in.parity == Parity::symmetric ? 3.0 : 5.0;
  const double x = shift + 4.0 * in.N - in.d * std::sqrt(in.U0);
  return -x * x / (4.0 * in.d * in.d);
}

che::CheParams<Complex> doublewell_params(double d, double U0, Complex beta) {
  const Complex alpha = -d * std::sqrt(U0);
  che::CheParams<Complex> p;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = -0.5;
  p.mu = 0.25 * (alpha * (alpha + 2.0) + 2.0 * alpha * beta - beta * (beta + 1.0));
  p.nu = 0.25 * (alpha + beta * (beta + 1.0));
  return p;
}

std::array<int, 2> doublewell_classes(Parity p) {
  return p == Parity::symmetric ? std::array<int, 2>{2, 7} : std::array<int, 2>{3, 5};
}

namespace {

// Quantization slope residual of class k at degree N, taken from the NU
// engine on the mapped parameters.
Complex slope_residual(const DoubleWellInput& in, int k, Complex beta) {
  const che::CheParams<Complex> p = doublewell_params(in.d, in.U0, beta);
  const nu::NuEquation<Complex> eq = che::che_to_nu(p);
  const nu::PiBranch<Complex> b = che::branch_from_pi(eq, che::catalog_pi(k, p.alpha, p.beta, p.gamma));
  return nu::quantization(eq, b, in.N).slope_residual;
}

}  // namespace

DoubleWellReport doublewell_verify(const DoubleWellInput& in, const series::ResidualOptions& ropts) {
  validate(in);
  DoubleWellReport rep;
  rep.epsilon_closed = doublewell_spectrum(in);
  const Complex root_eps = std::sqrt(Complex(rep.epsilon_closed, 0.0));
  for (int k : doublewell_classes(in.parity)) {
    DoubleWellClassCheck cc;
    cc.klass = k;
    // the condition is affine in beta once mu+nu comes from the map
    const Complex r0 = slope_residual(in, k, 0.0);
    const Complex r1 = slope_residual(in, k, 1.0);
    if (std::abs(r1 - r0) < 1e-14) throw NoSolution("double well: class condition does not involve beta");
    cc.beta_solved = -r0 / (r1 - r0);
    const Complex check = slope_residual(in, k, cc.beta_solved);
    if (std::abs(check) > 1e-9 * std::max(1.0, std::abs(r0)))
      throw VerificationError("double well: quantization condition is not affine in beta");
    cc.epsilon_pipeline = (-(cc.beta_solved * cc.beta_solved) / (in.d * in.d)).real();

    const Complex bm = Complex(0.0, -in.d) * root_eps;
    const Complex bp = -bm;
    cc.residual_minus_branch = std::abs(che::che_class_relation(k, in.N, doublewell_params(in.d, in.U0, bm)));
    cc.residual_plus_branch = std::abs(che::che_class_relation(k, in.N, doublewell_params(in.d, in.U0, bp)));
    const double scale = std::max(1.0, in.d * std::sqrt(in.U0));
    if (std::min(cc.residual_minus_branch, cc.residual_plus_branch) > 1e-9 * scale * scale)
      throw VerificationError("double well: class relation fails on both square-root branches");

    const che::CheParams<Complex> p = doublewell_params(in.d, in.U0, cc.beta_solved);
    const series::Termination<Complex> term = che::che_mu_values(p, k, in.N);
    cc.mu_roots = term.roots;
    cc.worst_tail = term.worst_tail;
    for (Complex mu : term.roots) {
      const series::Eigenstate st = che::che_eigenstate(p, k, in.N, mu, ropts);
      cc.worst_residual = std::max(cc.worst_residual, st.residual);
    }
    cc.physical_mu = p.mu;
    const series::OdeFamily<Complex> fam = che::class_family(p.alpha, p.beta, p.gamma, k, in.N);
    const Complex point = series::expansion_point(fam.base, in.N, {Complex(0.0), Complex(1.0)});
    cc.physical_mu_tail = series::termination_tail(fam.at(p.mu), in.N, point);
    rep.classes.push_back(std::move(cc));
  }
  return rep;
}

}  // namespace heunforge::physics
