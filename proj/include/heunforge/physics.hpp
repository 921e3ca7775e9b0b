#pragma once

// Three quantum problems mapped onto the Heun / confluent Heun solvers:
// the Coulomb problem on a 3-sphere, two electrons on a sphere, and the
// hyperbolic double well.

#include "heunforge/che.hpp"
#include "heunforge/heun.hpp"

#include <optional>
#include <string>
#include <vector>

namespace heunforge::physics {

// ---- Coulomb problem on a 3-sphere ---------------------------------------

struct Coulomb3SphereInput {
  int n = 0;
  int m = 0;
  double gamma = 0.0;
};

/// E_n = (n+|m|)(n+|m|+2) - gamma^2 / (4 (n+|m|+1)^2)
double coulomb3s_energy(const Coulomb3SphereInput& in);

/// Exact energy for rational gamma.
Rational coulomb3s_energy_exact(int n, int m, const Rational& gamma);

template <Scalar T>
struct CoulombCheck {
  T energy{};
  T Gamma{}, a{}, b{};  // with principal square roots
  /// |ab + n(eps+Gamma+Delta+n-1)| and |ab - (n+Delta+eps)(Gamma-n-1)|, each
  /// with principal roots and with both roots negated.
  double class1_principal = 0, class1_negated = 0;
  double class2_principal = 0, class2_negated = 0;

  double class1() const { return std::min(class1_principal, class1_negated); }
  double class2() const { return std::min(class2_principal, class2_negated); }
};

/// Substitutes E_n into the Heun parameters of the separated equation and
/// evaluates the class I and class II relations. Exact backend requires
/// rational gamma (the square roots are then Gaussian rationals).
template <Scalar T>
CoulombCheck<T> coulomb3s_verify(int n, int m, const T& gamma);

CoulombCheck<Complex> coulomb3s_verify(const Coulomb3SphereInput& in);

// ---- Two electrons on a sphere --------------------------------------------

struct ElectronsSphereInput {
  int n = 1;
  double gamma = 1.0;
  double delta = 1.0;
};

struct ElectronsState {
  int n = 0;
  double R = 0.0;
  double E = 0.0;
  Complex q{};
  heun::HeunParams<Complex> heun;
  std::vector<Complex> accessory_roots;  // every q from the termination solve
  Poly<Complex> polynomial;               // monic, degree n
  std::vector<Complex> roots;             // z_i
  double bethe = 0.0;
  double residual = 0.0;
  double determinant_mismatch = -1.0;
  double tail = 0.0;
};

/// Heun parameters (1/g, (d-1/g)/2, (d-1/g)/2, -4R^2E, -2R, a = -1) for the
/// class I degree-n state, with q left at zero.
heun::HeunParams<Complex> electrons_heun_params(int n, double gamma, double delta);

/// Resolves q = -2R by termination and keeps the root with R > 0.
ElectronsState electrons_sphere_state(const ElectronsSphereInput& in);

/// max_i |sum_{j!=i} 2/(z_i-z_j) + (1/g)/z_i + (d-1/g)/2 (1/(z_i+1) + 1/(z_i-1))|
/// A root sitting on 0 or +-1 is checked in the form multiplied by z(z^2-1).
double bethe_residual(const std::vector<Complex>& roots, double gamma, double delta);

struct ElectronsClosedForm {
  double R;
  double E;
};

/// Known closed forms for n = 1, 2; nullopt otherwise.
std::optional<ElectronsClosedForm> electrons_closed_form(int n, double gamma, double delta);

// ---- Hyperbolic double well -------------------------------------------------

enum class Parity { symmetric, antisymmetric };
const char* to_string(Parity p);
std::optional<Parity> parse_parity(std::string_view s);

struct DoubleWellInput {
  int N = 0;
  double d = 1.0;
  double U0 = 1.0;
  Parity parity = Parity::symmetric;
};

void validate(const DoubleWellInput& in);

/// -(3+4N - d sqrt(U0))^2 / (4 d^2), or 5+4N for the antisymmetric case.
double doublewell_spectrum(const DoubleWellInput& in);

/// CHE parameters alpha = -d sqrt(U0), the given beta, gamma = -1/2 and
///   mu = (alpha(alpha+2) + 2 alpha beta - beta(beta+1)) / 4
///   nu = (alpha + beta(beta+1)) / 4.
che::CheParams<Complex> doublewell_params(double d, double U0, Complex beta);

/// Classes carrying each parity: pi_e2 and pi_e7 (symmetric), pi_e3 and
/// pi_e5 (antisymmetric).
std::array<int, 2> doublewell_classes(Parity p);

struct DoubleWellClassCheck {
  int klass = 0;
  /// beta solving the class quantization condition with mu+nu from the map
  Complex beta_solved{};
  double epsilon_pipeline = 0.0;
  /// relation residual at beta = -i d sqrt(eps_N) and at +i d sqrt(eps_N)
  double residual_minus_branch = 0.0;
  double residual_plus_branch = 0.0;
  /// mu values from the termination solve at beta_solved
  std::vector<Complex> mu_roots;
  double worst_tail = 0.0;
  double worst_residual = 0.0;
  /// the mapped mu at beta_solved and its series tail (terminates only for
  /// special U0)
  Complex physical_mu{};
  double physical_mu_tail = 0.0;
};

struct DoubleWellReport {
  double epsilon_closed = 0.0;
  std::vector<DoubleWellClassCheck> classes;
};

DoubleWellReport doublewell_verify(const DoubleWellInput& in, const series::ResidualOptions& ropts = {});

}  // namespace heunforge::physics
