#include "heunforge/heun.hpp"

#include <cctype>

namespace heunforge::heun {

namespace {

constexpr std::array<const char*, 8> kNames = {"I", "II", "III", "IV", "V", "VI", "VII", "VIII"};

// pi_e1 .. pi_e8 pair with VIII, I, II, VII, IV, V, VI, III
constexpr std::array<HeunClass, 8> kBranchClass = {HeunClass::VIII, HeunClass::I,  HeunClass::II,
                                                   HeunClass::VII,  HeunClass::IV, HeunClass::V,
                                                   HeunClass::VI,   HeunClass::III};

}  // namespace

const char* to_string(HeunClass c) { return kNames[static_cast<std::size_t>(class_mask(c))]; }

std::optional<HeunClass> parse_class(std::string_view name) {
  std::string up;
  for (char ch : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (up == kNames[i] || up == std::to_string(i + 1)) return static_cast<HeunClass>(i + 1);
  return std::nullopt;
}

int branch_index(HeunClass c) {
  for (std::size_t k = 0; k < kBranchClass.size(); ++k)
    if (kBranchClass[k] == c) return static_cast<int>(k) + 1;
  throw InvalidInput("unknown Heun class");
}

HeunClass class_of_branch(int k) {
  if (k < 1 || k > 8) throw InvalidInput("branch index must be 1..8");
  return kBranchClass[static_cast<std::size_t>(k - 1)];
}

std::array<Complex, 3> prefactor_exponents(const nu::PhiFactor& phi, Complex a) {
  std::array<Complex, 3> out{};
  const std::array<Complex, 3> pts = {Complex{0.0}, Complex{1.0}, a};
  for (const nu::PowerFactor& f : phi.powers)
    for (std::size_t i = 0; i < 3; ++i)
      if (std::abs(f.point - pts[i]) <= 1e-9 * std::max(1.0, std::abs(pts[i]))) out[i] = f.exponent;
  return out;
}

template <Scalar T>
std::optional<HeunShape<T>> detect_shape(const nu::NuEquation<T>& eq) {
  if (eq.sigma.degree() != 3 || eq.tau_tilde.degree() > 2) return std::nullopt;
  const T k = eq.sigma.leading();
  const Poly<T> sigma = eq.sigma / k;
  const Poly<T> tau = eq.tau_tilde / k;
  const Poly<T> stil = eq.sigma_tilde / (k * k);
  const T a = -sigma.coeff(2) - scalar<T>(1);
  const Poly<T> expect = Poly<T>({scalar<T>(0), scalar<T>(1)}) * Poly<T>({-scalar<T>(1), scalar<T>(1)}) *
                         Poly<T>({-a, scalar<T>(1)});
  if (!approx_equal(sigma, expect, 1e-12)) return std::nullopt;
  if (near(a, scalar<T>(0), 1e-12) || near(a, scalar<T>(1), 1e-12)) return std::nullopt;
  const DivRem<T> qr = divrem(stil, sigma);
  if (!negligible(qr.remainder, std::max(1.0, stil.max_abs()), 1e-12) || qr.quotient.degree() > 1)
    return std::nullopt;
  const Poly<T> ds = derivative(sigma);
  HeunShape<T> s;
  s.a = a;
  s.gamma = tau(scalar<T>(0)) / ds(scalar<T>(0));
  s.delta = tau(scalar<T>(1)) / ds(scalar<T>(1));
  s.epsilon = tau(a) / ds(a);
  s.ab = qr.quotient.coeff(1);
  s.q = -qr.quotient.coeff(0);
  return s;
}

template std::optional<HeunShape<Complex>> detect_shape(const nu::NuEquation<Complex>&);
template std::optional<HeunShape<GaussRational>> detect_shape(const nu::NuEquation<GaussRational>&);

}  // namespace heunforge::heun
