#include "heunforge/che.hpp"

namespace heunforge::che {

template <Scalar T>
std::optional<CheParams<T>> detect_shape(const nu::NuEquation<T>& eq) {
  if (eq.sigma.degree() != 2) return std::nullopt;
  const T k = eq.sigma.leading();
  const Poly<T> sigma = eq.sigma / k;
  const Poly<T> tau = eq.tau_tilde / k;
  const Poly<T> stil = eq.sigma_tilde / (k * k);
  if (!approx_equal(sigma, Poly<T>({scalar<T>(0), -scalar<T>(1), scalar<T>(1)}), 1e-12)) return std::nullopt;
  const DivRem<T> qr = divrem(stil, sigma);
  if (!negligible(qr.remainder, std::max(1.0, stil.max_abs()), 1e-12) || qr.quotient.degree() > 1)
    return std::nullopt;
  CheParams<T> p;
  p.alpha = tau.coeff(2);
  p.beta = -tau(scalar<T>(0)) - scalar<T>(1);
  p.gamma = tau(scalar<T>(1)) - scalar<T>(1);
  p.mu = -qr.quotient.coeff(0);
  p.nu = qr.quotient.coeff(1) - p.mu;
  return p;
}

template std::optional<CheParams<Complex>> detect_shape(const nu::NuEquation<Complex>&);
template std::optional<CheParams<GaussRational>> detect_shape(const nu::NuEquation<GaussRational>&);

}  // namespace heunforge::che
