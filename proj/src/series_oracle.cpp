#include "heunforge/series_oracle.hpp"

#include <cmath>
#include <numbers>

namespace heunforge::series {

double termination_tail(const OdeForm<Complex>& ode, int n, Complex point) {
  const Recurrence<Complex> rec = frobenius_recurrence(ode, point, Complex{});
  const std::vector<Complex> c = series_coeffs(rec, Complex{1.0}, n + 1 + rec.bandwidth);
  double head = 0.0;
  for (int j = 0; j <= n; ++j) head = std::max(head, std::abs(c[static_cast<std::size_t>(j)]));
  double tail = 0.0;
  for (int j = n + 1; j < static_cast<int>(c.size()); ++j)
    tail = std::max(tail, std::abs(c[static_cast<std::size_t>(j)]));
  return tail / head;
}

std::vector<Complex> residual_contour(const Poly<Complex>& p2, const ResidualOptions& opts) {
  if (opts.samples < 10) throw InvalidInput("residual check needs at least 10 samples");
  const std::vector<Complex> singular = p2.degree() >= 1 ? roots(p2) : std::vector<Complex>{};
  std::vector<Complex> pts;
  for (int i = 0; i < opts.samples; ++i) {
    // half-step offset keeps the first point off the real axis
    const double t = 2.0 * std::numbers::pi * (i + 0.5) / opts.samples;
    Complex z = opts.center + opts.radius * Complex(std::cos(t), std::sin(t));
    for (Complex s : singular) {
      const double dist = std::abs(z - s);
      if (dist < opts.clearance && dist > 0.0) z = s + (z - s) * (opts.clearance / dist);
    }
    bool clear = true;
    for (Complex s : singular)
      if (std::abs(z - s) < opts.clearance * (1.0 - 1e-12)) clear = false;
    if (clear) pts.push_back(z);
  }
  if (pts.empty()) throw InvalidInput("every residual sample lies too close to a singular point");
  return pts;
}

double ode_residual(const Eigenstate& state, const OdeForm<Complex>& ode, const ResidualOptions& opts) {
  if (state.polynomial.is_zero()) throw InvalidInput("the zero function is not an eigenstate");
  const Poly<Complex>& p = state.polynomial;
  const Poly<Complex> dp = derivative(p);
  const Poly<Complex> ddp = derivative(dp);
  double worst = 0.0;
  for (Complex z : residual_contour(ode.p2, opts)) {
    // everything divided by phi(z)
    const Complex L = state.prefactor.log_derivative(z);
    const Complex dL = state.prefactor.log_derivative_prime(z);
    const Complex y = p(z), y1 = dp(z), y2 = ddp(z);
    const Complex t2 = ode.p2(z) * (y2 + 2.0 * L * y1 + (dL + L * L) * y);
    const Complex t1 = ode.p1(z) * (y1 + L * y);
    const Complex t0 = ode.p0(z) * y;
    const double scale = std::max({std::abs(t2), std::abs(t1), std::abs(t0)});
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(t2 + t1 + t0) / scale);
  }
  return worst;
}

}  // namespace heunforge::series
