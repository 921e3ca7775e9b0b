#include "heunforge/che.hpp"

#include "../support/generators.hpp"

#include <doctest.h>

#include <set>

using namespace heunforge;
using heunforge::testing::Gen;

namespace {

using E = Poly<GaussRational>;

GaussRational q(long long n, long long d = 1) { return GaussRational(Rational(n, d)); }

che::CheParams<GaussRational> sample() { return {q(3, 2), q(-1, 3), q(2, 5), q(1, 7), q(5, 4)}; }

}  // namespace

TEST_CASE("mapping to the NU form") {
  const auto p = sample();
  const auto eq = che::che_to_nu(p);
  CHECK(eq.tau_tilde(q(0)) == -(p.beta + q(1)));
  CHECK(eq.tau_tilde(q(1)) == p.gamma + q(1));
  const DivRem<GaussRational> qr = divrem(eq.sigma_tilde, eq.sigma);
  CHECK(qr.remainder.is_zero());
  CHECK(qr.quotient == E({-p.mu, p.mu + p.nu}));
  CHECK(eq.tau_tilde.degree() == 2);
  auto flat = p;
  flat.alpha = q(0);
  CHECK(che::che_to_nu(flat).tau_tilde.degree() == 1);
}

TEST_CASE("auxiliary parameters") {
  const GaussRational b = q(2, 3), g = q(-3, 4);
  const auto [d0, e0] = che::che_auxiliary(che::CheParams<GaussRational>{q(0), b, g, q(0), q(0)});
  CHECK(d0 == q(0));
  CHECK(e0 == -(b + g + b * g) / q(2));
  // delta moves one-for-one with mu + nu
  auto p = sample();
  const auto [d1, e1] = che::che_auxiliary(p);
  p.nu += q(3);
  CHECK(che::che_auxiliary(p).first == d1 + q(3));
  CHECK(che::che_auxiliary(p).second == e1);
  // double-well style parameters stay finite
  const Complex alpha = -1.0 * std::sqrt(25.0), beta(0.0, 1.5);
  const auto [dc, ec] = che::che_auxiliary(che::CheParams<Complex>{alpha, beta, -0.5, 1.0, 2.0});
  CHECK(std::isfinite(std::abs(dc)));
  CHECK(std::isfinite(std::abs(ec)));
}

TEST_CASE("class relations written out") {
  const auto p = sample();
  for (int n = 0; n <= 5; ++n) {
    const GaussRational nn(n);
    CHECK(che::che_class_relation(2, n, p) == p.mu + p.nu + nn * p.alpha);
    CHECK(che::che_class_relation(3, n, p) == p.mu + p.nu - p.gamma * p.alpha + nn * p.alpha);
    CHECK(che::che_class_relation(7, n, p) == p.mu + p.nu - p.beta * p.alpha + nn * p.alpha);
  }
  auto flat = p;
  flat.alpha = q(0);
  for (int k = 1; k <= 8; ++k)
    for (int n = 0; n <= 4; ++n) CHECK(che::che_class_relation(k, n, flat) == flat.mu + flat.nu);
  CHECK_THROWS_AS(che::che_class_relation(0, 1, p), InvalidInput);
  CHECK_THROWS_AS(che::che_class_relation(9, 1, p), InvalidInput);
  CHECK_THROWS_AS(che::che_class_relation(1, -1, p), InvalidInput);
}

TEST_CASE("quantization slope reproduces the CHE relations for n = 0..10") {
  Gen gen(12);
  for (int trial = 0; trial < 10; ++trial) {
    const che::CheParams<GaussRational> p{gen.gauss_nonzero(5, 4), gen.gauss(5, 4), gen.gauss(5, 4), gen.gauss(),
                                          gen.gauss()};
    const auto eq = che::che_to_nu(p);
    for (int k = 1; k <= 8; ++k) {
      const auto b = che::branch_from_pi(eq, che::catalog_pi(k, p.alpha, p.beta, p.gamma));
      CHECK(b.g == che::catalog_g((k + 1) / 2, p));
      for (int n = 0; n <= 10; ++n)
        CHECK(nu::quantization(eq, b, n).slope_residual == che::che_class_relation(k, n, p));
    }
  }
}

TEST_CASE("class signature matches the prefactor") {
  Gen gen(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = gen.che_params();
    const auto eq = che::che_to_nu(p);
    for (int k = 1; k <= 8; ++k) {
      const auto phi = nu::phi_factor(che::catalog_pi(k, p.alpha, p.beta, p.gamma), eq.sigma);
      const auto sig = che::class_signature(k, p.alpha, p.beta, p.gamma);
      // phi'/phi = s + e0/z + e1/(z-1)
      for (Complex z : {Complex(0.3, 0.2), Complex(-1.1, 0.7), Complex(2.0, -0.4)})
        CHECK(std::abs(phi.log_derivative(z) - (sig[0] + sig[1] / z + sig[2] / (z - 1.0))) < 1e-12);
    }
  }
}

TEST_CASE("n = 1 mu values solve mu^2 - K mu - alpha(1+beta) = 0") {
  Gen gen(14);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = gen.che_params();
    const auto sol = che::che_mu_values(p, 2, 1);
    REQUIRE(sol.roots.size() == 2);
    const Complex K = 2.0 - p.alpha + p.beta + p.gamma;
    for (Complex mu : sol.roots) CHECK(std::abs(mu * mu - K * mu - p.alpha * (1.0 + p.beta)) < 1e-10);
    // closed form with the root pair
    const Complex disc = std::sqrt(K * K + 4.0 * p.alpha * (1.0 + p.beta));
    CHECK(std::abs(sol.roots[0] + sol.roots[1] - K) < 1e-10);
    CHECK(std::abs(sol.roots[0] * sol.roots[1] + p.alpha * (1.0 + p.beta)) < 1e-10);
    CHECK(std::abs(disc * disc - (sol.roots[0] - sol.roots[1]) * (sol.roots[0] - sol.roots[1])) < 1e-9);
  }
}

TEST_CASE("alpha = 0, n = 0 gives mu = 0 for the bare class") {
  // constant solution of z(z-1) w'' + ((beta+1)(z-1) + (gamma+1) z) w' - mu w = 0
  const che::CheParams<GaussRational> p{q(0), q(1, 3), q(2, 5), q(0), q(0)};
  const auto cond = series::termination_polynomial(che::class_family(p.alpha, p.beta, p.gamma, 2, 0), 0);
  REQUIRE(cond.degree() == 1);
  CHECK(cond.coeff(0) == q(0));
  const auto sol = che::che_mu_values(p, 2, 0);
  REQUIRE(sol.roots.size() == 1);
  CHECK(std::abs(sol.roots[0]) < 1e-14);
}

TEST_CASE("eigenstates for every class") {
  Gen gen(15);
  for (int trial = 0; trial < 6; ++trial) {
    const auto p = gen.che_params();
    for (int k = 1; k <= 8; ++k) {
      for (int n = 0; n <= 3; ++n) {
        const auto sol = che::che_mu_values(p, k, n);
        REQUIRE(sol.roots.size() == static_cast<std::size_t>(n + 1));
        CHECK(sol.worst_tail < 1e-8);
        for (Complex mu : sol.roots) {
          const auto st = che::che_eigenstate(p, k, n, mu);
          CHECK(st.polynomial.degree() == n);
          CHECK(st.residual < 1e-8);
          if (k == 2) CHECK(st.prefactor.trivial());
          if (k == 6) {
            for (const auto& f : st.prefactor.powers) CHECK(std::abs(f.exponent) < 1e-12);
            CHECK(std::abs(st.prefactor.log_derivative(Complex(0.4, 0.1)) + p.alpha) < 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("identify and shape detection") {
  Gen gen(16);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = gen.che_params();
    const auto eq = che::che_to_nu(p);
    std::set<int> hit;
    for (int k = 1; k <= 8; ++k) {
      const auto ids = che::identify(che::branch_from_pi(eq, che::catalog_pi(k, p.alpha, p.beta, p.gamma)), p.alpha,
                                     p.beta, p.gamma);
      REQUIRE(ids.size() == 1);
      hit.insert(ids[0]);
    }
    CHECK(hit.size() == 8);
  }
  const auto p = sample();
  auto eq = che::che_to_nu(p);
  const GaussRational k = q(-2, 3);
  eq.sigma = eq.sigma * k;
  eq.tau_tilde = eq.tau_tilde * k;
  eq.sigma_tilde = eq.sigma_tilde * (k * k);
  const auto s = che::detect_shape(eq);
  REQUIRE(s.has_value());
  CHECK(s->alpha == p.alpha);
  CHECK(s->beta == p.beta);
  CHECK(s->gamma == p.gamma);
  CHECK(s->mu == p.mu);
  CHECK(s->nu == p.nu);
}
