#include "heunforge/che.hpp"
#include "heunforge/heun.hpp"
#include "heunforge/nu_engine.hpp"

#include "../support/catalog.hpp"
#include "../support/generators.hpp"

#include <doctest.h>

#include <algorithm>

using namespace heunforge;
using heunforge::testing::Gen;
using heunforge::testing::catalog_match;

namespace {

using P = Poly<Complex>;
using E = Poly<GaussRational>;

GaussRational q(long long n, long long d = 1) { return GaussRational(Rational(n, d)); }

heun::HeunParams<GaussRational> sample_heun() {
  // (gamma, delta, epsilon, a) = (1/2, 1/3, 1/4, 2), Fuchsian beta
  heun::HeunParams<GaussRational> p;
  p.gamma = q(1, 2);
  p.delta = q(1, 3);
  p.epsilon = q(1, 4);
  p.alpha = q(3, 5);
  p.beta = p.epsilon - p.alpha + p.gamma + p.delta - q(1);
  p.q = q(7, 3);
  p.a = q(2);
  return p;
}

}  // namespace

TEST_CASE("degree bounds are enforced") {
  nu::NuEquation<GaussRational> eq{E({q(1)}), E({q(0), q(0), q(0), q(0), q(1)}), E{}, nu::Mode::extended};
  CHECK_THROWS_AS(nu::validate(eq), InvalidInput);
  eq.sigma = E{};
  CHECK_THROWS_AS(nu::validate(eq), InvalidInput);
  nu::NuEquation<GaussRational> classic{E({q(0), q(0), q(1)}), E({q(1)}), E{}, nu::Mode::classic};
  CHECK_THROWS_AS(nu::validate(classic), InvalidInput);
  nu::NuEquation<GaussRational> ok{E({q(0), q(1)}), E({q(1)}), E{}, nu::Mode::classic};
  CHECK_NOTHROW(nu::validate(ok));
  CHECK_THROWS_AS(nu::radicand(ok, E({q(0), q(1)})), InvalidInput);
}

TEST_CASE("radicand examples") {
  const auto p = sample_heun();
  const auto eq = heun::heun_to_nu(p);
  const E rad = nu::radicand(eq, heun::catalog_g(1, p));
  const E gap = nu::half_gap(eq);
  CHECK(rad == gap * gap);
  // g = 0 with sigma~ = 0 leaves the square of the half gap
  nu::NuEquation<GaussRational> plain{eq.tau_tilde, eq.sigma, E{}, nu::Mode::extended};
  CHECK(nu::radicand(plain, E{}) == gap * gap);
  Gen gen(21);
  for (int i = 0; i < 20; ++i) {
    nu::NuEquation<GaussRational> r{gen.poly<GaussRational>(2), gen.poly<GaussRational>(3),
                                    gen.poly<GaussRational>(4), nu::Mode::extended};
    CHECK(nu::radicand(r, gen.poly<GaussRational>(1)).degree() <= 4);
  }
}

TEST_CASE("Heun branch catalog from the generic search") {
  const auto p = sample_heun();
  const auto search = nu::enumerate_branches(nu::to_complex(heun::heun_to_nu(p)));
  INFO(search.note);
  const auto pc = heun::to_complex(p);
  CHECK(catalog_match(search.branches,
                      [&](int k) {
                        const heun::HeunClass c = heun::class_of_branch(k);
                        return std::make_pair(catalog_pi(c, pc.gamma, pc.delta, pc.epsilon, pc.a),
                                              heun::catalog_g((k + 1) / 2, pc));
                      },
                      1e-9));
  CHECK(search.starts >= 32);
  // distinct g's
  std::vector<P> gs;
  for (const auto& b : search.branches)
    if (std::none_of(gs.begin(), gs.end(), [&](const P& g) { return approx_equal(g, b.g, 1e-8); }))
      gs.push_back(b.g);
  CHECK(gs.size() == 4);
}

TEST_CASE("CHE branch catalog from the generic search") {
  Gen gen(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = gen.che_params();
    const auto search = nu::enumerate_branches(che::che_to_nu(p));
    const bool ok = catalog_match(search.branches,
                                  [&](int k) {
                                    return std::make_pair(che::catalog_pi(k, p.alpha, p.beta, p.gamma),
                                                          che::catalog_g((k + 1) / 2, p));
                                  },
                                  1e-8);
    CHECK(ok);
    bool zero_branch = false;
    for (const auto& b : search.branches) zero_branch = zero_branch || b.pi.max_abs() < 1e-10;
    CHECK(zero_branch);
  }
}

TEST_CASE("branch invariants hold for every returned branch") {
  Gen gen(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto eq = heun::heun_to_nu(gen.heun_params());
    for (const auto& b : nu::enumerate_branches(eq).branches) {
      const P rad = nu::radicand(eq, b.g);
      CHECK(approx_equal(b.s * b.s, rad, 1e-10));
      const P expect_pi = b.sign == nu::Sign::plus ? nu::half_gap(eq) + b.s : nu::half_gap(eq) - b.s;
      CHECK(approx_equal(b.pi, expect_pi, 1e-12));
      CHECK(approx_equal(b.tau, eq.tau_tilde + Complex(2.0) * b.pi, 1e-12));
      CHECK(approx_equal(b.h, b.g + derivative(b.pi), 1e-12));
      CHECK(approx_equal(nu::sigma_bar(eq, b.pi), b.h * eq.sigma, 1e-9));
      // substituting the slope constraint leaves h - h_n constant
      for (int n = 0; n <= 4; ++n) {
        const auto rel = nu::quantization(eq, b, n);
        const P hn = nu::h_n_without_constant(b.tau, eq.sigma, n);
        const P diff = b.h - hn - P({rel.integration_constant, rel.slope_residual});
        CHECK(diff.max_abs() < 1e-9 * std::max(1.0, b.h.max_abs()));
      }
    }
  }
}

TEST_CASE("radicand already a square") {
  // sigma~ = ((sigma' - tau~)/2)^2 makes g = 0 admissible with s = 0 ... the
  // catalogue also contains g = 0 for sigma~ = 0: s = (sigma'-tau~)/2
  const P sigma({0.0, -1.0, 1.0});
  const P tau({0.5, 2.0});
  nu::NuEquation<Complex> eq{tau, sigma, P{}, nu::Mode::classic};
  const auto search = nu::enumerate_branches(eq);
  bool has_zero_g = false;
  for (const auto& b : search.branches)
    if (b.g.max_abs() < 1e-12) {
      has_zero_g = true;
      CHECK((approx_equal(b.s, nu::half_gap(eq), 1e-12) || approx_equal(b.s, -nu::half_gap(eq), 1e-12)));
    }
  CHECK(has_zero_g);
  // identically zero radicand: one branch
  const P gap = nu::half_gap(eq);
  nu::NuEquation<Complex> flat{tau, sigma, gap * gap, nu::Mode::classic};
  const auto flat_search = nu::enumerate_branches(flat);
  int zero_g = 0;
  for (const auto& b : flat_search.branches)
    if (b.g.max_abs() < 1e-12) {
      ++zero_g;
      CHECK(approx_equal(b.pi, gap, 1e-12));
    }
  CHECK(zero_g == 1);
}

TEST_CASE("classic mode: harmonic oscillator") {
  // psi'' + (eps - z^2) psi = 0: sigma = 1, tau~ = 0, sigma~ = eps - z^2
  for (double eps : {1.0, 3.0, 5.5}) {
    nu::NuEquation<Complex> eq{P{}, P({1.0}), P({eps, 0.0, -1.0}), nu::Mode::classic};
    const auto search = nu::enumerate_branches(eq);
    REQUIRE(search.branches.size() == 2);
    for (const auto& b : search.branches) {
      CHECK(std::abs(b.g.coeff(0) - eps) < 1e-12);
      CHECK(std::abs(std::abs(b.pi.coeff(1)) - 1.0) < 1e-12);
    }
    // pi = -z gives tau = -2z, lambda = eps - 1 and lambda_n = 2n
    const auto it = std::find_if(search.branches.begin(), search.branches.end(),
                                 [](const auto& b) { return b.pi.coeff(1).real() < 0; });
    REQUIRE(it != search.branches.end());
    for (int n = 0; n < 4; ++n) {
      const auto rel = nu::quantization(eq, *it, n);
      REQUIRE(rel.lambda_n.has_value());
      CHECK(std::abs(*rel.lambda_n - Complex(2.0 * n)) < 1e-12);
      CHECK(std::abs(rel.slope_residual - Complex(eps - 1.0 - 2.0 * n)) < 1e-12);
    }
  }
  // n = 0 kills both terms of lambda_n
  nu::NuEquation<Complex> eq{P({0.0, 3.0}), P({0.0, 0.0, 1.0}), P{}, nu::Mode::classic};
  nu::PiBranch<Complex> b = nu::make_branch(eq, P{}, nu::Sign::plus);
  CHECK(std::abs(*nu::quantization(eq, b, 0).lambda_n) == 0.0);
}

TEST_CASE("reduce examples") {
  const auto p = sample_heun();
  const auto eq = heun::heun_to_nu(p);
  // pi_e1: slope of h is alpha beta + 2[3 - (eps+gamma+delta)]
  const auto b1 = heun::branch_from_pi(eq, heun::catalog_pi(heun::HeunClass::VIII, p.gamma, p.delta, p.epsilon, p.a));
  CHECK(b1.h.coeff(1) == p.alpha * p.beta + q(2) * (q(3) - (p.epsilon + p.gamma + p.delta)));
  // pi = 0: h = g
  const auto b2 = heun::branch_from_pi(eq, E{});
  CHECK(b2.h == b2.g);
  CHECK(b2.h == heun::catalog_g(1, p));
  // CHE pi_e1: h = (mu+nu-2 alpha) z - mu + alpha - beta - gamma
  che::CheParams<GaussRational> c{q(3, 2), q(-1, 3), q(2, 5), q(1, 7), q(5, 4)};
  const auto ceq = che::che_to_nu(c);
  const auto cb = che::branch_from_pi(ceq, che::catalog_pi(1, c.alpha, c.beta, c.gamma));
  CHECK(cb.h == E({-c.mu + c.alpha - c.beta - c.gamma, c.mu + c.nu - q(2) * c.alpha}));
  // a pi that is not a branch leaves a remainder
  CHECK_THROWS_AS(nu::reduce(eq, nu::PiBranch<GaussRational>{E{}, nu::Sign::plus, E({q(1), q(1)}), E{}, E{}, E{}}),
                  VerificationError);
}

TEST_CASE("quantization examples") {
  const auto p = sample_heun();
  const auto eq = heun::heun_to_nu(p);
  for (int n = 0; n <= 6; ++n) {
    const GaussRational nn(n);
    // pi_e2 = 0: alpha beta = -n(eps+gamma+delta+n-1)
    const auto b2 = heun::branch_from_pi(eq, E{});
    CHECK(nu::quantization(eq, b2, n).slope_residual ==
          p.alpha * p.beta + nn * (p.epsilon + p.gamma + p.delta + nn - q(1)));
    // pi_e1: alpha beta = (n+2)(eps+gamma+delta-n-3)
    const auto b1 = heun::branch_from_pi(eq, heun::catalog_pi(heun::HeunClass::VIII, p.gamma, p.delta, p.epsilon, p.a));
    CHECK(nu::quantization(eq, b1, n).slope_residual ==
          p.alpha * p.beta - (nn + q(2)) * (p.epsilon + p.gamma + p.delta - nn - q(3)));
  }
  // CHE pi_e2 = 0: mu + nu = -n alpha
  che::CheParams<GaussRational> c{q(3, 2), q(-1, 3), q(2, 5), q(1, 7), q(5, 4)};
  const auto ceq = che::che_to_nu(c);
  const auto cb = che::branch_from_pi(ceq, E{});
  for (int n = 0; n <= 5; ++n)
    CHECK(nu::quantization(ceq, cb, n).slope_residual == c.mu + c.nu + GaussRational(n) * c.alpha);
}

TEST_CASE("phi_factor examples") {
  const auto p = heun::to_complex(sample_heun());
  const auto eq = heun::heun_to_nu(p);
  const auto phi1 = nu::phi_factor(heun::catalog_pi(heun::HeunClass::VIII, p.gamma, p.delta, p.epsilon, p.a), eq.sigma);
  const auto e = heun::prefactor_exponents(phi1, p.a);
  CHECK(std::abs(e[0] - (1.0 - p.gamma)) < 1e-12);
  CHECK(std::abs(e[1] - (1.0 - p.delta)) < 1e-12);
  CHECK(std::abs(e[2] - (1.0 - p.epsilon)) < 1e-12);
  CHECK(derivative(phi1.exponential_part).max_abs() < 1e-12);

  che::CheParams<Complex> c{1.5, -0.25, 0.75, 0.1, 0.2};
  const auto ceq = che::che_to_nu(c);
  const auto phic = nu::phi_factor(che::catalog_pi(1, c.alpha, c.beta, c.gamma), ceq.sigma);
  CHECK(approx_equal(phic.exponential_part, P({0.0, -c.alpha}), 1e-12));
  REQUIRE(phic.powers.size() == 2);
  CHECK(std::abs(phic.powers[0].point) < 1e-12);
  CHECK(std::abs(phic.powers[0].exponent + c.beta) < 1e-12);
  CHECK(std::abs(phic.powers[1].exponent + c.gamma) < 1e-12);

  CHECK(nu::phi_factor(P{}, eq.sigma).trivial());
  CHECK_THROWS_AS(nu::phi_factor(P({1.0}), P({0.0, 0.0, 1.0})), Unsupported);

  // log-derivative equals pi/sigma away from the roots
  Gen gen(51);
  for (int i = 0; i < 50; ++i) {
    const P pi = gen.poly<Complex>(2), sigma = gen.poly<Complex>(3);
    const auto phi = nu::phi_factor(pi, sigma);
    const Complex z = gen.complex(2.0);
    if (std::abs(sigma(z)) < 1e-3) continue;
    CHECK(std::abs(phi.log_derivative(z) - pi(z) / sigma(z)) < 1e-9 * std::max(1.0, std::abs(pi(z) / sigma(z))));
    const Complex h = 1e-5;
    const Complex fd = (phi.log_derivative(z + h) - phi.log_derivative(z - h)) / (2.0 * h);
    CHECK(std::abs(fd - phi.log_derivative_prime(z)) < 1e-4 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("polynomial_solution examples") {
  // n = 0 Heun: constant solution iff alpha beta = 0 and q = 0
  heun::HeunParams<Complex> p = heun::class_params<Complex>(heun::HeunClass::I, 0, 0.5, 0.5, 0.5, 2.0);
  auto eq = heun::heun_to_nu(p);
  auto b = heun::branch_from_pi(eq, P{});
  const P y0 = nu::polynomial_solution(eq, b, 0);
  CHECK(approx_equal(y0, P({1.0}), 1e-14));
  p.q = 0.3;
  eq = heun::heun_to_nu(p);
  b = heun::branch_from_pi(eq, P{});
  CHECK_THROWS_AS(nu::polynomial_solution(eq, b, 0), NoSolution);
  // wrong n: slope condition fails
  CHECK_THROWS_AS(nu::polynomial_solution(eq, b, 1), NoSolution);
  CHECK_THROWS_AS(nu::polynomial_solution(P({1.0}), P{}, P{}, -1), InvalidInput);
}

TEST_CASE("remainder Jacobian matches finite differences") {
  Gen gen(61);
  for (int i = 0; i < 30; ++i) {
    const P known = gen.poly<Complex>(4), sigma = gen.poly<Complex>(3);
    const Complex g1 = gen.complex(), g0 = gen.complex();
    const auto f = nu::remainder_and_jacobian(known, sigma, g1, g0);
    const Complex h = 1e-6;
    const auto f1p = nu::remainder_and_jacobian(known, sigma, g1 + h, g0);
    const auto f1m = nu::remainder_and_jacobian(known, sigma, g1 - h, g0);
    const auto f0p = nu::remainder_and_jacobian(known, sigma, g1, g0 + h);
    const auto f0m = nu::remainder_and_jacobian(known, sigma, g1, g0 - h);
    auto close = [](Complex a, Complex b) { return std::abs(a - b) < 1e-5 * std::max(1.0, std::abs(b)); };
    CHECK(close(f.dr1_dg1, (f1p.r1 - f1m.r1) / (2.0 * h)));
    CHECK(close(f.dr0_dg1, (f1p.r0 - f1m.r0) / (2.0 * h)));
    CHECK(close(f.dr1_dg0, (f0p.r1 - f0m.r1) / (2.0 * h)));
    CHECK(close(f.dr0_dg0, (f0p.r0 - f0m.r0) / (2.0 * h)));
    // r agrees with the polynomial square-root remainder
    const P rad = known + P({g0, g1}) * sigma;
    const auto sq = sqrt_head(rad);
    CHECK(close(f.r1, sq.remainder.coeff(1)));
    CHECK(close(f.r0, sq.remainder.coeff(0)));
  }
}

TEST_CASE("exact branch certification") {
  const auto p = sample_heun();
  const auto bs = nu::branches(heun::heun_to_nu(p));
  CHECK(bs.size() == 8);
  for (const auto& b : bs) {
    const auto eq = heun::heun_to_nu(p);
    CHECK(b.s * b.s == nu::radicand(eq, b.g));
    CHECK(nu::sigma_bar(eq, b.pi) == b.h * eq.sigma);
    CHECK(heun::identify(b, p.gamma, p.delta, p.epsilon, p.a).size() == 1);
  }
}

TEST_CASE("no admissible g is reported, not thrown") {
  // z^3 sigma~ with mismatched tau~ in classic mode: discriminant constant nonzero
  nu::NuEquation<Complex> eq{P({1.0}), P({1.0}), P({0.0, 1.0}), nu::Mode::classic};
  const auto search = nu::enumerate_branches(eq);
  CHECK(search.branches.empty());
  CHECK_FALSE(search.note.empty());
}
