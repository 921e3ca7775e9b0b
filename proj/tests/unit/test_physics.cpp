#include "heunforge/physics.hpp"

#include <doctest.h>

#include <cmath>

using namespace heunforge;
using namespace heunforge::physics;

TEST_CASE("Coulomb energies") {
  CHECK(coulomb3s_energy({0, 0, 0.0}) == 0.0);
  CHECK(coulomb3s_energy({1, 0, 0.0}) == 3.0);
  CHECK(coulomb3s_energy({0, 0, 2.0}) == -1.0);
  CHECK(coulomb3s_energy({1, -2, 0.0}) == coulomb3s_energy({1, 2, 0.0}));
  CHECK(coulomb3s_energy_exact(2, 1, Rational(1, 2)) == Rational(15) - Rational(1, 256));
  CHECK_THROWS_AS(coulomb3s_energy({-1, 0, 0.0}), InvalidInput);
}

TEST_CASE("Coulomb relations hold on the grid") {
  for (int n = 0; n <= 5; ++n)
    for (int m = 0; m <= 3; ++m) {
      const auto c0 = coulomb3s_verify({n, m, 0.0});
      CHECK(c0.class1() < 1e-10);
      CHECK(c0.class2() < 1e-10);
      for (double g : {0.5, 2.0}) {
        const auto c = coulomb3s_verify({n, m, g});
        CHECK(c.class1() < 1e-9);
        CHECK(c.class2() < 1e-9);
        CHECK(std::abs(c.energy - coulomb3s_energy({n, m, g})) < 1e-12);
      }
    }
}

TEST_CASE("Coulomb with gamma = 0 is exact") {
  for (int n = 0; n <= 5; ++n)
    for (int m = 0; m <= 3; ++m) {
      const auto c = coulomb3s_verify<GaussRational>(n, m, GaussRational(0));
      const int k = n + m;
      CHECK(c.energy == GaussRational(k * (k + 2)));
      CHECK(c.class1() == 0.0);
      CHECK(c.class2() == 0.0);
    }
  // 1 + E +- i gamma = (k+1 +- i gamma/(2(k+1)))^2, so rational gamma stays exact too
  for (int n = 0; n <= 5; ++n)
    for (int m = 0; m <= 3; ++m)
      for (const Rational& g : {Rational(1, 2), Rational(2), Rational(1, 3)}) {
        const auto c = coulomb3s_verify<GaussRational>(n, m, GaussRational(g));
        CHECK(c.energy == GaussRational(coulomb3s_energy_exact(n, m, g)));
        CHECK(c.class1() == 0.0);
        CHECK(c.class2() == 0.0);
      }
}

TEST_CASE("two electrons, n = 1") {
  const ElectronsState st = electrons_sphere_state({1, 1.0, 2.0});
  CHECK(std::abs(st.R - std::sqrt(2.0) / 2.0) < 1e-12);
  CHECK(std::abs(st.E - 1.0) < 1e-12);
  CHECK(st.polynomial.degree() == 1);
  CHECK(st.residual < 1e-8);
  CHECK(st.bethe < 1e-8);
  for (double g : {0.5, 2.0, 3.0})
    for (double d : {0.5, 1.0, 3.0}) CHECK(std::abs(electrons_sphere_state({1, g, d}).E - g) < 1e-10);
}

TEST_CASE("two electrons, n = 2") {
  const ElectronsState st = electrons_sphere_state({2, 1.0, 1.0});
  CHECK(std::abs(st.R - 2.0) < 1e-10);
  CHECK(std::abs(st.E - 0.25) < 1e-10);
  CHECK(st.determinant_mismatch <= 1e-10);
  CHECK(st.bethe < 1e-8);
  // here p = (z + 1)(z + 1/3): one root sits on the singular point -1
  REQUIRE(st.roots.size() == 2);
  CHECK(std::min(std::abs(st.roots[0] + 1.0), std::abs(st.roots[1] + 1.0)) < 1e-9);
  for (double g : {0.5, 1.0, 2.0, 3.0})
    for (double d : {0.5, 1.0, 2.0, 3.0}) {
      const ElectronsState s = electrons_sphere_state({2, g, d});
      const auto cf = electrons_closed_form(2, g, d);
      REQUIRE(cf.has_value());
      CHECK(std::abs(s.R - cf->R) < 1e-9);
      CHECK(std::abs(s.E - cf->E) < 1e-9);
      CHECK(s.bethe < 1e-8);
    }
  CHECK_FALSE(electrons_closed_form(3, 1.0, 1.0).has_value());
}

TEST_CASE("Bethe residual") {
  // delta = 1/gamma kills the side terms; the pair {-t, t} then gives
  // +-(1/gamma + 1)/t at the two roots
  const double t = 0.7;
  CHECK(std::abs(bethe_residual({Complex(-t), Complex(t)}, 4.0, 0.25) - 1.25 / t) < 1e-14);
  // one root: 2 z/(z^2-1) side + 1/(gamma z)
  const Complex z(0.3, 0.4);
  const Complex want = 0.5 / z + 0.5 * (2.0 - 0.5) * (1.0 / (z + 1.0) + 1.0 / (z - 1.0));
  CHECK(std::abs(bethe_residual({z}, 2.0, 2.0) - std::abs(want)) < 1e-14);
  CHECK_THROWS_AS(bethe_residual({Complex(0.5), Complex(0.5)}, 1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(bethe_residual({Complex(0.5)}, 0.0, 1.0), InvalidInput);
}

TEST_CASE("electrons input checks") {
  CHECK_THROWS_AS(electrons_heun_params(0, 1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(electrons_heun_params(1, 0.0, 1.0), InvalidInput);
  const auto p = electrons_heun_params(2, 2.0, 3.0);
  CHECK(std::abs(p.gamma - 0.5) < 1e-15);
  CHECK(std::abs(p.delta - 1.25) < 1e-15);
  CHECK(std::abs(p.epsilon - 1.25) < 1e-15);
  CHECK(std::abs(p.a + 1.0) < 1e-15);
}

TEST_CASE("double-well spectrum") {
  CHECK(doublewell_spectrum({0, 1.0, 9.0, Parity::symmetric}) == 0.0);
  CHECK(doublewell_spectrum({0, 1.0, 49.0, Parity::symmetric}) == -4.0);
  CHECK(doublewell_spectrum({0, 1.0, 25.0, Parity::antisymmetric}) == 0.0);
  CHECK_THROWS_AS(doublewell_spectrum({0, 0.0, 1.0, Parity::symmetric}), InvalidInput);
  CHECK_THROWS_AS(doublewell_spectrum({0, 1.0, -1.0, Parity::symmetric}), InvalidInput);
  CHECK_THROWS_AS(doublewell_spectrum({-1, 1.0, 1.0, Parity::symmetric}), InvalidInput);
  CHECK(parse_parity("a") == Parity::antisymmetric);
  CHECK(parse_parity(to_string(Parity::symmetric)) == Parity::symmetric);
  CHECK_FALSE(parse_parity("odd").has_value());
}

TEST_CASE("double-well shift identity") {
  // 3 + 4N - d sqrt(U) == 5 + 4N' - d sqrt(U') makes the two levels equal
  for (int N = 0; N <= 3; ++N)
    for (int Np = 0; Np <= 3; ++Np)
      for (double d : {0.5, 1.0, 2.0})
        for (double U : {25.0, 100.0}) {
          const double root_p = std::sqrt(U) + (2.0 + 4.0 * (Np - N)) / d;
          if (root_p <= 0.0) continue;
          const double e_s = doublewell_spectrum({N, d, U, Parity::symmetric});
          const double e_a = doublewell_spectrum({Np, d, root_p * root_p, Parity::antisymmetric});
          CHECK(std::abs(e_s - e_a) < 1e-9 * std::max(1.0, std::abs(e_s)));
        }
}

TEST_CASE("double-well pipeline reproduces the closed form") {
  for (Parity par : {Parity::symmetric, Parity::antisymmetric})
    for (int N = 0; N <= 3; ++N) {
      const DoubleWellInput in{N, 1.0, 100.0, par};
      const DoubleWellReport rep = doublewell_verify(in);
      CHECK(rep.epsilon_closed == doublewell_spectrum(in));
      REQUIRE(rep.classes.size() == 2);
      for (const auto& cc : rep.classes) {
        CHECK(std::abs(cc.epsilon_pipeline - rep.epsilon_closed) < 1e-9 * std::max(1.0, std::abs(rep.epsilon_closed)));
        CHECK(std::min(cc.residual_minus_branch, cc.residual_plus_branch) < 1e-9);
        CHECK(cc.mu_roots.size() == static_cast<std::size_t>(N + 1));
        CHECK(cc.worst_tail < 1e-8);
        CHECK(cc.worst_residual < 1e-8);
      }
    }
}
