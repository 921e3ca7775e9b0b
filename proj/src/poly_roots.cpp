#include "heunforge/poly.hpp"

#include <Eigen/Eigenvalues>

namespace heunforge {

namespace {

Complex polish(const Poly<Complex>& p, const Poly<Complex>& dp, Complex z) {
  for (int it = 0; it < 3; ++it) {
    Complex f = p(z);
    Complex df = dp(z);
    if (df == Complex{}) break;
    Complex step = f / df;
    Complex candidate = z - step;
    if (std::abs(p(candidate)) >= std::abs(f)) break;
    z = candidate;
  }
  return z;
}

}  // namespace

std::vector<Complex> roots(const Poly<Complex>& a) {
  if (a.is_zero()) throw std::domain_error("roots: zero polynomial");
  const int n = a.degree();
  if (n < 1) throw std::domain_error("roots: constant polynomial has no roots");
  if (n == 1) return {-a.coeff(0) / a.coeff(1)};

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  const Complex lead = a.leading();
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -a.coeff(i) / lead;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("roots: eigenvalue solver failed");

  const Poly<Complex> dp = derivative(a);
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(polish(a, dp, solver.eigenvalues()(i)));
  return out;
}

}  // namespace heunforge
