#include "heunforge/che.hpp"
#include "heunforge/errors.hpp"
#include "heunforge/heun.hpp"
#include "heunforge/nu_engine.hpp"
#include "heunforge/physics.hpp"
#include "heunforge/poly_text.hpp"
#include "heunforge/report.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace heunforge;

namespace {

std::vector<Complex> coeffs(const Poly<Complex>& p) {
  const auto c = p.coeffs();
  return {c.begin(), c.end()};
}

py::dict state_dict(const series::Eigenstate& st) {
  py::dict d;
  d["family"] = st.family;
  d["class"] = st.label;
  d["n"] = st.n;
  d["accessory"] = st.accessory;
  d["polynomial"] = coeffs(st.polynomial);
  d["residual"] = st.residual;
  return d;
}

nu::Mode parse_mode(const std::string& mode) {
  if (mode == "extended") return nu::Mode::extended;
  if (mode == "classic") return nu::Mode::classic;
  throw InvalidInput("mode must be 'classic' or 'extended'");
}

py::list branches(const std::string& sigma, const std::string& tau_tilde, const std::string& sigma_tilde,
                  const std::string& mode, int grid) {
  nu::NuEquation<Complex> eq;
  eq.sigma = parse_poly<Complex>(sigma);
  eq.tau_tilde = parse_poly<Complex>(tau_tilde);
  eq.sigma_tilde = parse_poly<Complex>(sigma_tilde);
  eq.mode = parse_mode(mode);
  nu::SearchOptions opts;
  opts.grid_size = grid;
  py::list out;
  for (const auto& b : nu::enumerate_branches(eq, opts).branches) {
    py::dict d;
    d["sign"] = nu::to_string(b.sign);
    d["g"] = coeffs(b.g);
    d["pi"] = coeffs(b.pi);
    d["tau"] = coeffs(b.tau);
    d["h"] = coeffs(b.h);
    out.append(d);
  }
  return out;
}

heun::HeunClass heun_class(const std::string& name) {
  const auto c = heun::parse_class(name);
  if (!c) throw InvalidInput("unknown Heun class '" + name + "'");
  return *c;
}

py::list heun_solve(const std::string& cls, int n, Complex gamma, Complex delta, Complex epsilon, Complex a) {
  const heun::HeunClass c = heun_class(cls);
  const auto p = heun::class_params(c, n, gamma, delta, epsilon, a);
  py::list out;
  for (Complex q : heun::heun_accessory(p, c, n).termination.roots)
    out.append(state_dict(heun::heun_eigenstate(p, c, n, q)));
  return out;
}

py::list che_solve(int k, int n, Complex alpha, Complex beta, Complex gamma) {
  const che::CheParams<Complex> p{alpha, beta, gamma, 0.0, 0.0};
  py::list out;
  for (Complex mu : che::che_mu_values(p, k, n).roots) out.append(state_dict(che::che_eigenstate(p, k, n, mu)));
  return out;
}

py::dict electrons(int n, double gamma, double delta) {
  const physics::ElectronsState st = physics::electrons_sphere_state({n, gamma, delta});
  py::dict d;
  d["R"] = st.R;
  d["E"] = st.E;
  d["q"] = st.q;
  d["polynomial"] = coeffs(st.polynomial);
  d["roots"] = st.roots;
  d["bethe"] = st.bethe;
  d["residual"] = st.residual;
  return d;
}

double doublewell(int N, double d, double U0, const std::string& parity) {
  const auto p = physics::parse_parity(parity);
  if (!p) throw InvalidInput("parity must be 'symmetric' or 'antisymmetric'");
  return physics::doublewell_spectrum({N, d, U0, *p});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Polynomial solutions of Heun-type equations";

  // InvalidInput and ParseError derive from std::invalid_argument, which
  // pybind11 already raises as ValueError
  py::register_exception<NoSolution>(m, "NoSolution", PyExc_RuntimeError);
  py::register_exception<VerificationError>(m, "VerificationError", PyExc_RuntimeError);
  py::register_exception<Unsupported>(m, "Unsupported", PyExc_RuntimeError);

  m.attr("SCHEMA_VERSION") = report::kSchemaVersion;
  m.def("branches", &branches, py::arg("sigma"), py::arg("tau_tilde") = "0", py::arg("sigma_tilde") = "0",
        py::arg("mode") = "extended", py::arg("grid") = 32,
        "All pi branches of sigma^2 u'' + sigma tau~ u' + sigma~ u = 0 (polynomials as text).");
  m.def("heun_class_ab", [](const std::string& cls, int n, Complex g, Complex d, Complex e) {
    return heun::class_ab(heun_class(cls), n, g, d, e);
  });
  m.def("heun_solve", &heun_solve, py::arg("cls"), py::arg("n"), py::arg("gamma"), py::arg("delta"),
        py::arg("epsilon"), py::arg("a"));
  m.def("che_solve", &che_solve, py::arg("k"), py::arg("n"), py::arg("alpha"), py::arg("beta"), py::arg("gamma"));
  m.def("coulomb3s_energy", [](int n, int mm, double gamma) { return physics::coulomb3s_energy({n, mm, gamma}); },
        py::arg("n"), py::arg("m"), py::arg("gamma"));
  m.def("electrons_sphere_state", &electrons, py::arg("n"), py::arg("gamma"), py::arg("delta"));
  m.def("bethe_residual", &physics::bethe_residual, py::arg("roots"), py::arg("gamma"), py::arg("delta"));
  m.def("doublewell_spectrum", &doublewell, py::arg("N"), py::arg("d"), py::arg("U0"),
        py::arg("parity") = "symmetric");
}
