// heunforge: classify NU equations, solve Heun/CHE polynomial classes, run
// the physics applications. Reports go to stdout, diagnostics to stderr.

#include "heunforge/che.hpp"
#include "heunforge/errors.hpp"
#include "heunforge/heun.hpp"
#include "heunforge/nu_engine.hpp"
#include "heunforge/physics.hpp"
#include "heunforge/poly_text.hpp"
#include "heunforge/report.hpp"
#include "heunforge/series_oracle.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

using namespace heunforge;
using report::Json;

namespace {

enum Exit { kOk = 0, kInternal = 1, kUsage = 2, kNoSolution = 3, kVerification = 4 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  bool exact = false;
  report::Format format = report::Format::json;
  std::map<std::string, double> tol{
      {"residual", 1e-8}, {"tail", 1e-8}, {"relation", 1e-9}, {"energy", 1e-9}, {"bethe", 1e-8}, {"match", 1e-8}};
  int samples = 50;
  int grid = 32;

  series::ResidualOptions residual_options() const {
    series::ResidualOptions o;
    o.samples = samples;
    return o;
  }
  nu::SearchOptions search_options() const {
    nu::SearchOptions o;
    o.grid_size = grid;
    return o;
  }
};

struct ProblemArgs {
  std::string tau, sigma, sigma_tilde, heun, che, mode = "extended";
};

// Accumulates the pass/fail list that decides the exit code.
class Checks {
 public:
  void add(const std::string& name, double value, double tol) {
    const bool pass = value <= tol;
    ok_ = ok_ && pass;
    list_.push_back(Json{{"name", name}, {"value", value}, {"tol", tol}, {"pass", pass}});
  }
  bool ok() const { return ok_; }
  Json json() const { return list_; }

 private:
  Json list_ = Json::array();
  bool ok_ = true;
};

using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::vector<std::string>& items) {
  KeyValues out;
  for (const std::string& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const std::size_t comma = std::min(item.find(',', start), item.size());
      const std::string part = item.substr(start, comma - start);
      start = comma + 1;
      if (part.empty()) continue;
      const std::size_t eq = part.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got '" + part + "'");
      const std::string key = part.substr(0, eq);
      if (!out.emplace(key, part.substr(eq + 1)).second) throw UsageError("parameter '" + key + "' given twice");
    }
  }
  return out;
}

void allow_keys(const KeyValues& kv, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : kv) {
    bool known = false;
    for (const char* a : allowed) known = known || k == a;
    if (!known) throw UsageError("unknown parameter '" + k + "'");
  }
}

template <Scalar T>
std::optional<T> opt_value(const KeyValues& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) return std::nullopt;
  return parse_scalar<T>(it->second);
}

template <Scalar T>
T value(const KeyValues& kv, const std::string& key) {
  auto v = opt_value<T>(kv, key);
  if (!v) throw UsageError("missing parameter '" + key + "'");
  return *v;
}

int int_value(const KeyValues& kv, const std::string& key, std::optional<int> fallback = std::nullopt) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    if (fallback) return *fallback;
    throw UsageError("missing parameter '" + key + "'");
  }
  try {
    std::size_t used = 0;
    const int v = std::stoi(it->second, &used);
    if (used == it->second.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("parameter '" + key + "' must be an integer");
}

double real_value(const KeyValues& kv, const std::string& key) {
  const Complex z = value<Complex>(kv, key);
  if (z.imag() != 0.0) throw UsageError("parameter '" + key + "' must be real");
  return z.real();
}

// ---- problem construction ---------------------------------------------------

template <Scalar T>
heun::HeunParams<T> heun_from(const KeyValues& kv) {
  allow_keys(kv, {"gamma", "delta", "epsilon", "alpha", "beta", "q", "a"});
  heun::HeunParams<T> p;
  p.gamma = value<T>(kv, "gamma");
  p.delta = value<T>(kv, "delta");
  p.epsilon = value<T>(kv, "epsilon");
  p.a = value<T>(kv, "a");
  p.q = opt_value<T>(kv, "q").value_or(scalar<T>(0));
  const auto al = opt_value<T>(kv, "alpha");
  const auto be = opt_value<T>(kv, "beta");
  const T sum = p.gamma + p.delta + p.epsilon - scalar<T>(1);
  if (al && be) {
    p.alpha = *al;
    p.beta = *be;
  } else if (al) {
    p.alpha = *al;
    p.beta = sum - *al;
  } else if (be) {
    p.beta = *be;
    p.alpha = sum - *be;
  } else {
    throw UsageError("Heun parameters need alpha or beta (the other follows from the Fuchsian condition)");
  }
  heun::validate(p);
  return p;
}

template <Scalar T>
che::CheParams<T> che_from(const KeyValues& kv) {
  allow_keys(kv, {"alpha", "beta", "gamma", "mu", "nu"});
  return {value<T>(kv, "alpha"), value<T>(kv, "beta"), value<T>(kv, "gamma"),
          opt_value<T>(kv, "mu").value_or(scalar<T>(0)), opt_value<T>(kv, "nu").value_or(scalar<T>(0))};
}

int input_count(const ProblemArgs& a) {
  return int(!a.sigma.empty()) + int(!a.heun.empty()) + int(!a.che.empty());
}

template <Scalar T>
nu::NuEquation<T> equation_from(const ProblemArgs& a) {
  if (input_count(a) != 1) throw UsageError("give exactly one of --sigma, --heun, --che");
  if (!a.heun.empty()) return heun::heun_to_nu(heun_from<T>(parse_key_values({a.heun})));
  if (!a.che.empty()) return che::che_to_nu(che_from<T>(parse_key_values({a.che})));
  nu::NuEquation<T> eq;
  eq.sigma = parse_poly<T>(a.sigma);
  eq.tau_tilde = parse_poly<T>(a.tau.empty() ? "0" : a.tau);
  eq.sigma_tilde = parse_poly<T>(a.sigma_tilde.empty() ? "0" : a.sigma_tilde);
  if (a.mode == "classic")
    eq.mode = nu::Mode::classic;
  else if (a.mode == "extended")
    eq.mode = nu::Mode::extended;
  else
    throw UsageError("--mode must be classic or extended");
  nu::validate(eq);
  return eq;
}

template <Scalar T>
Json heun_params_json(const heun::HeunParams<T>& p) {
  using report::to_json;
  return Json{{"gamma", to_json(p.gamma)}, {"delta", to_json(p.delta)}, {"epsilon", to_json(p.epsilon)},
              {"alpha", to_json(p.alpha)}, {"beta", to_json(p.beta)},   {"q", to_json(p.q)},
              {"a", to_json(p.a)}};
}

template <Scalar T>
Json che_params_json(const che::CheParams<T>& p) {
  using report::to_json;
  return Json{{"alpha", to_json(p.alpha)}, {"beta", to_json(p.beta)}, {"gamma", to_json(p.gamma)},
              {"mu", to_json(p.mu)},       {"nu", to_json(p.nu)}};
}

Json complex_list(const std::vector<Complex>& zs) {
  Json out = Json::array();
  for (Complex z : zs) out.push_back(report::to_json(z));
  return out;
}

// Alpha and beta from their product and the Fuchsian sum.
template <Scalar T>
std::pair<T, T> split_ab(const T& ab, const T& sum) {
  const T disc = sum * sum - scalar<T>(4) * ab;
  T root;
  if constexpr (is_exact_v<T>) {
    const auto r = exact_sqrt(disc);
    if (!r) throw UsageError("alpha, beta are irrational here; use --backend float");
    root = *r;
  } else {
    root = principal_sqrt(disc);
  }
  const T half = scalar<T>(1) / scalar<T>(2);
  return {(sum + root) * half, (sum - root) * half};
}

Json base_doc(const char* command, bool exact) {
  return Json{{"schema", report::kSchemaVersion}, {"command", command}, {"backend", exact ? "exact" : "float"}};
}

// ---- classify -----------------------------------------------------------------

template <Scalar T>
nu::PiBranch<T> unscaled(nu::PiBranch<T> b, const T& k) {
  b.pi = b.pi * (scalar<T>(1) / k);
  return b;
}

template <Scalar T>
int run_classify(const RunConfig& cfg, const ProblemArgs& args, Json& doc) {
  const nu::NuEquation<T> eq = equation_from<T>(args);
  doc["input"] = Json{{"mode", eq.mode == nu::Mode::classic ? "classic" : "extended"},
                      {"sigma", report::poly_json(eq.sigma)},
                      {"tau_tilde", report::poly_json(eq.tau_tilde)},
                      {"sigma_tilde", report::poly_json(eq.sigma_tilde)}};

  std::vector<nu::PiBranch<T>> found;
  if constexpr (is_exact_v<T>) {
    found = nu::exact_branches(eq, cfg.search_options());
  } else {
    const nu::BranchSearch s = nu::enumerate_branches(eq, cfg.search_options());
    found = s.branches;
    doc["search"] = Json{{"starts", s.starts}, {"converged", s.converged}, {"singular", s.singular}, {"note", s.note}};
  }

  const auto hs = heun::detect_shape(eq);
  const auto cs = hs ? std::nullopt : che::detect_shape(eq);
  if (hs) {
    doc["shape"] = Json{{"family", "heun"},
                        {"gamma", report::to_json(hs->gamma)}, {"delta", report::to_json(hs->delta)},
                        {"epsilon", report::to_json(hs->epsilon)}, {"a", report::to_json(hs->a)},
                        {"alpha_beta", report::to_json(hs->ab)}, {"q", report::to_json(hs->q)}};
  } else if (cs) {
    doc["shape"] = Json{{"family", "che"}, {"params", che_params_json(*cs)}};
  } else {
    doc["shape"] = nullptr;
  }

  const double tol = cfg.tol.at("match");
  const T k = eq.sigma.leading();
  Json list = Json::array();
  for (std::size_t i = 0; i < found.size(); ++i) {
    const nu::PiBranch<T>& b = found[i];
    Json row = report::branch_json(b);
    row["index"] = i;
    Json labels = Json::array();
    if (hs) {
      for (heun::HeunClass c : heun::identify(unscaled(b, k), hs->gamma, hs->delta, hs->epsilon, hs->a, tol))
        labels.push_back(heun::to_string(c));
    } else if (cs) {
      for (int c : che::identify(unscaled(b, k), cs->alpha, cs->beta, cs->gamma, tol))
        labels.push_back("pi_e" + std::to_string(c));
    }
    row["classes"] = labels;
    try {
      row["prefactor"] = report::phi_json(nu::phi_factor(to_complex(b.pi), to_complex(eq.sigma)));
    } catch (const Unsupported& e) {
      row["prefactor"] = nullptr;
    }
    list.push_back(row);
  }
  doc["branches"] = list;
  doc["count"] = found.size();
  doc["ok"] = !found.empty();
  if (found.empty()) {
    std::cerr << "heunforge: no admissible branches\n";
    return kNoSolution;
  }
  return kOk;
}

// ---- solve --------------------------------------------------------------------

template <Scalar T>
void solve_heun(const RunConfig& cfg, heun::HeunParams<T> p, bool fixed_ab, const std::string& cls, int n,
                Json& doc, Checks& checks) {
  const auto c = heun::parse_class(cls);
  if (!c) throw UsageError("unknown Heun class '" + cls + "' (I..VIII)");
  if (!fixed_ab) p = heun::class_params(*c, n, p.gamma, p.delta, p.epsilon, p.a, p.q);
  doc["family"] = "heun";
  doc["class"] = heun::to_string(*c);
  doc["params"] = heun_params_json(p);
  doc["relation_residual"] = report::to_json(heun::class_relation(*c, n, p));
  const heun::Accessory<T> acc = heun::heun_accessory(p, *c, n);
  doc["condition"] = report::poly_json(acc.termination.condition);
  doc["accessory_roots"] = complex_list(acc.termination.roots);
  doc["worst_tail"] = acc.termination.worst_tail;
  doc["determinant_mismatch"] = acc.determinant_mismatch;
  checks.add("tail", acc.termination.worst_tail, cfg.tol.at("tail"));
  Json states = Json::array();
  for (Complex q : acc.termination.roots) {
    const series::Eigenstate st = heun::heun_eigenstate(p, *c, n, q, cfg.residual_options());
    checks.add("residual q=" + to_string(q), st.residual, cfg.tol.at("residual"));
    states.push_back(report::eigenstate_json(st));
  }
  doc["states"] = states;
}

template <Scalar T>
void solve_che(const RunConfig& cfg, const che::CheParams<T>& p, bool fixed_sum, const std::string& cls, int n,
               Json& doc, Checks& checks) {
  int k = 0;
  try {
    std::size_t used = 0;
    k = std::stoi(cls, &used);
    if (used != cls.size()) k = 0;
  } catch (const std::exception&) {
  }
  if (k < 1 || k > 8) throw UsageError("CHE class must be 1..8, got '" + cls + "'");
  doc["family"] = "che";
  doc["class"] = k;
  doc["params"] = che_params_json(p);
  if (fixed_sum) {
    const T rel = che::che_class_relation(k, n, p);
    doc["relation_residual"] = report::to_json(rel);
    const double scale = std::max({1.0, magnitude(p.mu + p.nu), magnitude(p.alpha) * (n + 1)});
    if (magnitude(rel) > cfg.tol.at("relation") * scale)
      throw NoSolution("class " + std::to_string(k) + " needs mu + nu = " +
                       to_string(che::class_sum(k, n, p.alpha, p.beta, p.gamma)));
  }
  const series::Termination<T> term = che::che_mu_values(p, k, n);
  doc["condition"] = report::poly_json(term.condition);
  doc["mu_roots"] = complex_list(term.roots);
  doc["worst_tail"] = term.worst_tail;
  checks.add("tail", term.worst_tail, cfg.tol.at("tail"));
  Json states = Json::array();
  for (Complex mu : term.roots) {
    const series::Eigenstate st = che::che_eigenstate(p, k, n, mu, cfg.residual_options());
    checks.add("residual mu=" + to_string(mu), st.residual, cfg.tol.at("residual"));
    states.push_back(report::eigenstate_json(st));
  }
  doc["states"] = states;
}

template <Scalar T>
int run_solve(const RunConfig& cfg, const ProblemArgs& args, const std::string& cls, int n, Json& doc) {
  if (n < 0) throw UsageError("--n must be non-negative");
  if (input_count(args) != 1) throw UsageError("give exactly one of --sigma, --heun, --che");
  doc["n"] = n;
  Checks checks;
  if (!args.heun.empty()) {
    const KeyValues kv = parse_key_values({args.heun});
    const bool fixed = kv.count("alpha") || kv.count("beta");
    if (fixed) {
      solve_heun(cfg, heun_from<T>(kv), true, cls, n, doc, checks);
    } else {
      // alpha, beta come from the class; seed them with any Fuchsian pair
      KeyValues seeded = kv;
      seeded["alpha"] = "0";
      solve_heun(cfg, heun_from<T>(seeded), false, cls, n, doc, checks);
    }
  } else if (!args.che.empty()) {
    const KeyValues kv = parse_key_values({args.che});
    solve_che(cfg, che_from<T>(kv), kv.count("mu") || kv.count("nu"), cls, n, doc, checks);
  } else {
    const nu::NuEquation<T> eq = equation_from<T>(args);
    if (const auto hs = heun::detect_shape(eq)) {
      heun::HeunParams<T> p;
      p.gamma = hs->gamma;
      p.delta = hs->delta;
      p.epsilon = hs->epsilon;
      p.a = hs->a;
      p.q = hs->q;
      std::tie(p.alpha, p.beta) = split_ab(hs->ab, p.gamma + p.delta + p.epsilon - scalar<T>(1));
      solve_heun(cfg, p, true, cls, n, doc, checks);
    } else if (const auto cs = che::detect_shape(eq)) {
      solve_che(cfg, *cs, true, cls, n, doc, checks);
    } else {
      throw UsageError("solve needs an equation of Heun or confluent Heun shape");
    }
  }
  doc["checks"] = checks.json();
  doc["ok"] = checks.ok();
  return checks.ok() ? kOk : kVerification;
}

// ---- applications ---------------------------------------------------------------

int app_coulomb(const RunConfig& cfg, const KeyValues& kv, Json& doc, Checks& checks) {
  allow_keys(kv, {"n", "m", "gamma"});
  const int n = int_value(kv, "n");
  const int m = int_value(kv, "m", 0);
  doc["params"] = Json{{"n", n}, {"m", m}};
  if (cfg.exact) {
    const GaussRational g = value<GaussRational>(kv, "gamma");
    if (g.im != 0) throw UsageError("gamma must be real");
    doc["params"]["gamma"] = report::to_json(g);
    const Rational closed = physics::coulomb3s_energy_exact(n, m, g.re);
    const auto c = physics::coulomb3s_verify<GaussRational>(n, m, g);
    doc["energy_closed"] = report::to_json(closed);
    doc["energy"] = report::to_json(c.energy);
    doc["Gamma"] = report::to_json(c.Gamma);
    doc["a"] = report::to_json(c.a);
    doc["b"] = report::to_json(c.b);
    doc["class1"] = c.class1();
    doc["class2"] = c.class2();
    checks.add("energy", magnitude(c.energy - GaussRational(closed)), 0.0);
    checks.add("class1", c.class1(), cfg.tol.at("relation"));
    checks.add("class2", c.class2(), cfg.tol.at("relation"));
  } else {
    const double g = real_value(kv, "gamma");
    doc["params"]["gamma"] = g;
    const double closed = physics::coulomb3s_energy({n, m, g});
    const auto c = physics::coulomb3s_verify({n, m, g});
    doc["energy_closed"] = closed;
    doc["energy"] = report::to_json(c.energy);
    doc["Gamma"] = report::to_json(c.Gamma);
    doc["a"] = report::to_json(c.a);
    doc["b"] = report::to_json(c.b);
    doc["class1"] = c.class1();
    doc["class2"] = c.class2();
    checks.add("energy", std::abs(c.energy - closed) / std::max(1.0, std::abs(closed)), cfg.tol.at("energy"));
    checks.add("class1", c.class1(), cfg.tol.at("relation"));
    checks.add("class2", c.class2(), cfg.tol.at("relation"));
  }
  return 0;
}

int app_electrons(const RunConfig& cfg, const KeyValues& kv, Json& doc, Checks& checks) {
  allow_keys(kv, {"n", "gamma", "delta"});
  const physics::ElectronsSphereInput in{int_value(kv, "n"), real_value(kv, "gamma"), real_value(kv, "delta")};
  doc["params"] = Json{{"n", in.n}, {"gamma", in.gamma}, {"delta", in.delta}};
  const physics::ElectronsState st = physics::electrons_sphere_state(in);
  doc["R"] = st.R;
  doc["E"] = st.E;
  doc["q"] = report::to_json(st.q);
  doc["heun"] = heun_params_json(st.heun);
  doc["accessory_roots"] = complex_list(st.accessory_roots);
  doc["polynomial"] = report::poly_json(st.polynomial);
  doc["roots"] = complex_list(st.roots);
  doc["bethe"] = st.bethe;
  doc["residual"] = st.residual;
  doc["tail"] = st.tail;
  doc["determinant_mismatch"] = st.determinant_mismatch;
  if (const auto cf = physics::electrons_closed_form(in.n, in.gamma, in.delta)) {
    doc["closed_form"] = Json{{"R", cf->R}, {"E", cf->E}};
    checks.add("R", std::abs(st.R - cf->R) / std::max(1.0, std::abs(cf->R)), cfg.tol.at("energy"));
    checks.add("E", std::abs(st.E - cf->E) / std::max(1.0, std::abs(cf->E)), cfg.tol.at("energy"));
  } else {
    doc["closed_form"] = nullptr;
  }
  checks.add("bethe", st.bethe, cfg.tol.at("bethe"));
  checks.add("residual", st.residual, cfg.tol.at("residual"));
  checks.add("tail", st.tail, cfg.tol.at("tail"));
  return 0;
}

int app_doublewell(const RunConfig& cfg, const KeyValues& kv, Json& doc, Checks& checks) {
  allow_keys(kv, {"N", "d", "U0", "parity"});
  const auto it = kv.find("parity");
  const auto parity = physics::parse_parity(it == kv.end() ? "symmetric" : it->second);
  if (!parity) throw UsageError("parity must be symmetric or antisymmetric");
  const physics::DoubleWellInput in{int_value(kv, "N"), real_value(kv, "d"), real_value(kv, "U0"), *parity};
  doc["params"] = Json{{"N", in.N}, {"d", in.d}, {"U0", in.U0}, {"parity", physics::to_string(in.parity)}};
  const physics::DoubleWellReport rep = physics::doublewell_verify(in, cfg.residual_options());
  doc["epsilon_closed"] = rep.epsilon_closed;
  const double scale = std::max(1.0, std::abs(rep.epsilon_closed));
  Json classes = Json::array();
  for (const auto& c : rep.classes) {
    const std::string tag = "pi_e" + std::to_string(c.klass);
    classes.push_back(Json{{"class", tag},
                           {"beta", report::to_json(c.beta_solved)},
                           {"epsilon", c.epsilon_pipeline},
                           {"residual_minus_branch", c.residual_minus_branch},
                           {"residual_plus_branch", c.residual_plus_branch},
                           {"mu_roots", complex_list(c.mu_roots)},
                           {"worst_tail", c.worst_tail},
                           {"worst_residual", c.worst_residual},
                           {"physical_mu", report::to_json(c.physical_mu)},
                           {"physical_mu_tail", c.physical_mu_tail}});
    checks.add(tag + " epsilon", std::abs(c.epsilon_pipeline - rep.epsilon_closed) / scale, cfg.tol.at("energy"));
    checks.add(tag + " relation", std::min(c.residual_minus_branch, c.residual_plus_branch), cfg.tol.at("relation"));
    checks.add(tag + " tail", c.worst_tail, cfg.tol.at("tail"));
    checks.add(tag + " residual", c.worst_residual, cfg.tol.at("residual"));
  }
  doc["classes"] = classes;
  return 0;
}

int run_app(const RunConfig& cfg, const std::string& name, const std::vector<std::string>& params, Json& doc) {
  const KeyValues kv = parse_key_values(params);
  doc["app"] = name;
  Checks checks;
  if (name == "coulomb3s") {
    app_coulomb(cfg, kv, doc, checks);
  } else if (name == "electrons-sphere") {
    doc["backend"] = "float";
    app_electrons(cfg, kv, doc, checks);
  } else if (name == "double-well") {
    doc["backend"] = "float";
    app_doublewell(cfg, kv, doc, checks);
  } else {
    throw UsageError("unknown app '" + name + "' (coulomb3s, electrons-sphere, double-well)");
  }
  doc["checks"] = checks.json();
  doc["ok"] = checks.ok();
  return checks.ok() ? kOk : kVerification;
}

void apply_tolerances(RunConfig& cfg, const std::vector<std::string>& items) {
  for (const auto& [name, text] : parse_key_values(items)) {
    if (!cfg.tol.count(name)) throw UsageError("unknown tolerance '" + name + "'");
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(text, &used);
      if (used != text.size()) v = 0.0;
    } catch (const std::exception&) {
    }
    if (!(v > 0.0)) throw UsageError("tolerance '" + name + "' must be a positive number");
    cfg.tol[name] = v;
  }
}

void add_problem_options(CLI::App* cmd, ProblemArgs& a) {
  cmd->add_option("--sigma", a.sigma, "sigma(z), e.g. 'z - z^3'");
  cmd->add_option("--tau", a.tau, "tau~(z)");
  cmd->add_option("--sigma-tilde", a.sigma_tilde, "sigma~(z)");
  cmd->add_option("--mode", a.mode, "classic or extended")->capture_default_str();
  cmd->add_option("--heun", a.heun, "Heun parameters: gamma=..,delta=..,epsilon=..,a=..,alpha=..[,beta=..,q=..]");
  cmd->add_option("--che", a.che, "CHE parameters: alpha=..,beta=..,gamma=..[,mu=..,nu=..]");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial solutions of Heun-type equations by the extended NU method"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string backend = "float", format = "json";
  std::vector<std::string> tols;
  RunConfig cfg;
  app.add_option("--backend", backend, "exact or float")
      ->envname("HEUNFORGE_BACKEND")
      ->check(CLI::IsMember({"exact", "float"}))
      ->capture_default_str();
  app.add_option("--format", format, "json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}))
      ->capture_default_str();
  app.add_option("--tol", tols, "name=value, names: residual tail relation energy bethe match");
  app.add_option("--samples", cfg.samples, "contour points for residual checks")
      ->check(CLI::Range(10, 100000))
      ->capture_default_str();
  app.add_option("--grid", cfg.grid, "Newton starts per pass")->check(CLI::Range(8, 100000))->capture_default_str();

  ProblemArgs classify_args, solve_args;
  std::string cls;
  int n = 0;
  std::string app_name;
  std::vector<std::string> app_params;

  CLI::App* classify = app.add_subcommand("classify", "list the admissible pi branches");
  add_problem_options(classify, classify_args);
  CLI::App* solve = app.add_subcommand("solve", "accessory values and eigenfunctions of one class");
  add_problem_options(solve, solve_args);
  solve->add_option("--class", cls, "Heun class I..VIII or CHE class 1..8")->required();
  solve->add_option("--n", n, "polynomial degree")->required();
  CLI::App* appcmd = app.add_subcommand("app", "physics applications");
  appcmd->add_option("name", app_name, "coulomb3s, electrons-sphere or double-well")->required();
  appcmd->add_option("params", app_params, "key=value parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  int code = kInternal;
  Json doc;
  try {
    cfg.exact = backend == "exact";
    cfg.format = *report::parse_format(format);
    apply_tolerances(cfg, tols);
    if (classify->parsed()) {
      doc = base_doc("classify", cfg.exact);
      code = cfg.exact ? run_classify<GaussRational>(cfg, classify_args, doc)
                       : run_classify<Complex>(cfg, classify_args, doc);
    } else if (solve->parsed()) {
      doc = base_doc("solve", cfg.exact);
      code = cfg.exact ? run_solve<GaussRational>(cfg, solve_args, cls, n, doc)
                       : run_solve<Complex>(cfg, solve_args, cls, n, doc);
    } else {
      doc = base_doc("app", cfg.exact);
      code = run_app(cfg, app_name, app_params, doc);
    }
  } catch (const std::invalid_argument& e) {  // UsageError, ParseError, InvalidInput
    std::cerr << "heunforge: " << e.what() << "\n";
    return kUsage;
  } catch (const NoSolution& e) {
    std::cerr << "heunforge: no solution: " << e.what() << "\n";
    return kNoSolution;
  } catch (const Unsupported& e) {
    std::cerr << "heunforge: unsupported: " << e.what() << "\n";
    return kNoSolution;
  } catch (const VerificationError& e) {
    std::cerr << "heunforge: verification failed: " << e.what() << "\n";
    return kVerification;
  } catch (const std::exception& e) {
    std::cerr << "heunforge: internal error: " << e.what() << "\n";
    return kInternal;
  }
  std::cout << report::render(doc, cfg.format);
  return code;
}
