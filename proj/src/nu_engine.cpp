#include "heunforge/nu_engine.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <tuple>

namespace heunforge::nu {

namespace {

constexpr double kZeroTol = 1e-12;

bool tiny(Complex v, double scale) { return std::abs(v) <= kZeroTol * std::max(1.0, scale); }

// Low-discrepancy points in [0,1)^4 (additive recurrence on the plastic-like
// constant for four dimensions).
std::array<double, 4> lattice_point(int i) {
  constexpr double phi = 1.1673039782614187;  // real root of x^5 = x + 1
  std::array<double, 4> out{};
  double inv = 1.0;
  for (int k = 0; k < 4; ++k) {
    inv /= phi;
    double v = 0.5 + inv * static_cast<double>(i + 1);
    out[static_cast<std::size_t>(k)] = v - std::floor(v);
  }
  return out;
}

struct Candidate {
  Complex g1;
  Complex g0;
};

bool same_g(const Candidate& a, const Candidate& b, double tol) {
  return std::abs(a.g1 - b.g1) <= tol * (1.0 + std::abs(a.g1)) &&
         std::abs(a.g0 - b.g0) <= tol * (1.0 + std::abs(a.g0));
}

void add_candidate(std::vector<Candidate>& list, Candidate c, double tol) {
  for (const Candidate& e : list)
    if (same_g(e, c, tol)) return;
  list.push_back(c);
}

double norm2(Complex a, Complex b) { return std::sqrt(std::norm(a) + std::norm(b)); }

// Values t making (base + t*sigma) a square of a polynomial of degree <= 1,
// where base and sigma have degree <= 2: the discriminant, quadratic in t.
// Returns nullopt when every t works (underdetermined).
std::optional<std::vector<Complex>> discriminant_roots(const Poly<Complex>& base,
                                                       const Poly<Complex>& sigma) {
  const Complex b2 = base.coeff(2), b1 = base.coeff(1), b0 = base.coeff(0);
  const Complex s2 = sigma.coeff(2), s1 = sigma.coeff(1), s0 = sigma.coeff(0);
  const Complex c2 = s1 * s1 - 4.0 * s2 * s0;
  const Complex c1 = 2.0 * b1 * s1 - 4.0 * (b2 * s0 + s2 * b0);
  const Complex c0 = b1 * b1 - 4.0 * b2 * b0;
  const double scale = std::max({1.0, base.max_abs() * base.max_abs(), sigma.max_abs() * sigma.max_abs(),
                                 base.max_abs() * sigma.max_abs()});
  const bool z2 = tiny(c2, scale), z1 = tiny(c1, scale), z0 = tiny(c0, scale);
  if (z2 && z1) {
    if (z0) return std::nullopt;
    return std::vector<Complex>{};
  }
  Poly<Complex> disc({z0 ? Complex{} : c0, z1 ? Complex{} : c1, z2 ? Complex{} : c2});
  if (disc.degree() < 1) return std::vector<Complex>{};
  return roots(disc);
}

// Newton unknowns. Iterating directly in (g1, g0) puts the roots near the
// pole L = K4 + g1 sigma3 = 0 of the remainder and most of them end up with
// tiny basins. Instead the unknowns are the two leading free coefficients of
// the square root s, and g is recovered from them:
//   cubic sigma:      x = (s2, s1), L = s2^2, d3 = 2 s2 s1
//   quadratic sigma:  s2 = sqrt(K4) fixed, x = (s1, s0), d3 = 2 s2 s1, d2 = 2 s2 s0 + s1^2
//   otherwise:        x = (g1, g0), L is constant and there is no pole
// The equations solved are still r1(g(x)) = r0(g(x)) = 0.
class Chart {
 public:
  enum class Kind { cubic, quadratic, direct };

  Chart(const Poly<Complex>& known, const Poly<Complex>& sigma) : k_(known), s_(sigma) {
    if (!tiny(sigma.coeff(3), sigma.max_abs())) {
      kind_ = Kind::cubic;
    } else if (!tiny(sigma.coeff(2), sigma.max_abs()) && !tiny(known.coeff(4), known.max_abs())) {
      kind_ = Kind::quadratic;
      lead_ = std::sqrt(known.coeff(4));
    }
  }

  Kind kind() const { return kind_; }

  Candidate to_g(Candidate x) const {
    switch (kind_) {
      case Kind::cubic: {
        const Complex g1 = (x.g1 * x.g1 - k_.coeff(4)) / s_.coeff(3);
        return {g1, (2.0 * x.g1 * x.g0 - k_.coeff(3) - g1 * s_.coeff(2)) / s_.coeff(3)};
      }
      case Kind::quadratic: {
        const Complex g1 = (2.0 * lead_ * x.g1 - k_.coeff(3)) / s_.coeff(2);
        return {g1, (2.0 * lead_ * x.g0 + x.g1 * x.g1 - k_.coeff(2) - g1 * s_.coeff(1)) / s_.coeff(2)};
      }
      case Kind::direct:
        break;
    }
    return x;
  }

  // remainder and its Jacobian with respect to x
  RemainderJacobian eval(Candidate x) const {
    const Candidate g = to_g(x);
    RemainderJacobian f = remainder_and_jacobian(k_, s_, g.g1, g.g0);
    Complex a11 = 1.0, a10 = 0.0, a01 = 0.0, a00 = 1.0;  // dg1/dx1, dg1/dx2, dg0/dx1, dg0/dx2
    if (kind_ == Kind::cubic) {
      a11 = 2.0 * x.g1 / s_.coeff(3);
      a01 = (2.0 * x.g0 - s_.coeff(2) * a11) / s_.coeff(3);
      a00 = 2.0 * x.g1 / s_.coeff(3);
    } else if (kind_ == Kind::quadratic) {
      a11 = 2.0 * lead_ / s_.coeff(2);
      a01 = (2.0 * x.g1 - s_.coeff(1) * a11) / s_.coeff(2);
      a00 = 2.0 * lead_ / s_.coeff(2);
    }
    RemainderJacobian o = f;
    o.dr1_dg1 = f.dr1_dg1 * a11 + f.dr1_dg0 * a01;
    o.dr1_dg0 = f.dr1_dg1 * a10 + f.dr1_dg0 * a00;
    o.dr0_dg1 = f.dr0_dg1 * a11 + f.dr0_dg0 * a01;
    o.dr0_dg0 = f.dr0_dg1 * a10 + f.dr0_dg0 * a00;
    return o;
  }

  // chart coordinates of a known g (both sign copies in the cubic chart)
  std::vector<Candidate> from_g(Candidate g) const {
    switch (kind_) {
      case Kind::cubic: {
        const Complex w = std::sqrt(k_.coeff(4) + g.g1 * s_.coeff(3));
        if (std::abs(w) < 1e-14 * scale()) return {};
        const Complex v = (k_.coeff(3) + g.g1 * s_.coeff(2) + g.g0 * s_.coeff(3)) / (2.0 * w);
        return {{w, v}, {-w, -v}};
      }
      case Kind::quadratic: {
        const Complex x1 = (k_.coeff(3) + g.g1 * s_.coeff(2)) / (2.0 * lead_);
        const Complex d2 = k_.coeff(2) + g.g1 * s_.coeff(1) + g.g0 * s_.coeff(2);
        return {{x1, (d2 - x1 * x1) / (2.0 * lead_)}};
      }
      case Kind::direct:
        break;
    }
    return {g};
  }

  double residual_scale() const { return std::max(1.0, k_.max_abs()); }

  // x and -x give the same g in the cubic chart (s and -s)
  bool symmetric() const { return kind_ == Kind::cubic; }

  // typical size of the unknowns
  double scale() const {
    const double ks = std::max(1.0, k_.max_abs());
    if (kind_ == Kind::direct) return ks / std::max(1.0, s_.max_abs());
    return std::sqrt(ks);
  }

 private:
  const Poly<Complex>& k_;
  const Poly<Complex>& s_;
  Kind kind_ = Kind::direct;
  Complex lead_{};
};

// Bottom-up chart about a point z0 with sigma(z0) != 0. With hats for the
// Taylor-shifted polynomials, the unknowns are the two lowest coefficients
// (a, b) of the square root; g follows from R^0 = a^2, R^1 = 2ab and the
// equations are the ascending-order remainder
//   e1 = R^3 - 2 b s2,  e0 = R^4 - s2^2,  s2 = (R^2 - b^2) / (2a),
// whose only pole is s(z0) = 0 instead of the leading coefficient.
class BottomChart {
 public:
  BottomChart(const Poly<Complex>& known, const Poly<Complex>& sigma) {
    // the first of a few fixed points where sigma is not small
    const std::array<Complex, 4> trial = {Complex(0.5, 0.5), Complex(-0.6, 0.8), Complex(0.3, -0.9),
                                          Complex(1.7, 0.4)};
    double best = -1.0;
    for (Complex z : trial) {
      const double v = std::abs(sigma(z)) / std::pow(1.0 + std::abs(z), sigma.degree());
      if (v > best * 4.0) {
        best = v;
        z0_ = z;
      }
    }
    kh_ = taylor_shift(known, z0_);
    sh_ = taylor_shift(sigma, z0_);
  }

  // (g1, g0) in the original variable
  Candidate to_g(Candidate x) const {
    const Complex h0 = (x.g1 * x.g1 - kh_.coeff(0)) / sh_.coeff(0);
    const Complex h1 = (2.0 * x.g1 * x.g0 - kh_.coeff(1) - h0 * sh_.coeff(1)) / sh_.coeff(0);
    return {h1, h0 - h1 * z0_};
  }

  RemainderJacobian eval(Candidate x) const {
    const Complex a = x.g1, b = x.g0;
    const Complex S0 = sh_.coeff(0), S1 = sh_.coeff(1), S2 = sh_.coeff(2), S3 = sh_.coeff(3);
    const Complex h0 = (a * a - kh_.coeff(0)) / S0;
    const Complex h1 = (2.0 * a * b - kh_.coeff(1) - h0 * S1) / S0;
    const Complex h0a = 2.0 * a / S0;
    const Complex h1a = (2.0 * b - S1 * h0a) / S0, h1b = 2.0 * a / S0;
    const Complex R2 = kh_.coeff(2) + h1 * S1 + h0 * S2;
    const Complex R3 = kh_.coeff(3) + h1 * S2 + h0 * S3;
    const Complex R4 = kh_.coeff(4) + h1 * S3;
    const Complex R2a = h1a * S1 + h0a * S2, R2b = h1b * S1;
    const Complex R3a = h1a * S2 + h0a * S3, R3b = h1b * S2;
    const Complex R4a = h1a * S3, R4b = h1b * S3;
    const Complex s2 = (R2 - b * b) / (2.0 * a);
    const Complex s2a = R2a / (2.0 * a) - s2 / a, s2b = (R2b - 2.0 * b) / (2.0 * a);
    RemainderJacobian o;
    o.r1 = R3 - 2.0 * b * s2;
    o.r0 = R4 - s2 * s2;
    o.dr1_dg1 = R3a - 2.0 * b * s2a;
    o.dr1_dg0 = R3b - 2.0 * s2 - 2.0 * b * s2b;
    o.dr0_dg1 = R4a - 2.0 * s2 * s2a;
    o.dr0_dg0 = R4b - 2.0 * s2 * s2b;
    return o;
  }

  std::vector<Candidate> from_g(Candidate g) const {
    const Complex h1 = g.g1, h0 = g.g0 + g.g1 * z0_;
    const Complex a = std::sqrt(kh_.coeff(0) + h0 * sh_.coeff(0));
    if (std::abs(a) < 1e-14 * scale()) return {};
    const Complex b = (kh_.coeff(1) + h1 * sh_.coeff(0) + h0 * sh_.coeff(1)) / (2.0 * a);
    return {{a, b}, {-a, -b}};
  }

  double scale() const { return std::sqrt(std::max(1.0, kh_.max_abs())); }
  double residual_scale() const { return std::max(1.0, kh_.max_abs()); }
  bool usable() const { return std::abs(sh_.coeff(0)) > 1e-8 * std::max(1.0, sh_.max_abs()); }

 private:
  Complex z0_{};
  Poly<Complex> kh_, sh_;
};

// Roots already found are deflated away: the iteration runs on m(x) F(x)
// with m = prod_i (1 + rho^2/|x - x_i|^2), viewed as a real map on
// C^2 = R^4. The deflated Newton step is the plain one rescaled
// (Sherman-Morrison on the rank-one update).
struct Deflation {
  std::vector<Candidate> found;
  double radius2 = 1.0;

  double factor(Candidate x) const {
    double m = 1.0;
    for (const Candidate& r : found) m *= 1.0 + radius2 / (std::norm(x.g1 - r.g1) + std::norm(x.g0 - r.g0));
    return m;
  }

  // grad(log m) . step
  double log_slope(Candidate x, Complex step1, Complex step0) const {
    double acc = 0.0;
    for (const Candidate& r : found) {
      const Complex v1 = x.g1 - r.g1, v0 = x.g0 - r.g0;
      const double n2 = std::norm(v1) + std::norm(v0);
      const double dot = (std::conj(v1) * step1 + std::conj(v0) * step0).real();
      acc += (-2.0 * radius2 * dot / (n2 * n2)) / (1.0 + radius2 / n2);
    }
    return acc;
  }
};

struct NewtonResult {
  bool converged = false;
  bool singular = false;
  Candidate x{};
};

template <class ChartT>
NewtonResult newton(const ChartT& chart, Candidate start, const SearchOptions& opts, double residual_scale,
                    const Deflation& defl) {
  NewtonResult res;
  Candidate x = start;
  RemainderJacobian f = chart.eval(x);
  if (!f.finite()) return res;
  double raw = norm2(f.r1, f.r0);
  double merit = defl.factor(x) * raw;
  const double target = 1e-13 * residual_scale;
  for (int it = 0; it < opts.max_iterations && raw > target; ++it) {
    const Complex det = f.dr1_dg1 * f.dr0_dg0 - f.dr1_dg0 * f.dr0_dg1;
    const double jscale = std::max({std::abs(f.dr1_dg1 * f.dr0_dg0), std::abs(f.dr1_dg0 * f.dr0_dg1), 1e-300});
    if (std::abs(det) <= 1e-14 * jscale || !std::isfinite(std::abs(det))) {
      res.singular = true;
      break;
    }
    // J * step = -r
    Complex step1 = -(f.dr0_dg0 * f.r1 - f.dr1_dg0 * f.r0) / det;
    Complex step0 = -(-f.dr0_dg1 * f.r1 + f.dr1_dg1 * f.r0) / det;
    if (!defl.found.empty()) {
      const double c = 1.0 / (1.0 - defl.log_slope(x, step1, step0));
      if (std::isfinite(c)) {
        step1 *= c;
        step0 *= c;
      }
    }
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 30 && !accepted; ++halving, t *= opts.damping) {
      const Candidate trial{x.g1 + t * step1, x.g0 + t * step0};
      const RemainderJacobian ft = chart.eval(trial);
      if (!ft.finite()) continue;
      const double traw = norm2(ft.r1, ft.r0);
      const double tm = defl.factor(trial) * traw;
      if (tm < merit) {
        x = trial;
        f = ft;
        raw = traw;
        merit = tm;
        accepted = true;
      }
    }
    if (!accepted) break;
  }
  res.converged = raw <= target || (!res.singular && raw <= 1e-10 * residual_scale);
  res.x = x;
  return res;
}

// A few undeflated steps in g itself to recover full accuracy.
Candidate polish(const Poly<Complex>& known, const Poly<Complex>& sigma, Candidate x) {
  for (int it = 0; it < 5; ++it) {
    const RemainderJacobian f = remainder_and_jacobian(known, sigma, x.g1, x.g0);
    const Complex det = f.dr1_dg1 * f.dr0_dg0 - f.dr1_dg0 * f.dr0_dg1;
    if (!f.finite() || std::abs(det) == 0.0) break;
    const Candidate next{x.g1 - (f.dr0_dg0 * f.r1 - f.dr1_dg0 * f.r0) / det,
                         x.g0 - (-f.dr0_dg1 * f.r1 + f.dr1_dg1 * f.r0) / det};
    const RemainderJacobian fn = remainder_and_jacobian(known, sigma, next.g1, next.g0);
    if (!fn.finite() || norm2(fn.r1, fn.r0) >= norm2(f.r1, f.r0)) break;
    x = next;
  }
  return x;
}

Poly<Complex> linear(Candidate c) { return Poly<Complex>({c.g0, c.g1}); }

}  // namespace

bool RemainderJacobian::finite() const {
  for (Complex v : {r1, r0, dr1_dg1, dr1_dg0, dr0_dg1, dr0_dg0})
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

RemainderJacobian remainder_and_jacobian(const Poly<Complex>& known, const Poly<Complex>& sigma,
                                         Complex g1, Complex g0) {
  const Complex s3 = sigma.coeff(3), s2 = sigma.coeff(2), s1 = sigma.coeff(1), s0 = sigma.coeff(0);
  const Complex L = known.coeff(4) + g1 * s3;
  const Complex d3 = known.coeff(3) + g1 * s2 + g0 * s3;
  const Complex d2 = known.coeff(2) + g1 * s1 + g0 * s2;
  const Complex d1 = known.coeff(1) + g1 * s0 + g0 * s1;
  const Complex d0 = known.coeff(0) + g0 * s0;

  const Complex u = d2 - d3 * d3 / (4.0 * L);
  const Complex u_d3 = -d3 / (2.0 * L);
  const Complex u_L = d3 * d3 / (4.0 * L * L);

  RemainderJacobian out;
  out.r1 = d1 - d3 * u / (2.0 * L);
  out.r0 = d0 - u * u / (4.0 * L);

  const Complex r1_d2 = -d3 / (2.0 * L);
  const Complex r1_d3 = -u / (2.0 * L) + d3 * d3 / (4.0 * L * L);
  const Complex r1_L = d3 * u / (2.0 * L * L) - d3 / (2.0 * L) * u_L;
  const Complex r0_d2 = -u / (2.0 * L);
  const Complex r0_d3 = -u / (2.0 * L) * u_d3;
  const Complex r0_L = u * u / (4.0 * L * L) - u / (2.0 * L) * u_L;

  out.dr1_dg1 = r1_L * s3 + r1_d3 * s2 + r1_d2 * s1 + s0;
  out.dr1_dg0 = r1_d3 * s3 + r1_d2 * s2 + s1;
  out.dr0_dg1 = r0_L * s3 + r0_d3 * s2 + r0_d2 * s1;
  out.dr0_dg0 = r0_d3 * s3 + r0_d2 * s2 + s0;
  return out;
}

BranchSearch enumerate_branches(const NuEquation<Complex>& eq, const SearchOptions& opts) {
  validate(eq);
  if (opts.grid_size < 8) throw InvalidInput("Newton grid must have at least 8 starting points");
  BranchSearch out;
  const Poly<Complex> gap = half_gap(eq);
  const Poly<Complex> known = gap * gap - eq.sigma_tilde;
  const Poly<Complex>& sigma = eq.sigma;
  const double kscale = std::max(1.0, known.max_abs());
  std::vector<Candidate> candidates;
  bool underdetermined = false;

  auto from_discriminant = [&](const Poly<Complex>& base, Complex g1) {
    auto ts = discriminant_roots(base, sigma);
    if (!ts) {
      underdetermined = true;
      return;
    }
    for (Complex t : *ts) add_candidate(candidates, {g1, t}, opts.dedup_tol);
  };

  if (eq.mode == Mode::classic) {
    from_discriminant(known, Complex{});
  } else {
    const bool lead_free = !tiny(sigma.coeff(3), sigma.max_abs()) || !tiny(known.coeff(4), kscale);
    if (lead_free) {
      // Three passes over fresh stretches of the lattice: the top chart,
      // the bottom chart (which reaches roots whose leading square-root
      // coefficient is nearly zero), then the top chart again with a
      // tighter deflation radius.
      const Chart top(known, sigma);
      const BottomChart bottom(known, sigma);
      Deflation defl_top, defl_bottom;
      auto record = [&](Candidate g) {
        const std::size_t before = candidates.size();
        add_candidate(candidates, g, opts.dedup_tol);
        if (candidates.size() == before) return;
        for (const Candidate& x : top.from_g(g)) defl_top.found.push_back(x);
        if (bottom.usable())
          for (const Candidate& x : bottom.from_g(g)) defl_bottom.found.push_back(x);
      };
      auto run_pass = [&](const auto& chart, Deflation& d, double radius, int pass) {
        const double scale = chart.scale();
        d.radius2 = radius * radius * scale * scale;
        for (int i = 0; i < opts.grid_size; ++i) {
          const auto p = lattice_point(i + pass * opts.grid_size);
          const Candidate start{scale * Complex(2.0 * p[0] - 1.0, 2.0 * p[1] - 1.0),
                                scale * Complex(2.0 * p[2] - 1.0, 2.0 * p[3] - 1.0)};
          ++out.starts;
          const NewtonResult r = newton(chart, start, opts, chart.residual_scale(), d);
          if (r.singular) ++out.singular;
          if (!r.converged) continue;
          ++out.converged;
          record(polish(known, sigma, chart.to_g(r.x)));
        }
      };
      run_pass(top, defl_top, 0.1, 0);
      if (bottom.usable()) run_pass(bottom, defl_bottom, 0.1, 1);
      run_pass(top, defl_top, 0.01, 2);
      // radicand leading coefficient cancelled by g1: degree drops to <= 3
      if (!tiny(sigma.coeff(3), sigma.max_abs())) {
        const Complex g1 = -known.coeff(4) / sigma.coeff(3);
        const Complex g0 = -(known.coeff(3) + g1 * sigma.coeff(2)) / sigma.coeff(3);
        add_candidate(candidates, {g1, g0}, opts.dedup_tol);
      }
      if (out.converged == 0 && out.singular == out.starts)
        out.note = "Jacobian singular at every starting point";
    } else if (!tiny(sigma.coeff(2), sigma.max_abs())) {
      // sigma quadratic and no quartic term: kill the cubic term, then the
      // remaining quadratic needs a vanishing discriminant in g0
      const Complex g1 = -known.coeff(3) / sigma.coeff(2);
      from_discriminant(known + Poly<Complex>({Complex{}, g1}) * sigma, g1);
    } else if (tiny(known.coeff(3), kscale)) {
      underdetermined = true;
    }
  }

  if (underdetermined) {
    out.note = "perfect-square condition is underdetermined for this equation";
    return out;
  }

  // keep the admissible candidates, ordered deterministically
  std::vector<std::pair<Candidate, Poly<Complex>>> admissible;
  for (const Candidate& c : candidates) {
    Poly<Complex> g = linear(c);
    if (g.degree() > bounds(eq.mode).g) continue;
    auto s = radicand_root(eq, g);
    if (!s) continue;
    admissible.emplace_back(c, *s);
  }
  auto key = [](const Candidate& c) {
    auto r = [](double v) { return std::round(v * 1e6) / 1e6; };
    return std::make_tuple(r(c.g1.real()), r(c.g1.imag()), r(c.g0.real()), r(c.g0.imag()));
  };
  std::sort(admissible.begin(), admissible.end(),
            [&](const auto& a, const auto& b) { return key(a.first) < key(b.first); });

  for (const auto& [c, s] : admissible) {
    Poly<Complex> g = linear(c);
    for (Sign sign : {Sign::plus, Sign::minus}) {
      if (sign == Sign::minus && s.is_zero()) break;  // +- collapse
      PiBranch<Complex> b = make_branch(eq, g, sign);
      try {
        (void)reduce(eq, b);
      } catch (const VerificationError&) {
        continue;
      }
      out.branches.push_back(std::move(b));
    }
  }
  if (out.branches.empty() && out.note.empty()) out.note = "no admissible g found";
  return out;
}

std::vector<PiBranch<GaussRational>> exact_branches(const NuEquation<GaussRational>& eq,
                                                    const SearchOptions& opts) {
  validate(eq);
  BranchSearch search = enumerate_branches(to_complex(eq), opts);
  std::vector<PiBranch<GaussRational>> out;
  for (const PiBranch<Complex>& fb : search.branches) {
    std::vector<GaussRational> coeffs;
    for (int k = 0; k <= std::max(0, fb.g.degree()); ++k) {
      auto snapped = rationalize(fb.g.coeff(k), 1'000'000, 1e-9);
      if (!snapped)
        throw VerificationError("branch g coefficient is not a Gaussian rational: " +
                                heunforge::to_string(fb.g.coeff(k)));
      coeffs.push_back(*snapped);
    }
    Poly<GaussRational> g(std::move(coeffs));
    PiBranch<GaussRational> b;
    try {
      b = make_branch(eq, g, fb.sign);
    } catch (const NoSolution&) {
      throw VerificationError("snapped g does not give an exact perfect square");
    }
    (void)reduce(eq, b);
    out.push_back(std::move(b));
  }
  return out;
}

Complex PhiFactor::log_derivative(Complex z) const {
  Complex acc = derivative(exponential_part)(z);
  for (const PowerFactor& f : powers) acc += f.exponent / (z - f.point);
  return acc;
}

Complex PhiFactor::log_derivative_prime(Complex z) const {
  Complex acc = derivative(exponential_part, 2)(z);
  for (const PowerFactor& f : powers) acc -= f.exponent / ((z - f.point) * (z - f.point));
  return acc;
}

bool PhiFactor::trivial(double tol) const {
  if (exponential_part.degree() > 0 && derivative(exponential_part).max_abs() > tol) return false;
  for (const PowerFactor& f : powers)
    if (std::abs(f.exponent) > tol) return false;
  return true;
}

PhiFactor phi_factor(const Poly<Complex>& pi, const Poly<Complex>& sigma) {
  if (sigma.is_zero()) throw InvalidInput("phi_factor: sigma is zero");
  PhiFactor out;
  DivRem<Complex> qr = divrem(pi, sigma);
  std::vector<Complex> e(qr.quotient.size() + 1, Complex{});
  for (int k = 0; k <= qr.quotient.degree(); ++k) e[static_cast<std::size_t>(k) + 1] = qr.quotient.coeff(k) / double(k + 1);
  out.exponential_part = Poly<Complex>(std::move(e));
  if (sigma.degree() < 1) return out;
  const Poly<Complex> ds = derivative(sigma);
  for (Complex zi : roots(sigma)) {
    // snap numerically-noisy real/imaginary parts of well-separated roots
    if (std::abs(zi.imag()) <= 1e-14 * std::max(1.0, std::abs(zi))) zi = {zi.real(), 0.0};
    const Complex slope = ds(zi);
    if (std::abs(slope) <= 1e-8 * sigma.max_abs() * std::pow(1.0 + std::abs(zi), sigma.degree()))
      throw Unsupported("phi_factor: sigma has a repeated root near " + heunforge::to_string(zi));
    out.powers.push_back({zi, pi(zi) / slope});
  }
  std::sort(out.powers.begin(), out.powers.end(), [](const PowerFactor& a, const PowerFactor& b) {
    return std::make_pair(a.point.real(), a.point.imag()) < std::make_pair(b.point.real(), b.point.imag());
  });
  return out;
}

Poly<Complex> polynomial_solution(const Poly<Complex>& sigma, const Poly<Complex>& tau,
                                  const Poly<Complex>& h, int n, double null_tol) {
  if (n < 0) throw InvalidInput("polynomial_solution: n must be nonnegative");
  const int rows = n + 2;
  const int cols = n + 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows + 2, cols);
  for (int j = 0; j < cols; ++j) {
    Poly<Complex> image = h * Poly<Complex>::monomial(1.0, j);
    if (j >= 1) image += tau * Poly<Complex>::monomial(double(j), j - 1);
    if (j >= 2) image += sigma * Poly<Complex>::monomial(double(j * (j - 1)), j - 2);
    if (image.degree() >= rows + 2) throw InvalidInput("polynomial_solution: coefficient degrees too high");
    for (int i = 0; i <= image.degree(); ++i) m(i, j) = image.coeff(i);
  }
  // Scale columns by the size of the equation, not by their own norm: h is
  // often pure cancellation, and a column that cancels to ~0 must stay small.
  const double eq_scale = std::max({h.max_abs(), tau.max_abs(), sigma.max_abs()});
  Eigen::VectorXd colnorm(cols);
  for (int j = 0; j < cols; ++j) {
    const double ref = eq_scale * (1.0 + j + j * (j - 1));
    colnorm(j) = ref > 0.0 ? ref : 1.0;
    m.col(j) /= colnorm(j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int null_dim = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) <= null_tol) ++null_dim;
  if (null_dim != 1)
    throw NoSolution("polynomial_solution: null space has dimension " + std::to_string(null_dim) +
                     " for n = " + std::to_string(n));
  Eigen::VectorXcd v = svd.matrixV().col(cols - 1);
  std::vector<Complex> coeffs(static_cast<std::size_t>(cols));
  for (int j = 0; j < cols; ++j) coeffs[static_cast<std::size_t>(j)] = v(j) / colnorm(j);
  const Complex lead = coeffs.back();
  double vmax = 0.0;
  for (Complex c : coeffs) vmax = std::max(vmax, std::abs(c));
  if (std::abs(lead) <= 1e-10 * vmax)
    throw NoSolution("polynomial_solution: solution has degree below " + std::to_string(n));
  for (Complex& c : coeffs) c /= lead;
  coeffs.back() = 1.0;
  return Poly<Complex>(std::move(coeffs));
}

}  // namespace heunforge::nu
