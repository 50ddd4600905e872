#include "normsol/functionals.hpp"

#include <cmath>

#include "normsol/error.hpp"
#include "normsol/linalg.hpp"

namespace normsol {

namespace {

// sign(u)|u|^{e}
double signed_pow(double u, double e) {
  return u >= 0.0 ? std::pow(u, e) : -std::pow(-u, e);
}

}  // namespace

FiberCoefficients coefficients(const Profile& u, const ProblemParams& params) {
  const RadialGrid& g = u.grid();
  const auto v = u.values();
  const auto w = g.weights();
  const auto W = g.shell_weights();
  const double inv_h = 1.0 / g.spacing();
  FiberCoefficients c;
  for (std::size_t e = 0; e + 1 < v.size(); ++e) {
    const double d = (v[e + 1] - v[e]) * inv_h;
    const double m = 0.5 * (v[e] * v[e] + v[e + 1] * v[e + 1]);
    c.kinetic += W[e] * d * d;
    c.quasilinear += W[e] * m * d * d;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    c.lp += w[i] * std::pow(a, params.p);
    c.lq += w[i] * std::pow(a, params.q);
    c.mass += w[i] * a * a;
  }
  return c;
}

FiberCoefficients dilate(const FiberCoefficients& c, const ProblemParams& params, double t) {
  const FiberExponents e = fiber_exponents(params);
  return {t * t * c.kinetic, std::pow(t, e.quasi) * c.quasilinear, std::pow(t, e.lp) * c.lp,
          std::pow(t, e.lq) * c.lq, c.mass};
}

FiberCoefficients amplify(const FiberCoefficients& c, const ProblemParams& params, double amp) {
  const double a = std::abs(amp);
  return {a * a * c.kinetic, a * a * a * a * c.quasilinear, std::pow(a, params.p) * c.lp,
          std::pow(a, params.q) * c.lq, a * a * c.mass};
}

double energy(const FiberCoefficients& c, const ProblemParams& params) {
  return 0.5 * c.kinetic + c.quasilinear - c.lp / params.p - params.tau * c.lq / params.q;
}

double pohozaev(const FiberCoefficients& c, const ProblemParams& params) {
  const FiberExponents e = fiber_exponents(params);
  return c.kinetic + e.quasi * c.quasilinear - e.gamma_p * c.lp -
         params.tau * e.gamma_q * c.lq;
}

std::vector<double> TermGradients::combine(double wA, double wB, double wp, double wq) const {
  std::vector<double> out(kinetic.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = wA * kinetic[i] + wB * quasilinear[i] + wp * lp[i] + wq * lq[i];
  }
  return out;
}

std::vector<double> TermGradients::energy(const ProblemParams& params) const {
  return combine(0.5, 1.0, -1.0 / params.p, -params.tau / params.q);
}

TermGradients energy_gradient(const Profile& u, const ProblemParams& params) {
  const RadialGrid& g = u.grid();
  const auto v = u.values();
  const auto w = g.weights();
  const auto W = g.shell_weights();
  const std::size_t n = v.size();
  const double inv_h = 1.0 / g.spacing();
  TermGradients t{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                  std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  // dual vectors first
  for (std::size_t e = 0; e + 1 < n; ++e) {
    const double d = (v[e + 1] - v[e]) * inv_h;
    const double m = 0.5 * (v[e] * v[e] + v[e + 1] * v[e + 1]);
    const double ka = 2.0 * W[e] * d * inv_h;
    t.kinetic[e] -= ka;
    t.kinetic[e + 1] += ka;
    const double kb = 2.0 * W[e] * m * d * inv_h;
    const double d2 = W[e] * d * d;
    t.quasilinear[e] += d2 * v[e] - kb;
    t.quasilinear[e + 1] += d2 * v[e + 1] + kb;
  }
  for (std::size_t i = 0; i < n; ++i) {
    t.lp[i] = params.p * w[i] * signed_pow(v[i], params.p - 1.0);
    t.lq[i] = params.q * w[i] * signed_pow(v[i], params.q - 1.0);
  }
  for (auto* vec : {&t.kinetic, &t.quasilinear, &t.lp, &t.lq}) {
    for (std::size_t i = 0; i + 1 < n; ++i) (*vec)[i] /= w[i];
    vec->back() = 0.0;
  }
  return t;
}

std::vector<double> to_dual(const RadialGrid& grid, std::span<const double> riesz) {
  const auto w = grid.weights();
  if (riesz.size() != w.size()) throw ShapeError("to_dual: size mismatch");
  std::vector<double> d(riesz.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = w[i] * riesz[i];
  d.back() = 0.0;
  return d;
}

double weak_residual_quotient(const RadialGrid& grid, std::span<const double> residual_dual,
                              std::span<const double> reference_dual) {
  const SymTridiagonal gram = h1_gram(grid);
  const double den = dual_norm(gram, reference_dual);
  if (!(den > 0.0)) throw DomainError("weak residual: vanishing reference norm");
  return dual_norm(gram, residual_dual) / den;
}

double el_residual(const Profile& u, double lambda, const ProblemParams& params) {
  const RadialGrid& g = u.grid();
  const FiberCoefficients c = coefficients(u, params);
  if (!(c.mass > 0.0)) throw DomainError("el_residual: zero profile");
  const TermGradients tg = energy_gradient(u, params);
  const auto grad = tg.energy(params);
  const auto v = u.values();
  std::vector<double> res(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) res[i] = grad[i] + lambda * v[i];
  const SymTridiagonal gram = h1_gram(g);
  const double ref = 0.5 * dual_norm(gram, to_dual(g, tg.kinetic)) +
                     dual_norm(gram, to_dual(g, tg.quasilinear)) +
                     std::abs(lambda) * dual_norm(gram, to_dual(g, v));
  if (!(ref > 0.0)) throw DomainError("el_residual: vanishing reference norm");
  return dual_norm(gram, to_dual(g, res)) / ref;
}

double lagrange_multiplier(const FiberCoefficients& c, const ProblemParams& params) {
  if (!(c.mass > 0.0)) throw DomainError("lagrange_multiplier: zero mass");
  return (c.lp + params.tau * c.lq - c.kinetic - 4.0 * c.quasilinear) / c.mass;
}

double strong_form_multiplier(const Profile& u, const ProblemParams& params) {
  const RadialGrid& g = u.grid();
  const auto v = u.values();
  const auto w = g.weights();
  const std::size_t n = v.size();
  const double h = g.spacing();
  const double nm1 = g.dim() - 1.0;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double r = g.node(i);
    const double d1 = (v[i + 1] - v[i - 1]) / (2.0 * h);
    const double d2 = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
    const double lap = d2 + nm1 * d1 / r;
    const double ui = v[i];
    const double op = -(1.0 + 2.0 * ui * ui) * lap - 2.0 * ui * d1 * d1;
    const double rhs = signed_pow(ui, params.p - 1.0) + params.tau * signed_pow(ui, params.q - 1.0);
    num += w[i] * (op - rhs) * ui;
    den += w[i] * ui * ui;
  }
  if (!(den > 0.0)) throw DomainError("strong_form_multiplier: zero profile");
  return -num / den;
}

}  // namespace normsol
