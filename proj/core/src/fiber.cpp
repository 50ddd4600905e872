#include "normsol/fiber.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "normsol/error.hpp"
#include "normsol/roots.hpp"

namespace normsol {

FiberValue psi(const FiberCoefficients& c, const ProblemParams& params, double t) {
  if (!(t > 0.0)) throw DomainError("psi: scale must be positive, got " + std::to_string(t));
  const FiberExponents e = fiber_exponents(params);
  const double tb = std::pow(t, e.quasi);
  const double tp = std::pow(t, e.lp);
  const double tq = std::pow(t, e.lq);
  const double tau = params.tau;
  FiberValue v;
  v.value = 0.5 * c.kinetic * t * t + c.quasilinear * tb - c.lp / params.p * tp -
            tau * c.lq / params.q * tq;
  v.first = c.kinetic * t + e.quasi * c.quasilinear * tb / t - e.gamma_p * c.lp * tp / t -
            tau * e.gamma_q * c.lq * tq / t;
  v.second = c.kinetic + e.quasi * (e.quasi - 1.0) * c.quasilinear * tb / (t * t) -
             e.gamma_p * (e.lp - 1.0) * c.lp * tp / (t * t) -
             tau * e.gamma_q * (e.lq - 1.0) * c.lq * tq / (t * t);
  return v;
}

namespace {

struct Aux {
  double A, B, C, D;  // A, (N+2)B, γp Cp, τγq Dq
  double N;
  FiberExponents e;
};

Aux make_aux(const FiberCoefficients& c, const ProblemParams& params) {
  const FiberExponents e = fiber_exponents(params);
  if (!(c.kinetic > 0.0 && c.quasilinear > 0.0 && c.lp > 0.0 && c.lq > 0.0)) {
    throw DomainError("fiber: all four coefficients must be positive");
  }
  return {c.kinetic, e.quasi * c.quasilinear, e.gamma_p * c.lp,
          params.tau * e.gamma_q * c.lq, static_cast<double>(params.dim), e};
}

// f(t) with Ψ'(t) = t^{qγq-1}(f(t) - τγq Dq)
double aux_f(const Aux& a, double t) {
  return a.A * std::pow(t, 2.0 - a.e.lq) + a.B * std::pow(t, a.e.quasi - a.e.lq) -
         a.C * std::pow(t, a.e.lp - a.e.lq);
}

double aux_df(const Aux& a, double t) {
  return (2.0 - a.e.lq) * a.A * std::pow(t, 1.0 - a.e.lq) +
         (a.e.quasi - a.e.lq) * a.B * std::pow(t, a.e.quasi - a.e.lq - 1.0) -
         (a.e.lp - a.e.lq) * a.C * std::pow(t, a.e.lp - a.e.lq - 1.0);
}

// f'(t) = t^{1-qγq} h(t), h decreasing after at most one rise, h(0) > 0
double aux_h(const Aux& a, double t) {
  return (2.0 - a.e.lq) * a.A + (a.e.quasi - a.e.lq) * a.B * std::pow(t, a.N) -
         (a.e.lp - a.e.lq) * a.C * std::pow(t, a.e.lp - 2.0);
}

double aux_dh(const Aux& a, double t) {
  return a.N * (a.e.quasi - a.e.lq) * a.B * std::pow(t, a.N - 1.0) -
         (a.e.lp - 2.0) * (a.e.lp - a.e.lq) * a.C * std::pow(t, a.e.lp - 3.0);
}

// Solves g(t) = 0 in x = log t inside [lo, hi] (sign change assumed).
template <class G, class DG>
double solve_log(G&& g, DG&& dg, double lo, double hi) {
  auto fdf = [&](double x) {
    const double t = std::exp(x);
    return std::pair<double, double>{g(t), t * dg(t)};
  };
  const double x = roots::safeguarded_newton(fdf, std::log(lo), std::log(hi),
                                             0.5 * (std::log(lo) + std::log(hi)));
  return std::exp(x);
}

roots::Bracket bracket_from(const std::function<double(double)>& g, double t0, double factor,
                            const char* what) {
  try {
    return roots::expand_geometric(g, t0, factor, kFiberScaleMin, kFiberScaleMax);
  } catch (const BracketError& err) {
    throw NumericalError(std::string("fiber: cannot bracket ") + what + ": " + err.what());
  }
}

double f_maximizer(const Aux& a) {
  auto h = [&](double t) { return aux_h(a, t); };
  const double h1 = h(1.0);
  if (h1 == 0.0) return 1.0;
  roots::Bracket b = h1 > 0.0 ? bracket_from(h, 1.0, 2.0, "maximizer of f")
                              : bracket_from(h, 1.0, 0.5, "maximizer of f");
  return solve_log(h, [&](double t) { return aux_dh(a, t); }, b.lo, b.hi);
}

FiberCriticalPoints critical_points(const Aux& a, double& t_star) {
  t_star = f_maximizer(a);
  const double f_max = aux_f(a, t_star);
  if (!(f_max > a.D)) {
    throw NoTwoCriticalPoints("fiber: max f = " + std::to_string(f_max) +
                              " does not exceed tau*gamma_q*Dq = " + std::to_string(a.D));
  }
  auto F = [&](double t) { return aux_f(a, t) - a.D; };
  auto dF = [&](double t) { return aux_df(a, t); };
  const roots::Bracket bs = bracket_from(F, t_star, 0.5, "s_u");
  const roots::Bracket bt = bracket_from(F, t_star, 2.0, "t_u");
  return {solve_log(F, dF, bs.lo, bs.hi), solve_log(F, dF, bt.lo, bt.hi)};
}

}  // namespace

FiberCriticalPoints fiber_critical_points(const FiberCoefficients& c,
                                          const ProblemParams& params) {
  const Aux a = make_aux(c, params);
  double t_star = 0.0;
  return critical_points(a, t_star);
}

FiberPortrait fiber_portrait(const FiberCoefficients& c, const ProblemParams& params) {
  const Aux a = make_aux(c, params);
  FiberPortrait out;
  const FiberCriticalPoints cp = critical_points(a, out.f_max_scale);
  out.s_u = cp.s_u;
  out.t_u = cp.t_u;
  const FiberValue vs = psi(c, params, out.s_u);
  const FiberValue vt = psi(c, params, out.t_u);
  out.psi_at_s = vs.value;
  out.psi_at_t = vt.value;
  out.second_deriv_at_s = vs.second;
  out.second_deriv_at_t = vt.second;
  if (!(vt.value > 0.0)) {
    throw NumericalError("fiber: global maximum psi(t_u) = " + std::to_string(vt.value) +
                         " is not positive, no zeros");
  }
  if (!(vs.value < 0.0)) {
    throw NumericalError("fiber: local minimum psi(s_u) = " + std::to_string(vs.value) +
                         " is not negative");
  }
  auto P = [&](double t) { return psi(c, params, t).value; };
  auto dP = [&](double t) { return psi(c, params, t).first; };
  out.c_u = solve_log(P, dP, out.s_u, out.t_u);
  const roots::Bracket bd = bracket_from(P, out.t_u, 2.0, "d_u");
  out.d_u = solve_log(P, dP, bd.lo, bd.hi);

  const bool ordered = 0.0 < out.s_u && out.s_u < out.c_u && out.c_u < out.t_u &&
                       out.t_u < out.d_u;
  const bool curved = out.second_deriv_at_s > 0.0 && out.second_deriv_at_t < 0.0;
  if (!ordered || !curved) {
    throw NumericalError("fiber: portrait invariants violated (s=" + std::to_string(out.s_u) +
                         ", c=" + std::to_string(out.c_u) + ", t=" + std::to_string(out.t_u) +
                         ", d=" + std::to_string(out.d_u) + ")");
  }
  return out;
}

std::string_view to_string(ManifoldTag tag) {
  switch (tag) {
    case ManifoldTag::Plus:
      return "plus";
    case ManifoldTag::Zero:
      return "zero";
    case ManifoldTag::Minus:
      return "minus";
    case ManifoldTag::NotOnP:
      return "not_on_p";
  }
  return "not_on_p";
}

ManifoldTag manifold_tag_from_string(std::string_view name) {
  if (name == "plus") return ManifoldTag::Plus;
  if (name == "zero") return ManifoldTag::Zero;
  if (name == "minus") return ManifoldTag::Minus;
  if (name == "not_on_p") return ManifoldTag::NotOnP;
  throw ConfigError("unknown manifold tag '" + std::string(name) + "'");
}

ManifoldTag classify(const FiberCoefficients& c, const ProblemParams& params, double tol) {
  const FiberExponents e = fiber_exponents(params);
  const double scale = c.kinetic + e.quasi * c.quasilinear;
  const FiberValue v = psi(c, params, 1.0);
  const double band = tol * scale;
  if (std::abs(v.first) > band) return ManifoldTag::NotOnP;
  if (v.second > band) return ManifoldTag::Plus;
  if (v.second < -band) return ManifoldTag::Minus;
  return ManifoldTag::Zero;
}

Profile project_plus(const Profile& u, const ProblemParams& params) {
  return resample_dilation(u, fiber_critical_points(coefficients(u, params), params).s_u);
}

Profile project_minus(const Profile& u, const ProblemParams& params) {
  return resample_dilation(u, fiber_critical_points(coefficients(u, params), params).t_u);
}

}  // namespace normsol
