#include "normsol/dual.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "normsol/error.hpp"
#include "normsol/functionals.hpp"
#include "normsol/linalg.hpp"
#include "normsol/roots.hpp"

namespace normsol {

double dual_v(double s) {
  const double root = std::sqrt(1.0 + 2.0 * s * s);
  return 0.5 * s * root + std::numbers::sqrt2 / 4.0 * std::asinh(std::numbers::sqrt2 * s);
}

double dual_v_derivative(double s) { return std::sqrt(1.0 + 2.0 * s * s); }

double dual_phi(double w) {
  if (w == 0.0) return 0.0;
  if (w < 0.0) return -dual_phi(-w);
  if (!std::isfinite(w)) throw DomainError("dual_phi: argument must be finite");
  // s <= v(s) and s²/√2 <= v(s)
  const double hi = std::min(w, std::sqrt(std::numbers::sqrt2 * w)) * (1.0 + 1e-9);
  const double guess = w < 1.0 ? w : std::sqrt(std::numbers::sqrt2 * w);
  auto fdf = [w](double s) { return std::pair<double, double>{dual_v(s) - w, dual_v_derivative(s)}; };
  return roots::safeguarded_newton(fdf, 0.0, hi, guess, 1e-16, 200);
}

double dual_phi_derivative(double w) {
  const double s = dual_phi(w);
  return 1.0 / std::sqrt(1.0 + 2.0 * s * s);
}

Profile dual_profile(const Profile& u) {
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = dual_v(u[i]);
  return Profile(u.grid_ptr(), std::move(v));
}

namespace {

double signed_pow(double u, double e) {
  return u >= 0.0 ? std::pow(u, e) : -std::pow(-u, e);
}

// λφφ' - (φ^{p-1} + τφ^{q-1})φ'
double dual_force(double v, double lambda, const ProblemParams& params) {
  const double s = dual_phi(v);
  const double ds = 1.0 / std::sqrt(1.0 + 2.0 * s * s);
  return (lambda * s - signed_pow(s, params.p - 1.0) - params.tau * signed_pow(s, params.q - 1.0)) *
         ds;
}

}  // namespace

double dual_residual(const Profile& u, double lambda, const ProblemParams& params) {
  const RadialGrid& g = u.grid();
  bool nonzero = false;
  for (double x : u.values()) nonzero = nonzero || x != 0.0;
  if (!nonzero) throw DomainError("dual_residual: zero profile");
  const Profile v = dual_profile(u);
  const std::size_t n = v.size();
  const auto w = g.weights();
  const auto W = g.shell_weights();
  const double inv_h = 1.0 / g.spacing();
  std::vector<double> res(n, 0.0);
  for (std::size_t e = 0; e + 1 < n; ++e) {
    const double k = W[e] * (v[e + 1] - v[e]) * inv_h * inv_h;
    res[e] -= k;
    res[e + 1] += k;
  }
  std::vector<double> stiff = res;
  std::vector<double> mass(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = dual_phi(v[i]);
    const double ds = 1.0 / std::sqrt(1.0 + 2.0 * s * s);
    mass[i] = w[i] * lambda * s * ds;
    const double rhs = w[i] * (signed_pow(s, params.p - 1.0) + params.tau * signed_pow(s, params.q - 1.0)) * ds;
    res[i] += mass[i] - rhs;
  }
  res.back() = 0.0;
  stiff.back() = 0.0;
  mass.back() = 0.0;
  const SymTridiagonal gram = h1_gram(g);
  const double ref = dual_norm(gram, stiff) + dual_norm(gram, mass);
  if (!(ref > 0.0)) throw DomainError("dual_residual: vanishing reference norm");
  return dual_norm(gram, res) / ref;
}

namespace {

enum class Outcome { Crosses, TurnsUp, Decays };

struct Trajectory {
  Outcome outcome;
  std::vector<double> v;  // node values, zero beyond the event
  double event_r;
};

constexpr int kSubsteps = 4;
constexpr int kMaxBisections = 200;

Trajectory integrate(double beta, double lambda, const ProblemParams& params,
                     const RadialGrid& g) {
  const std::size_t n = g.size();
  const double h = g.spacing();
  const double nm1 = g.dim() - 1.0;
  Trajectory tr{Outcome::Decays, std::vector<double>(n, 0.0), g.r_max()};
  tr.v[0] = beta;
  // series start v = β + F(β) r²/(2N)
  const double f0 = dual_force(beta, lambda, params);
  double y = beta + f0 * h * h / (2.0 * g.dim());
  double z = f0 * h / g.dim();
  double r = h;
  auto rhs = [&](double rr, double yy, double zz) {
    return std::pair<double, double>{zz, dual_force(yy, lambda, params) - nm1 * zz / rr};
  };
  const double dt = h / kSubsteps;
  for (std::size_t i = 1; i < n; ++i) {
    if (i > 1) {
      for (int s = 0; s < kSubsteps; ++s) {
        const auto [k1y, k1z] = rhs(r, y, z);
        const auto [k2y, k2z] = rhs(r + 0.5 * dt, y + 0.5 * dt * k1y, z + 0.5 * dt * k1z);
        const auto [k3y, k3z] = rhs(r + 0.5 * dt, y + 0.5 * dt * k2y, z + 0.5 * dt * k2z);
        const auto [k4y, k4z] = rhs(r + dt, y + dt * k3y, z + dt * k3z);
        y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        z += dt / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        r += dt;
        if (y <= 0.0) {
          tr.outcome = Outcome::Crosses;
          tr.event_r = r;
          return tr;
        }
        if (z > 0.0) {
          tr.outcome = Outcome::TurnsUp;
          tr.event_r = r;
          return tr;
        }
      }
    }
    if (!std::isfinite(y) || !std::isfinite(z)) {
      tr.outcome = Outcome::Crosses;
      tr.event_r = r;
      return tr;
    }
    tr.v[i] = y;
  }
  return tr;
}

}  // namespace

ShootResult shoot(double lambda, const ProblemParams& params, const GridPtr& grid, double beta_lo,
                  double beta_hi) {
  if (!(lambda > 0.0)) throw DomainError("shoot: lambda must be positive");
  if (!grid) throw ConfigError("shoot: missing grid");
  if (!(beta_lo > 0.0 && beta_hi > beta_lo)) {
    throw ConfigError("shoot: need 0 < beta_lo < beta_hi");
  }
  auto upper_side = [](Outcome o) { return o == Outcome::Crosses; };
  Trajectory lo = integrate(beta_lo, lambda, params, *grid);
  Trajectory hi = integrate(beta_hi, lambda, params, *grid);
  if (upper_side(lo.outcome) == upper_side(hi.outcome)) {
    throw BracketError("shoot: trajectories at beta = " + std::to_string(beta_lo) + " and " +
                       std::to_string(beta_hi) + " behave alike");
  }
  bool lo_is_under = !upper_side(lo.outcome);
  double b_under = lo_is_under ? beta_lo : beta_hi;
  double b_over = lo_is_under ? beta_hi : beta_lo;
  Trajectory under = lo_is_under ? std::move(lo) : std::move(hi);
  int it = 0;
  for (; it < kMaxBisections; ++it) {
    const double mid = 0.5 * (b_under + b_over);
    if (mid == b_under || mid == b_over) break;
    Trajectory t = integrate(mid, lambda, params, *grid);
    if (upper_side(t.outcome)) {
      b_over = mid;
    } else {
      b_under = mid;
      under = std::move(t);
    }
  }
  std::vector<double> u(under.v.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = dual_phi(under.v[i]);
  return {Profile(grid, std::move(u)), b_under, under.event_r, it};
}

}  // namespace normsol
