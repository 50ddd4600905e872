#include "normsol/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <utility>

#include "normsol/error.hpp"
#include "normsol/linalg.hpp"
#include "normsol/roots.hpp"

namespace normsol {

namespace {

void require_constants(const ProblemParams& params) {
  if (!(params.gn_p > 0.0) || !(params.gn_q > 0.0)) {
    throw ConfigError("Gagliardo-Nirenberg constants must be positive (got C_p = " +
                      std::to_string(params.gn_p) + ", C_q = " + std::to_string(params.gn_q) +
                      ")");
  }
}

struct GTerms {
  double kp;  // (C_p/p) a^{αp}
  double kq;  // (τ C_q/q) a^{αq}
  double bp;  // pγp/(N+2)
  double bq;  // qγq/(N+2)
};

GTerms g_terms(const ProblemParams& params) {
  const FiberExponents e = fiber_exponents(params);
  const double ap = gn_mass_exponent(params.dim, params.p);
  const double aq = gn_mass_exponent(params.dim, params.q);
  return {params.gn_p / params.p * std::pow(params.mass, ap),
          params.tau * params.gn_q / params.q * std::pow(params.mass, aq), e.lp / e.quasi,
          e.lq / e.quasi};
}

double g_of(const GTerms& k, double s) {
  if (s == 0.0) return 0.0;
  return s - k.kp * std::pow(s, k.bp) - k.kq * std::pow(s, k.bq);
}

double dg_of(const GTerms& k, double s) {
  return 1.0 - k.kp * k.bp * std::pow(s, k.bp - 1.0) - k.kq * k.bq * std::pow(s, k.bq - 1.0);
}

template <class G, class DG>
double solve_log(G&& g, DG&& dg, double lo, double hi) {
  auto fdf = [&](double x) {
    const double s = std::exp(x);
    return std::pair<double, double>{g(s), s * dg(s)};
  };
  return std::exp(roots::safeguarded_newton(fdf, std::log(lo), std::log(hi),
                                            0.5 * (std::log(lo) + std::log(hi))));
}

// Moves a polished zero of g ulp by ulp toward `away` until g is nonpositive there.
template <class G>
double nonpositive_side(G&& g, double root, double away) {
  for (int k = 0; k < 64 && g(root) > 0.0; ++k) root = std::nextafter(root, away);
  return root;
}

constexpr double kLandscapeMin = 1e-300;
constexpr double kLandscapeMax = 1e300;

roots::Bracket bracket(const std::function<double(double)>& f, double x0, double factor,
                       const char* what) {
  try {
    return roots::expand_geometric(f, x0, factor, kLandscapeMin, kLandscapeMax);
  } catch (const BracketError& err) {
    throw NumericalError(std::string("landscape: cannot bracket ") + what + ": " + err.what());
  }
}

}  // namespace

double g_eval(double s, const ProblemParams& params) {
  if (s < 0.0) throw DomainError("g_eval: s must be nonnegative");
  require_constants(params);
  return g_of(g_terms(params), s);
}

Feasibility feasibility_condition(const ProblemParams& params) {
  require_constants(params);
  const FiberExponents e = fiber_exponents(params);
  const double ap = gn_mass_exponent(params.dim, params.p);
  const double aq = gn_mass_exponent(params.dim, params.q);
  const double ep = e.lp - e.quasi;  // pγp - (N+2) > 0
  const double eq = e.quasi - e.lq;  // N+2 - qγq > 0
  const double spread = e.lp - e.lq;
  Feasibility f;
  f.log_lhs = ep * (std::log(params.tau) + aq * std::log(params.mass)) +
              eq * ap * std::log(params.mass);
  f.log_rhs = eq * std::log(params.p * eq / (params.gn_p * spread)) +
              ep * std::log(params.q * ep / (params.gn_q * spread));
  f.lhs = std::exp(f.log_lhs);
  f.rhs = std::exp(f.log_rhs);
  f.holds = f.log_lhs < f.log_rhs;
  return f;
}

LandscapeReport landscape_report(const ProblemParams& params) {
  LandscapeReport rep;
  rep.condition = feasibility_condition(params);
  rep.holds = rep.condition.holds;
  const GTerms k = g_terms(params);
  const double br = 1.0 - k.bq;       // power of s in f
  const double bs = k.bp - k.bq;      // power of s in the second term of f
  rep.s_bar = std::pow(br / (k.kp * bs), 1.0 / (k.bp - 1.0));
  rep.f_at_s_bar = std::pow(rep.s_bar, br) - k.kp * std::pow(rep.s_bar, bs);
  rep.f_level = k.kq;
  if (!rep.holds) return rep;

  // φ(s) = s^{1-βq} - kp βp s^{βp-βq}, level kq βq; g'(s) = 0 iff φ(s) = level
  const double cp = k.kp * k.bp;
  const double level = k.kq * k.bq;
  const double s3 = std::pow(br / (cp * bs), 1.0 / (k.bp - 1.0));
  auto phi = [&](double s) { return std::pow(s, br) - cp * std::pow(s, bs) - level; };
  auto dphi = [&](double s) {
    return br * std::pow(s, br - 1.0) - cp * bs * std::pow(s, bs - 1.0);
  };
  if (!(phi(s3) > 0.0)) {
    throw NumericalError("landscape: auxiliary maximum does not exceed the critical level");
  }
  const roots::Bracket b0 = bracket(phi, s3, 0.5, "s0");
  const roots::Bracket b1 = bracket(phi, s3, 2.0, "s1");
  rep.s0 = solve_log(phi, dphi, b0.lo, b0.hi);
  rep.s1 = solve_log(phi, dphi, b1.lo, b1.hi);
  rep.g_at_s0 = g_of(k, rep.s0);
  rep.g_at_s1 = g_of(k, rep.s1);
  if (!(rep.g_at_s0 < 0.0 && rep.g_at_s1 > 0.0)) {
    throw NumericalError("landscape: critical values of g have the wrong signs");
  }
  auto g = [&](double s) { return g_of(k, s); };
  auto dg = [&](double s) { return dg_of(k, s); };
  rep.R0 = nonpositive_side(g, solve_log(g, dg, rep.s0, rep.s1), 0.0);
  const roots::Bracket b2 = bracket(g, rep.s1, 2.0, "R1");
  rep.R1 = nonpositive_side(g, solve_log(g, dg, b2.lo, b2.hi), kLandscapeMax);
  return rep;
}

double gn_quotient(int dim, double t, double lt, double mass, double quasilinear) {
  if (!(mass > 0.0) || !(quasilinear > 0.0)) {
    throw DomainError("gn_quotient: mass and V must be positive");
  }
  const double ea = gn_mass_exponent(dim, t);
  const double ev = gn_quasi_exponent(dim, t);
  return std::exp(std::log(lt) - ea * std::log(mass) - ev * std::log(quasilinear));
}

double gn_quotient(const Profile& u, double t) {
  ProblemParams pp;
  pp.dim = u.grid().dim();
  pp.p = t;
  pp.q = t;
  const FiberCoefficients c = coefficients(u, pp);
  return gn_quotient(pp.dim, t, c.lp, c.mass, c.quasilinear);
}

namespace {

struct AscentResult {
  double value;
  Profile profile;
};

// Preconditioned gradient ascent on log Q at unit mass.
AscentResult ascend_quotient(Profile u, double t, int max_iters) {
  const RadialGrid& g = u.grid();
  const int dim = g.dim();
  ProblemParams pp;
  pp.dim = dim;
  pp.p = t;
  pp.q = t;
  const double ea = gn_mass_exponent(dim, t);
  const double ev = gn_quasi_exponent(dim, t);
  const std::size_t n = u.size();
  const auto w = g.weights();

  auto normalize = [&](std::vector<double> v) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += w[i] * v[i] * v[i];
    const double s = 1.0 / std::sqrt(m);
    for (double& x : v) x *= s;
    return Profile(u.grid_ptr(), std::move(v));
  };
  auto log_q = [&](const FiberCoefficients& c) {
    return std::log(c.lp) - ea * std::log(c.mass) - ev * std::log(c.quasilinear);
  };

  u = normalize(std::vector<double>(u.values().begin(), u.values().end()));
  FiberCoefficients c = coefficients(u, pp);
  double val = log_q(c);
  double step = 1.0;
  int stalled = 0;
  for (int it = 0; it < max_iters; ++it) {
    const TermGradients tg = energy_gradient(u, pp);
    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] = tg.lp[i] / c.lp - ea * 2.0 * u[i] / c.mass - ev * tg.quasilinear[i] / c.quasilinear;
    }
    const std::vector<double> dual = to_dual(g, grad);
    std::vector<double> shell(n - 1);
    for (std::size_t e = 0; e + 1 < n; ++e) shell[e] = 1.0 + (u[e] * u[e] + u[e + 1] * u[e + 1]);
    const std::vector<double> dir = weighted_stiffness(g, shell, 1.0).solve(dual);
    const double slope = dot(dual, dir);
    if (!(slope > 1e-28)) break;
    bool accepted = false;
    while (step > 1e-14) {
      std::vector<double> trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + step * dir[i];
      trial.back() = 0.0;
      Profile cand = normalize(std::move(trial));
      const FiberCoefficients cc = coefficients(cand, pp);
      if (cc.quasilinear > 0.0 && cc.lp > 0.0) {
        const double nv = log_q(cc);
        if (nv >= val + 1e-4 * step * slope) {
          stalled = (nv - val < 1e-13 * std::abs(val) + 1e-15) ? stalled + 1 : 0;
          u = std::move(cand);
          c = cc;
          val = nv;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted || stalled >= 5) break;
    step = std::min(2.0 * step, 1e3);
  }
  return {std::exp(val), std::move(u)};
}

}  // namespace

GnEstimate estimate_gn_constant(int dim, double t, const GridPtr& grid, int trials,
                                std::uint64_t seed, int max_iters) {
  if (!grid) throw ConfigError("estimate_gn_constant: missing grid");
  if (grid->dim() != dim) throw ConfigError("estimate_gn_constant: grid dimension mismatch");
  if (!(t > 2.0 && t < doubled_critical_exponent(dim))) {
    throw ConfigError("estimate_gn_constant: exponent must lie in (2, 2*2^*)");
  }
  if (trials < 0) throw ConfigError("estimate_gn_constant: trials must be nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(0.1, 1.0);
  std::uniform_real_distribution<double> log_width(std::log(0.1), std::log(10.0));
  const double r_max = grid->r_max();
  const double base_width = r_max * r_max / 64.0;

  GnEstimate out;
  for (int k = 0; k <= trials; ++k) {
    Profile seed_profile;
    if (k == 0) {
      seed_profile = Profile::sample(grid, [&](double r) { return std::exp(-r * r / base_width); });
    } else {
      double c[3];
      double wd[3];
      for (int j = 0; j < 3; ++j) {
        c[j] = amp(rng);
        wd[j] = std::exp(log_width(rng)) * base_width;
      }
      seed_profile = Profile::sample(grid, [&](double r) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) s += c[j] * std::exp(-r * r / wd[j]);
        return s;
      });
    }
    ProblemParams pp;
    pp.dim = dim;
    pp.p = t;
    pp.q = t;
    const FiberCoefficients c0 = coefficients(seed_profile, pp);
    if (!(c0.quasilinear > 0.0) || !(c0.mass > 0.0)) continue;
    AscentResult res = ascend_quotient(std::move(seed_profile), t, max_iters);
    out.seed_values.push_back(res.value);
    if (res.value > out.value) {
      out.value = res.value;
      out.best = std::move(res.profile);
    }
  }
  if (out.seed_values.empty()) {
    throw NumericalError("estimate_gn_constant: every seed is degenerate (V = 0)");
  }
  return out;
}

std::vector<ScanRow> region_scan(const ProblemParams& tmpl, ScanRange a, ScanRange tau,
                                 int resolution, int jobs) {
  if (!(a.lo > 0.0 && a.hi >= a.lo && tau.lo > 0.0 && tau.hi >= tau.lo)) {
    throw ConfigError("region_scan: ranges must be positive and ordered");
  }
  if (resolution < 1) throw ConfigError("region_scan: resolution must be positive");
  require_constants(tmpl);
  const auto res = static_cast<std::size_t>(resolution);
  auto spaced = [&](ScanRange r, std::size_t i) {
    if (res == 1 || i == 0) return r.lo;
    if (i + 1 == res) return r.hi;
    const double x = static_cast<double>(i) / static_cast<double>(res - 1);
    return std::exp(std::log(r.lo) + x * (std::log(r.hi) - std::log(r.lo)));
  };
  std::vector<ScanRow> rows(res * res);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      ProblemParams pp = tmpl;
      pp.mass = spaced(a, k / res);
      pp.tau = spaced(tau, k % res);
      const Feasibility f = feasibility_condition(pp);
      rows[k] = {pp.mass, pp.tau, f.lhs, f.rhs, f.log_lhs, f.log_rhs, f.holds};
    }
  };
  const std::size_t nj = std::clamp<std::size_t>(jobs < 1 ? 1 : jobs, 1, rows.size());
  if (nj == 1) {
    work(0, rows.size());
    return rows;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (rows.size() + nj - 1) / nj;
  for (std::size_t j = 0; j < nj; ++j) {
    const std::size_t b = j * chunk;
    const std::size_t e = std::min(rows.size(), b + chunk);
    if (b < e) pool.emplace_back(work, b, e);
  }
  for (auto& th : pool) th.join();
  return rows;
}

double feasibility_boundary_slope(const ProblemParams& params) {
  const FiberExponents e = fiber_exponents(params);
  const double ap = gn_mass_exponent(params.dim, params.p);
  const double aq = gn_mass_exponent(params.dim, params.q);
  const double e_tau = e.lp - e.quasi;
  const double e_a = e_tau * aq + (e.quasi - e.lq) * ap;
  return -e_a / e_tau;
}

}  // namespace normsol
