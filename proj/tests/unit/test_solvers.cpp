#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "normsol/error.hpp"
#include "normsol/fiber.hpp"
#include "normsol/landscape.hpp"
#include "normsol/linalg.hpp"
#include "normsol/solvers.hpp"
#include "support.hpp"

using namespace normsol;

namespace {

struct Pair {
  GridPtr grid;
  SolveResult ground;
  SolveResult mp;
};

const Pair& solved(std::size_t n) {
  static std::map<std::size_t, Pair> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    const ProblemParams params = testsupport::feasible_params();
    Pair p;
    p.grid = build_grid(3, 20.0, n);
    p.ground = solve_ground(params, p.grid);
    p.mp = solve_mountain_pass(params, p.grid);
    it = cache.emplace(n, std::move(p)).first;
  }
  return it->second;
}

Profile random_on_sphere(const GridPtr& g, std::mt19937_64& rng, double mass) {
  const Profile u = testsupport::random_profile(g, rng);
  const ProblemParams params = testsupport::feasible_params();
  return u.scaled(std::sqrt(mass / coefficients(u, params).mass));
}

double rel_l2_distance(const Profile& a, const Profile& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a[i] - b[i];
  return std::sqrt(weighted_dot(a.grid(), d, d) / weighted_dot(a.grid(), a.values(), a.values()));
}

}  // namespace

TEST_CASE("ground state") {
  const ProblemParams params = testsupport::feasible_params();
  const SolveResult& r = solved(2000).ground;
  const LandscapeReport land = landscape_report(params);
  CHECK(r.converged);
  CHECK(r.kind == SolutionKind::Ground);
  CHECK(r.energy < 0);
  CHECK(r.tag == ManifoldTag::Plus);
  CHECK(r.coeffs.quasilinear < land.R0);
  CHECK(r.barrier == land.R0);
  CHECK(r.lambda > 0);
  CHECK(r.pohozaev_res < 1e-6);
  CHECK(r.el_res < 1e-4);
  CHECK(r.mass_err < 1e-10 * params.mass);
  CHECK(std::abs(coefficients(r.profile, params).mass - params.mass) < 1e-10 * params.mass);
  CHECK(r.energy == doctest::Approx(energy(r.coeffs, params)).epsilon(1e-14));
  CHECK(r.lambda == doctest::Approx(lagrange_multiplier(r.coeffs, params)).epsilon(1e-14));
  CHECK(monotonicity_violations(r.profile, 1e-12) == 0);
  CHECK(psi(r.coeffs, params, 1.0).second > 0);
  CHECK(r.fiber_condition > 0);
  CHECK(std::abs(strong_form_multiplier(r.profile, params) / r.lambda - 1) < 1e-3);
}

TEST_CASE("mountain pass") {
  const ProblemParams params = testsupport::feasible_params();
  const Pair& p = solved(2000);
  const SolveResult& r = p.mp;
  CHECK(r.converged);
  CHECK(r.kind == SolutionKind::MountainPass);
  CHECK(r.energy > 0);
  CHECK(r.energy > p.ground.energy);
  CHECK(r.tag == ManifoldTag::Minus);
  CHECK(psi(r.coeffs, params, 1.0).second < 0);
  CHECK(r.lambda > 0);
  CHECK(r.el_res < 1e-3);
  CHECK(r.mass_err < 1e-10 * params.mass);
  CHECK(monotonicity_violations(r.profile, 1e-12) == 0);

  SUBCASE("inf-max lower bound from random starts") {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 10; ++k) {
      const FiberCoefficients c = coefficients(random_on_sphere(p.grid, rng, params.mass), params);
      const double top = energy(dilate(c, params, fiber_critical_points(c, params).t_u), params);
      CHECK(top >= r.energy - 1e-6 * std::abs(r.energy));
    }
  }
  SUBCASE("ground state is the lower level") {
    const Profile pulled = project_plus(r.profile, params);
    CHECK(energy(coefficients(pulled, params), params) >= p.ground.energy);
  }
}

TEST_CASE("envelope gradient") {
  const ProblemParams params = testsupport::feasible_params();
  auto g = build_grid(3, 20.0, 800);
  std::mt19937_64 rng(13);
  const double eps = 1e-5;
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Profile u = random_on_sphere(g, rng, params.mass);
    const EnvelopeGradient eg = envelope_gradient(u, params);
    CHECK(eg.value > 0);
    CHECK(eg.value == doctest::Approx(envelope_energy(u, params)));
    for (int j = 0; j < 5; ++j) {
      const auto d = testsupport::random_direction(g, rng);
      const double fd = (envelope_energy(testsupport::shifted(u, d, eps), params) -
                         envelope_energy(testsupport::shifted(u, d, -eps), params)) /
                        (2 * eps);
      const double an = weighted_dot(*g, eg.gradient, d);
      worst = std::max(worst, std::abs(an - fd) / std::abs(fd));
    }
  }
  CHECK(worst < 1e-4);

  SUBCASE("reduces to the energy gradient at the mountain-pass solution") {
    const SolveResult& mp = solved(2000).mp;
    const EnvelopeGradient eg = envelope_gradient(mp.profile, params);
    CHECK(eg.t_u == doctest::Approx(1.0).epsilon(1e-6));
    const auto plain = energy_gradient(mp.profile, params).energy(params);
    std::vector<double> diff(plain.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = eg.gradient[i] - plain[i];
    const GridPtr& gp = mp.profile.grid_ptr();
    CHECK(std::sqrt(weighted_dot(*gp, diff, diff) / weighted_dot(*gp, plain, plain)) < 1e-5);
  }
}

TEST_CASE("infeasible parameters are refused") {
  ProblemParams params = testsupport::feasible_params();
  params.tau = 1e3;
  params.mass = 100.0;
  auto g = build_grid(3, 20.0, 200);
  CHECK_THROWS_AS(solve_ground(params, g), FeasibilityError);
  CHECK_THROWS_AS(solve_mountain_pass(params, g), FeasibilityError);
}

TEST_CASE("option and shape errors") {
  const ProblemParams params = testsupport::feasible_params();
  auto g = build_grid(3, 20.0, 200);
  SolveOptions bad;
  bad.max_iters = 0;
  CHECK_THROWS_AS(solve_ground(params, g, bad), ConfigError);
  bad = {};
  bad.grad_tol = -1.0;
  CHECK_THROWS_AS(solve_ground(params, g, bad), ConfigError);
  const Profile wrong = Profile::sample(build_grid(3, 20.0, 300), [](double r) { return std::exp(-r * r); });
  CHECK_THROWS_AS(solve_ground(params, g, {}, wrong), ShapeError);
}

TEST_CASE("fixed point") {
  const ProblemParams params = testsupport::feasible_params();
  const Pair& p = solved(2000);
  SolveOptions one;
  one.max_iters = 1;
  const SolveResult again = solve_ground(params, p.grid, one, p.ground.profile);
  CHECK(rel_l2_distance(p.ground.profile, again.profile) < SolveOptions{}.grad_tol);

  SolveOptions one_mp = mountain_pass_defaults();
  one_mp.max_iters = 1;
  const SolveResult mp_again = solve_mountain_pass(params, p.grid, one_mp, p.mp.profile);
  CHECK(rel_l2_distance(p.mp.profile, mp_again.profile) < mountain_pass_defaults().grad_tol);
}

TEST_CASE("descent is monotone and respects the barrier") {
  const ProblemParams params = testsupport::feasible_params();
  auto g = build_grid(3, 20.0, 1000);
  const double R0 = landscape_report(params).R0;
  for (int iters : {1, 2, 3, 5, 8, 13, 21, 34}) {
    SolveOptions o;
    o.max_iters = iters;
    const SolveResult r = solve_ground(params, g, o);
    CAPTURE(iters);
    CHECK(r.coeffs.quasilinear < R0);
    CHECK(r.mass_err < 1e-10 * params.mass);
  }
  const SolveResult& ground = solved(2000).ground;
  REQUIRE(ground.objective_trace.size() >= 2);
  for (std::size_t k = 1; k < ground.objective_trace.size(); ++k) {
    CHECK(ground.objective_trace[k] <= ground.objective_trace[k - 1]);
  }

  // only the recentering resamples may raise E⁻, and only by interpolation error
  const SolveResult& mp = solved(2000).mp;
  REQUIRE(mp.objective_trace.size() >= 2);
  int rises = 0;
  for (std::size_t k = 1; k < mp.objective_trace.size(); ++k) {
    const double up = mp.objective_trace[k] - mp.objective_trace[k - 1];
    if (up > 0) {
      ++rises;
      CHECK(up < 1e-6 * mp.objective_trace[k]);
    }
  }
  CHECK(rises < static_cast<int>(mp.objective_trace.size()) / 2);
}

TEST_CASE("Pohozaev residual is controlled by the equation residual") {
  const ProblemParams params = testsupport::feasible_params();
  auto g = build_grid(3, 20.0, 1000);
  std::mt19937_64 rng(4);
  const SolveResult ref = solve_ground(params, g);
  double worst = 0.0;
  for (double noise : {1e-4, 1e-3, 1e-2, 5e-2}) {
    for (int k = 0; k < 4; ++k) {
      const auto d = testsupport::random_direction(g, rng);
      Profile u = testsupport::shifted(ref.profile, d, noise);
      const FiberCoefficients c = coefficients(u, params);
      u = u.scaled(std::sqrt(params.mass / c.mass));
      const FiberCoefficients cu = coefficients(u, params);
      const double lambda = lagrange_multiplier(cu, params);
      const double el = el_residual(u, lambda, params);
      const double P = std::abs(pohozaev(cu, params)) / (cu.kinetic + 5 * cu.quasilinear);
      worst = std::max(worst, P / el);
    }
  }
  MESSAGE("max |P|/(A+5B) per unit EL residual: " << worst);
  CHECK(worst < 10.0);
}

TEST_CASE("restarts") {
  const ProblemParams params = testsupport::feasible_params();
  auto g = build_grid(3, 20.0, 1000);
  SolveOptions o;
  o.restarts = 3;
  o.seed = 5;
  const SolveResult r = solve_ground(params, g, o);
  REQUIRE(r.restart_energies.size() == 4);
  for (double e : r.restart_energies) CHECK(r.energy <= e);
  CHECK(r.diagnostics.find("restart spread") != std::string::npos);

  const SolveResult again = solve_ground(params, g, o);
  CHECK(again.energy == r.energy);
  for (std::size_t i = 0; i < r.profile.size(); ++i) CHECK(again.profile[i] == r.profile[i]);

  SolveOptions m = mountain_pass_defaults();
  m.restarts = 2;
  const SolveResult mp = solve_mountain_pass(params, g, m);
  REQUIRE(mp.restart_energies.size() == 3);
  for (double e : mp.restart_energies) CHECK(mp.energy <= e);
}

TEST_CASE("quotients of the ground state stay below the estimated constants") {
  const SolveResult& r = solved(2000).ground;
  CHECK(gn_quotient(r.profile, 7.0) <= testsupport::kC7);
  CHECK(gn_quotient(r.profile, 3.0) <= testsupport::kC3);
}

TEST_CASE("verification report") {
  const ProblemParams params = testsupport::feasible_params();
  const Pair& p = solved(4000);
  const TheoremReport rep = verify_theorem(params, p.ground, p.mp);
  for (const TheoremCheck& c : rep.checks) {
    CAPTURE(c.name);
    CAPTURE(c.value);
    CHECK(c.passed);
  }
  CHECK(rep.passed());
  CHECK(rep.checks.size() > 15);

  SUBCASE("a failed solve fails the report") {
    SolveResult broken = p.ground;
    broken.converged = false;
    CHECK_FALSE(verify_theorem(params, broken, p.mp).passed());
    SolveResult swapped = p.mp;
    swapped.kind = SolutionKind::Ground;
    CHECK_FALSE(verify_theorem(params, swapped, p.ground).passed());
  }
}

TEST_CASE("monotonicity violations") {
  auto g = build_grid(3, 5.0, 51);
  const Profile dec = Profile::sample(g, [](double r) { return std::exp(-r); });
  CHECK(monotonicity_violations(dec, 0.0) == 0);
  const Profile bump = Profile::sample(g, [](double r) { return std::exp(-(r - 2) * (r - 2)); });
  CHECK(monotonicity_violations(bump, 1e-12) == 20);
  CHECK(monotonicity_violations(bump, 2.0) == 0);
}

TEST_CASE("kind names") {
  CHECK(to_string(SolutionKind::Ground) == "ground");
  CHECK(to_string(SolutionKind::MountainPass) == "mountain_pass");
}
