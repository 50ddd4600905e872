#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "normsol/error.hpp"
#include "normsol/fiber.hpp"
#include "normsol/landscape.hpp"
#include "support.hpp"

using namespace normsol;

namespace {

ProblemParams unit_tau() {
  ProblemParams p = testsupport::feasible_params();
  p.tau = 1.0;
  return p;
}

// Ψ'(t) written out independently of the library.
double dpsi(const FiberCoefficients& c, double tau, double t) {
  return c.kinetic * t + 5 * c.quasilinear * std::pow(t, 4) - (15.0 / 14) * c.lp * std::pow(t, 6.5) -
         tau * 0.5 * c.lq * std::pow(t, 0.5);
}

// Sign changes of Ψ' on a log-spaced scan, each refined by bisection.
std::vector<double> scan_roots(const FiberCoefficients& c, double tau) {
  const int n = 1000000;
  const double l0 = std::log(1e-4), l1 = std::log(1e4);
  std::vector<double> roots;
  double prev_t = 1e-4;
  double prev = dpsi(c, tau, prev_t);
  for (int i = 1; i <= n; ++i) {
    const double t = std::exp(l0 + (l1 - l0) * i / n);
    const double cur = dpsi(c, tau, t);
    if ((prev < 0) != (cur < 0)) {
      double lo = prev_t, hi = t;
      for (int k = 0; k < 80; ++k) {
        const double mid = 0.5 * (lo + hi);
        if ((dpsi(c, tau, mid) < 0) == (prev < 0)) lo = mid; else hi = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev = cur;
    prev_t = t;
  }
  return roots;
}

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Sum of the absolute fiber terms at t; zeros can only be resolved to eps times this.
double term_scale(const FiberCoefficients& c, double t) {
  return c.kinetic / 2 * t * t + c.quasilinear * std::pow(t, 5) + c.lp / 7 * std::pow(t, 7.5) +
         c.lq / 3 * std::pow(t, 1.5);
}

FiberCoefficients random_coeffs(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lu(std::log(1e-2), std::log(1e2));
  return {std::exp(lu(rng)), std::exp(lu(rng)), std::exp(lu(rng)), std::exp(lu(rng)), 1.0};
}

Profile gaussian(const GridPtr& g, double width, double amp) {
  return Profile::sample(g, [=](double r) { return amp * std::exp(-r * r / width); });
}

}  // namespace

TEST_CASE("fiber exponents for (3, 7, 3)") {
  const FiberExponents e = fiber_exponents(unit_tau());
  CHECK(e.lp == doctest::Approx(7.5));
  CHECK(e.lq == doctest::Approx(1.5));
  CHECK(e.quasi == 5.0);
}

TEST_CASE("psi") {
  const ProblemParams params = unit_tau();
  const FiberCoefficients c{1.3, 0.4, 2.2, 0.7, 1.0};
  SUBCASE("derivative at 1 is the Pohozaev functional") {
    CHECK(psi(c, params, 1.0).first == pohozaev(c, params));
  }
  SUBCASE("value at 1 is the energy") {
    CHECK(psi(c, params, 1.0).value == doctest::Approx(energy(c, params)).epsilon(1e-14));
  }
  SUBCASE("no nonlinear terms gives an increasing fiber") {
    const FiberCoefficients lin{1.0, 2.0, 0.0, 0.0, 1.0};
    for (double t : {1e-6, 1e-2, 0.5, 1.0, 3.0, 1e3}) CHECK(psi(lin, params, t).first > 0.0);
  }
  SUBCASE("derivatives against finite differences") {
    for (double t : {0.2, 0.9, 1.7}) {
      const double h = 1e-6 * t;
      const auto mid = psi(c, params, t);
      const double d1 = (psi(c, params, t + h).value - psi(c, params, t - h).value) / (2 * h);
      const double d2 = (psi(c, params, t + h).first - psi(c, params, t - h).first) / (2 * h);
      CHECK(mid.first == doctest::Approx(d1).epsilon(1e-7));
      CHECK(mid.second == doctest::Approx(d2).epsilon(1e-7));
    }
  }
  SUBCASE("nonpositive scale") {
    CHECK_THROWS_AS(psi(c, params, 0.0), DomainError);
    CHECK_THROWS_AS(psi(c, params, -1.0), DomainError);
  }
}

TEST_CASE("portrait roots agree with a dense sign scan") {
  const ProblemParams params = unit_tau();
  std::mt19937_64 rng(2024);
  int two = 0, none = 0;
  for (int k = 0; k < 100; ++k) {
    const FiberCoefficients c = random_coeffs(rng);
    const auto roots = scan_roots(c, params.tau);
    CAPTURE(k);
    CHECK(roots.size() <= 2);
    FiberCriticalPoints cp{};
    try {
      cp = fiber_critical_points(c, params);
    } catch (const NoTwoCriticalPoints&) {
      ++none;
      CHECK(roots.empty());
      continue;
    } catch (const NumericalError&) {
      // a critical point below 1e-8 or above 1e8, so the scan sees at most one
      CHECK(roots.size() <= 1);
      continue;
    }
    const auto inside = [](double t) { return t >= 1e-4 && t <= 1e4; };
    std::vector<double> expected;
    for (double t : {cp.s_u, cp.t_u}) if (inside(t)) expected.push_back(t);
    REQUIRE(roots.size() == expected.size());
    for (std::size_t i = 0; i < roots.size(); ++i) CHECK(std::abs(expected[i] / roots[i] - 1) < 1e-6);
    if (roots.size() == 2) ++two;
  }
  CHECK(two > 10);
  MESSAGE("tuples with two critical points: " << two << ", without: " << none);
}

TEST_CASE("no two critical points when Dq dominates") {
  const ProblemParams params = unit_tau();
  FiberCoefficients c{1.0, 1.0, 1.0, 1.0, 1.0};
  CHECK_NOTHROW(fiber_critical_points(c, params));
  c.lq = 1e3;
  CHECK_THROWS_AS(fiber_critical_points(c, params), NoTwoCriticalPoints);
  CHECK_THROWS_AS(fiber_portrait(c, params), NoTwoCriticalPoints);
}

TEST_CASE("portrait invariants") {
  const ProblemParams params = unit_tau();
  std::mt19937_64 rng(99);
  int valid = 0;
  for (int k = 0; k < 300; ++k) {
    const FiberCoefficients c = random_coeffs(rng);
    FiberPortrait pt;
    try {
      pt = fiber_portrait(c, params);
    } catch (const NumericalError&) {
      continue;
    }
    ++valid;
    CHECK(0 < pt.s_u);
    CHECK(pt.s_u < pt.c_u);
    CHECK(pt.c_u < pt.t_u);
    CHECK(pt.t_u < pt.d_u);
    CHECK(pt.psi_at_s < 0);
    CHECK(pt.psi_at_t > 0);
    CHECK(pt.second_deriv_at_s > 0);
    CHECK(pt.second_deriv_at_t < 0);
    for (double t : {pt.c_u, pt.d_u}) {
      CHECK(std::abs(psi(c, params, t).value) <= std::max(1e-10, 4 * kEps * term_scale(c, t)));
    }
    CHECK(pt.condition() > 0);
    CHECK(pt.condition() < 1);
  }
  CHECK(valid > 20);
}

TEST_CASE("classification") {
  const ProblemParams params = unit_tau();
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int k = 0; k < 200; ++k) {
    const FiberCoefficients c = random_coeffs(rng);
    CHECK(classify(c, params, kDegenerateBandTol) == ManifoldTag::NotOnP);
    FiberCriticalPoints cp{};
    try {
      cp = fiber_critical_points(c, params);
    } catch (const NumericalError&) {
      continue;
    }
    ++checked;
    const ManifoldTag plus = classify(dilate(c, params, cp.s_u), params, kDegenerateBandTol);
    const ManifoldTag minus = classify(dilate(c, params, cp.t_u), params, kDegenerateBandTol);
    CHECK(plus == ManifoldTag::Plus);
    CHECK(minus == ManifoldTag::Minus);
  }
  CHECK(checked > 10);
}

TEST_CASE("tag names") {
  for (ManifoldTag t : {ManifoldTag::Plus, ManifoldTag::Zero, ManifoldTag::Minus, ManifoldTag::NotOnP}) {
    CHECK(manifold_tag_from_string(to_string(t)) == t);
  }
  CHECK(to_string(ManifoldTag::Plus) == "plus");
  CHECK(to_string(ManifoldTag::NotOnP) == "not_on_p");
}

TEST_CASE("projections of profiles") {
  const ProblemParams params = testsupport::feasible_params();
  auto g = build_grid(3, 20.0, 2000);
  const LandscapeReport rep = landscape_report(params);
  REQUIRE(rep.holds);

  for (double width : {0.5, 1.0, 2.0, 4.0}) {
    CAPTURE(width);
    const Profile u = gaussian(g, width, 1.0);
    const double amp = std::sqrt(params.mass / coefficients(u, params).mass);
    const Profile v = u.scaled(amp);

    const FiberCoefficients c0 = coefficients(v, params);
    const Profile plus = project_plus(v, params);
    const FiberCoefficients cplus = coefficients(plus, params);
    CHECK(classify(cplus, params, 1e-3) == ManifoldTag::Plus);
    CHECK(cplus.quasilinear < rep.R0);

    const Profile twice = project_plus(plus, params);
    double diff = 0, ref = 0;
    for (std::size_t i = 0; i < plus.size(); ++i) {
      diff = std::max(diff, std::abs(twice[i] - plus[i]));
      ref = std::max(ref, std::abs(plus[i]));
    }
    CHECK(diff / ref < 1e-3);

    const FiberPortrait pt = fiber_portrait(c0, params);
    CHECK(std::abs(psi(c0, params, pt.c_u).value) < 1e-10);
    CHECK(std::abs(psi(c0, params, pt.d_u).value) < 1e-10);

    const Profile minus = project_minus(v, params);
    CHECK(classify(coefficients(minus, params), params, 1e-3) == ManifoldTag::Minus);

    const FiberCoefficients c = coefficients(v, params);
    const double top = energy(dilate(c, params, fiber_critical_points(c, params).t_u), params);
    std::mt19937_64 rng(static_cast<std::uint64_t>(width * 10));
    std::uniform_real_distribution<double> lt(std::log(1e-2), std::log(1e2));
    for (int k = 0; k < 50; ++k) {
      CHECK(top >= energy(dilate(c, params, std::exp(lt(rng))), params));
    }
  }
}

TEST_CASE("degenerate band stays empty on feasible profiles") {
  const ProblemParams params = testsupport::feasible_params();
  auto g = build_grid(3, 20.0, 1000);
  std::mt19937_64 rng(41);
  for (int k = 0; k < 30; ++k) {
    const Profile u = testsupport::random_profile(g, rng);
    const double amp = std::sqrt(params.mass / coefficients(u, params).mass);
    const FiberCoefficients c = coefficients(u.scaled(amp), params);
    CHECK(classify(c, params, kDegenerateBandTol) != ManifoldTag::Zero);
    const FiberCriticalPoints cp = fiber_critical_points(c, params);
    for (double t : {cp.s_u, cp.t_u, 1.0}) {
      CHECK(classify(dilate(c, params, t), params, kDegenerateBandTol) != ManifoldTag::Zero);
    }
  }
}
