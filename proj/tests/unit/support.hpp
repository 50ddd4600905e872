#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "normsol/grid.hpp"
#include "normsol/params.hpp"

namespace testsupport {

// Estimated constants for (N, p, q) = (3, 7, 3) at the default estimator settings.
inline constexpr double kC7 = 0.2059033941132121;
inline constexpr double kC3 = 0.6168734174314425;

inline normsol::ProblemParams feasible_params() {
  return {3, 7.0, 3.0, 10.0, 2.0, kC7, kC3};
}

// Composite Simpson rule, n even.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Positive smooth radial profile: sum of three Gaussians with random amplitudes and widths.
inline normsol::Profile random_profile(const normsol::GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(0.2, 1.0);
  std::uniform_real_distribution<double> lw(std::log(0.3), std::log(3.0));
  double c[3];
  double w[3];
  for (int k = 0; k < 3; ++k) {
    c[k] = amp(rng);
    w[k] = std::exp(lw(rng));
  }
  return normsol::Profile::sample(g, [&](double r) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += c[k] * std::exp(-r * r / w[k]);
    return s;
  });
}

// Smooth sign-changing direction vanishing at r_max.
inline std::vector<double> random_direction(const normsol::GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> centre(0.0, 4.0);
  double c[4];
  double m[4];
  for (int k = 0; k < 4; ++k) {
    c[k] = coef(rng);
    m[k] = centre(rng);
  }
  std::vector<double> d(g->size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = g->node(i);
    for (int k = 0; k < 4; ++k) d[i] += c[k] * std::exp(-(r - m[k]) * (r - m[k]));
  }
  d.back() = 0.0;
  return d;
}

inline normsol::Profile shifted(const normsol::Profile& u, const std::vector<double>& d,
                                double eps) {
  std::vector<double> v(u.values().begin(), u.values().end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += eps * d[i];
  return normsol::Profile(u.grid_ptr(), std::move(v));
}

}  // namespace testsupport
