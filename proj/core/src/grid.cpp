#include "normsol/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "normsol/error.hpp"

namespace normsol {

double sphere_measure(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    case 4: return 2.0 * std::numbers::pi * std::numbers::pi;
    default: throw ConfigError("dimension N = " + std::to_string(dim) + " not in {1,2,3,4}");
  }
}

namespace {

// Measure of the radial shell lo <= |x| <= hi.
double shell_measure(int dim, double lo, double hi) {
  return sphere_measure(dim) * (std::pow(hi, dim) - std::pow(lo, dim)) / dim;
}

}  // namespace

RadialGrid::RadialGrid(int dim, double r_max, std::size_t n) : dim_(dim), r_max_(r_max) {
  if (dim < 1 || dim > 4) {
    throw ConfigError("dimension N = " + std::to_string(dim) + " not in {1,2,3,4}");
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw ConfigError("r_max must be positive and finite, got " + std::to_string(r_max));
  }
  if (n < kMinGridNodes) {
    throw ConfigError("grid needs at least " + std::to_string(kMinGridNodes) +
                      " nodes, got " + std::to_string(n));
  }
  h_ = r_max / static_cast<double>(n - 1);
  nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) nodes_[i] = h_ * static_cast<double>(i);
  nodes_.back() = r_max;

  weights_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = std::max(0.0, nodes_[i] - 0.5 * h_);
    const double hi = std::min(r_max, nodes_[i] + 0.5 * h_);
    weights_[i] = shell_measure(dim, lo, hi);
  }
  shell_weights_.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    shell_weights_[i] = shell_measure(dim, nodes_[i], nodes_[i + 1]);
  }
}

double RadialGrid::ball_volume() const { return shell_measure(dim_, 0.0, r_max_); }

GridPtr build_grid(int dim, double r_max, std::size_t n) {
  return std::make_shared<const RadialGrid>(dim, r_max, n);
}

Profile::Profile(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw ConfigError("profile without grid");
  if (values_.size() != grid_->size()) {
    throw ShapeError("profile has " + std::to_string(values_.size()) + " samples for " +
                     std::to_string(grid_->size()) + " nodes");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("profile contains non-finite samples");
  }
  values_.back() = 0.0;
}

Profile Profile::sample(GridPtr grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->node(i));
  return Profile(std::move(grid), std::move(v));
}

Profile Profile::scaled(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  return Profile(grid_, std::move(v));
}

double quadrature(const RadialGrid& grid, std::span<const double> f) {
  if (f.size() != grid.size()) {
    throw ShapeError("quadrature: " + std::to_string(f.size()) + " samples for " +
                     std::to_string(grid.size()) + " nodes");
  }
  const auto w = grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
  return s;
}

std::vector<double> radial_derivative(const RadialGrid& grid, std::span<const double> u) {
  const std::size_t n = grid.size();
  if (u.size() != n) {
    throw ShapeError("radial_derivative: " + std::to_string(u.size()) + " samples for " +
                     std::to_string(n) + " nodes");
  }
  const double h = grid.spacing();
  std::vector<double> d(n);
  d[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
  return d;
}

std::vector<double> radial_derivative(const Profile& u) {
  return radial_derivative(u.grid(), u.values());
}

namespace {

// Fritsch-Carlson derivative estimate from the two adjacent secants (harmonic mean when
// they share a sign, zero otherwise).
double monotone_slope(double left, double right) {
  if (left * right <= 0.0) return 0.0;
  return 2.0 * left * right / (left + right);
}

}  // namespace

Profile resample_dilation(const Profile& u, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("resample_dilation: scale must be positive, got " + std::to_string(t));
  }
  if (t == 1.0) return u;
  const RadialGrid& g = u.grid();
  const std::size_t n = g.size();
  const double h = g.spacing();
  const auto v = u.values();

  // Node slopes; u is even in r, so the secant to the left of r = 0 mirrors the first one.
  std::vector<double> slope(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = (i == 0) ? -(v[1] - v[0]) / h : (v[i] - v[i - 1]) / h;
    const double right = (i + 1 == n) ? 0.0 : (v[i + 1] - v[i]) / h;
    if (i + 1 == n) {
      // one-sided three-point estimate, limited to keep monotonicity
      double s = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
      if (s * left <= 0.0) s = 0.0;
      if (std::abs(s) > 3.0 * std::abs(left)) s = 3.0 * left;
      slope[i] = s;
    } else {
      slope[i] = monotone_slope(left, right);
    }
  }

  const double amp = std::pow(t, 0.5 * g.dim());
  const double r_max = g.r_max();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = t * g.node(i);
    if (x > r_max) continue;
    std::size_t k = std::min(static_cast<std::size_t>(x / h), n - 2);
    const double s = (x - g.node(k)) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    out[i] = amp * (h00 * v[k] + h10 * h * slope[k] + h01 * v[k + 1] + h11 * h * slope[k + 1]);
  }
  return Profile(u.grid_ptr(), std::move(out));
}

}  // namespace normsol
