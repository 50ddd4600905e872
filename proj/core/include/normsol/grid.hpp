#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace normsol {

/// Surface measure of the unit sphere in R^N (2, 2pi, 4pi, 2pi^2 for N = 1..4).
double sphere_measure(int dim);

/// Uniform radial grid r_i = i*h on [0, r_max] for radial functions on R^N, 1 <= N <= 4.
///
/// Node weights are the measures of the radial cells [r_i - h/2, r_i + h/2] clipped to
/// [0, r_max], so sum(w) is exactly the volume of the ball of radius r_max and every weight
/// is strictly positive (including the origin for N >= 2). Shell weights are the measures
/// of [r_i, r_{i+1}] and carry the gradient terms, which are evaluated on the staggered
/// mid-points. For N = 1 the node weights reduce to the trapezoidal rule 2h{1/2,1,...,1/2}.
class RadialGrid {
 public:
  RadialGrid(int dim, double r_max, std::size_t n);

  int dim() const { return dim_; }
  double r_max() const { return r_max_; }
  std::size_t size() const { return nodes_.size(); }
  double spacing() const { return h_; }
  double node(std::size_t i) const { return nodes_[i]; }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  /// n - 1 entries; entry i is the measure of the shell between nodes i and i + 1.
  std::span<const double> shell_weights() const { return shell_weights_; }

  double ball_volume() const;

 private:
  int dim_;
  double r_max_;
  double h_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> shell_weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

inline constexpr std::size_t kMinGridNodes = 16;

/// Throws ConfigError for N outside {1,2,3,4}, r_max <= 0 or n < 16.
GridPtr build_grid(int dim, double r_max, std::size_t n);

/// Grid samples of a radial function. The last sample is the homogeneous Dirichlet value
/// u(r_max) = 0 and is forced to zero on construction.
class Profile {
 public:
  /// Empty profile without a grid; only useful as a placeholder.
  Profile() = default;
  Profile(GridPtr grid, std::vector<double> values);

  /// Samples f(r_i) on the grid.
  static Profile sample(GridPtr grid, const std::function<double(double)>& f);

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  Profile scaled(double c) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// sum_i w_i f_i. Throws ShapeError if f does not have one entry per node.
double quadrature(const RadialGrid& grid, std::span<const double> f);

/// du/dr at the nodes: central differences inside, second-order one-sided stencils at
/// r = 0 and r = r_max. For radial u this is |grad u| up to sign.
std::vector<double> radial_derivative(const RadialGrid& grid, std::span<const double> u);
std::vector<double> radial_derivative(const Profile& u);

/// Mass-preserving dilation v(r) = t^{N/2} u(t r), evaluated by monotone piecewise-cubic
/// (Fritsch-Carlson) interpolation of the even extension of u; zero where t r > r_max.
/// Throws DomainError for t <= 0.
Profile resample_dilation(const Profile& u, double t);

}  // namespace normsol
