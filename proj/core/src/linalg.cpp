#include "normsol/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "normsol/error.hpp"

namespace normsol {

std::vector<double> SymTridiagonal::apply(std::span<const double> x) const {
  const std::size_t n = size();
  if (x.size() != n) throw ShapeError("SymTridiagonal::apply: size mismatch");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag_[i] * x[i];
    if (i > 0) s += off_[i - 1] * x[i - 1];
    if (i + 1 < n) s += off_[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

std::vector<double> SymTridiagonal::solve(std::span<const double> b) const {
  const std::size_t n = size();
  if (b.size() != n) throw ShapeError("SymTridiagonal::solve: size mismatch");
  std::vector<double> c(n, 0.0);
  std::vector<double> x(b.begin(), b.end());
  double denom = diag_[0];
  if (denom == 0.0) throw NumericalError("SymTridiagonal::solve: zero pivot at row 0");
  if (n > 1) c[0] = off_[0] / denom;
  x[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag_[i] - off_[i - 1] * c[i - 1];
    if (denom == 0.0 || !std::isfinite(denom)) {
      throw NumericalError("SymTridiagonal::solve: zero pivot at row " + std::to_string(i));
    }
    if (i + 1 < n) c[i] = off_[i] / denom;
    x[i] = (x[i] - off_[i - 1] * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

SymTridiagonal weighted_stiffness(const RadialGrid& grid, std::span<const double> shell_coeff,
                                  double shift) {
  const std::size_t n = grid.size();
  if (shell_coeff.size() + 1 != n) throw ShapeError("weighted_stiffness: one coefficient per shell");
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  const auto W = grid.shell_weights();
  const auto w = grid.weights();
  SymTridiagonal m(n);
  auto& d = m.diag();
  auto& o = m.off();
  for (std::size_t i = 0; i < n; ++i) d[i] = shift * w[i];
  for (std::size_t e = 0; e + 1 < n; ++e) {
    const double k = W[e] * shell_coeff[e] * inv_h2;
    d[e] += k;
    d[e + 1] += k;
    o[e] = -k;
  }
  d[n - 1] = 1.0;
  o[n - 2] = 0.0;
  return m;
}

SymTridiagonal h1_gram(const RadialGrid& grid) {
  const std::vector<double> ones(grid.size() - 1, 1.0);
  return weighted_stiffness(grid, ones, 1.0);
}

double dual_norm(const SymTridiagonal& gram, std::span<const double> dual) {
  std::vector<double> d(dual.begin(), dual.end());
  d.back() = 0.0;
  const auto x = gram.solve(d);
  return std::sqrt(std::max(0.0, dot(d, x)));
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double weighted_dot(const RadialGrid& grid, std::span<const double> a,
                    std::span<const double> b) {
  const auto w = grid.weights();
  if (a.size() != w.size() || b.size() != w.size()) throw ShapeError("weighted_dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

}  // namespace normsol
