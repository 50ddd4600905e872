#pragma once

// Symmetric tridiagonal operators on grid vectors. The last node carries the Dirichlet
// condition; its row is the identity and its entries of right-hand sides are ignored.

#include <cstddef>
#include <span>
#include <vector>

#include "normsol/grid.hpp"

namespace normsol {

class SymTridiagonal {
 public:
  explicit SymTridiagonal(std::size_t n) : diag_(n, 0.0), off_(n > 0 ? n - 1 : 0, 0.0) {}

  std::size_t size() const { return diag_.size(); }
  std::vector<double>& diag() { return diag_; }
  std::vector<double>& off() { return off_; }
  const std::vector<double>& diag() const { return diag_; }
  const std::vector<double>& off() const { return off_; }

  std::vector<double> apply(std::span<const double> x) const;
  /// Thomas algorithm; throws NumericalError on a vanishing pivot.
  std::vector<double> solve(std::span<const double> b) const;

 private:
  std::vector<double> diag_;
  std::vector<double> off_;
};

/// Σ_e W_e k_e ((x_{e+1}-x_e)/h)² as a quadratic form, plus shift·Σ_i w_i x_i², with the
/// Dirichlet row made the identity. `shell_coeff` has one entry per shell (n - 1).
SymTridiagonal weighted_stiffness(const RadialGrid& grid, std::span<const double> shell_coeff,
                                  double shift);

/// Gram matrix of the discrete H¹ inner product ∫ u'v' + ∫ uv.
SymTridiagonal h1_gram(const RadialGrid& grid);

/// sqrt(dᵀ G⁻¹ d) for a dual vector d (Dirichlet entry ignored).
double dual_norm(const SymTridiagonal& gram, std::span<const double> dual);

/// Σ_i a_i b_i.
double dot(std::span<const double> a, std::span<const double> b);

/// Σ_i w_i a_i b_i, the discrete weighted L² inner product.
double weighted_dot(const RadialGrid& grid, std::span<const double> a,
                    std::span<const double> b);

}  // namespace normsol
