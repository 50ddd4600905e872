#pragma once

#include <string_view>

#include "normsol/functionals.hpp"
#include "normsol/grid.hpp"
#include "normsol/params.hpp"

namespace normsol {

/// Ψ(t), Ψ'(t), Ψ''(t) of the fiber map t ↦ I(t⋆u).
struct FiberValue {
  double value;
  double first;
  double second;
};

/// Evaluates the fiber map from coefficients alone. Throws DomainError for t <= 0.
FiberValue psi(const FiberCoefficients& c, const ProblemParams& params, double t);

/// Critical points and zeros of the fiber map: local minimum s_u, global maximum t_u and
/// zeros c_u < d_u with 0 < s_u < c_u < t_u < d_u.
struct FiberPortrait {
  double s_u = 0.0;
  double t_u = 0.0;
  double c_u = 0.0;
  double d_u = 0.0;
  double psi_at_s = 0.0;
  double psi_at_t = 0.0;
  double second_deriv_at_s = 0.0;
  double second_deriv_at_t = 0.0;
  double f_max_scale = 0.0;  ///< maximizer of the auxiliary f(t)

  /// (t_u - s_u)/t_u; tends to 0 as the two critical points coalesce.
  double condition() const { return (t_u - s_u) / t_u; }
};

/// Scale window searched by the fiber root finders.
inline constexpr double kFiberScaleMin = 1e-8;
inline constexpr double kFiberScaleMax = 1e8;

/// Full portrait. Ψ'(t) = 0 is rewritten as f(t) = τγq Dq with the unimodal
///   f(t) = A t^{2-qγq} + (N+2)B t^{N+2-qγq} - γp Cp t^{pγp-qγq};
/// its maximizer splits the two roots, which are bracketed and polished separately.
/// Throws NoTwoCriticalPoints when max f <= τγq Dq, NumericalError when a bracket leaves
/// [1e-8, 1e8] or the portrait has no positive maximum.
FiberPortrait fiber_portrait(const FiberCoefficients& c, const ProblemParams& params);

/// Only the two critical points; does not require Ψ(t_u) > 0.
struct FiberCriticalPoints {
  double s_u;
  double t_u;
};
FiberCriticalPoints fiber_critical_points(const FiberCoefficients& c,
                                          const ProblemParams& params);

enum class ManifoldTag { Plus, Zero, Minus, NotOnP };

std::string_view to_string(ManifoldTag tag);
ManifoldTag manifold_tag_from_string(std::string_view name);

/// Band used to report membership of the degenerate set 𝒫⁰.
inline constexpr double kDegenerateBandTol = 1e-8;

/// Membership of u (at t = 1) in 𝒫⁺, 𝒫⁰, 𝒫⁻ with tolerance tol·(A + (N+2)B).
ManifoldTag classify(const FiberCoefficients& c, const ProblemParams& params, double tol);

/// s_u ⋆ u resampled on the grid of u.
Profile project_plus(const Profile& u, const ProblemParams& params);
/// t_u ⋆ u resampled on the grid of u.
Profile project_minus(const Profile& u, const ProblemParams& params);

}  // namespace normsol
