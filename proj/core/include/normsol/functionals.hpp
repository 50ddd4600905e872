#pragma once

#include <span>
#include <vector>

#include "normsol/grid.hpp"
#include "normsol/params.hpp"

namespace normsol {

/// The scalars that determine I, P and the whole fiber map of a profile:
/// A = |∇u|₂², B = V(u) = ∫u²|∇u|², Cp = |u|_p^p, Dq = |u|_q^q and |u|₂².
///
/// V follows the energy literally (∫u²|∇u|², not ½∫|∇(u²)|² = 2V).
struct FiberCoefficients {
  double kinetic = 0.0;
  double quasilinear = 0.0;
  double lp = 0.0;
  double lq = 0.0;
  double mass = 0.0;
};

/// Discrete A, B, Cp, Dq, mass. Gradient terms use the staggered differences
/// (u_{i+1}-u_i)/h weighted by shell measures, with u² averaged over the shell endpoints;
/// nodal terms use the node weights.
FiberCoefficients coefficients(const Profile& u, const ProblemParams& params);

/// Coefficients of t⋆u computed from those of u: (t²A, t^{N+2}B, t^{pγp}Cp, t^{qγq}Dq, mass).
FiberCoefficients dilate(const FiberCoefficients& c, const ProblemParams& params, double t);

/// Coefficients of c·u: (c²A, c⁴B, c^p Cp, c^q Dq, c² mass).
FiberCoefficients amplify(const FiberCoefficients& c, const ProblemParams& params, double amp);

/// I = A/2 + B - Cp/p - τ Dq/q.
double energy(const FiberCoefficients& c, const ProblemParams& params);

/// P = A + (N+2)B - γp Cp - τ γq Dq.
double pohozaev(const FiberCoefficients& c, const ProblemParams& params);

/// Riesz representatives, in the weighted L² inner product Σ w_i f_i g_i, of the
/// derivatives of A, B, Cp and Dq. The Dirichlet entry is zero.
struct TermGradients {
  std::vector<double> kinetic;
  std::vector<double> quasilinear;
  std::vector<double> lp;
  std::vector<double> lq;

  /// wA·grad_A + wB·grad_B + wp·grad_Cp + wq·grad_Dq.
  std::vector<double> combine(double wA, double wB, double wp, double wq) const;
  /// Gradient of I: grad_A/2 + grad_B - grad_Cp/p - τ grad_Dq/q.
  std::vector<double> energy(const ProblemParams& params) const;
};

TermGradients energy_gradient(const Profile& u, const ProblemParams& params);

/// Converts a Riesz representative into the dual vector w ⊙ g.
std::vector<double> to_dual(const RadialGrid& grid, std::span<const double> riesz);

/// Relative weak Euler-Lagrange residual
///   ‖I'(u) + λu‖_* / (‖(A/2)'(u)‖_* + ‖B'(u)‖_* + |λ| ‖u‖_*)
/// measured in the dual norm of the discrete H¹ inner product. The reference is a sum of
/// term norms so that it cannot cancel. Throws DomainError for a zero profile.
double el_residual(const Profile& u, double lambda, const ProblemParams& params);

/// Quotient ‖r‖_*/‖q‖_* of two dual vectors in the H¹ dual norm of `grid`.
double weak_residual_quotient(const RadialGrid& grid, std::span<const double> residual_dual,
                              std::span<const double> reference_dual);

/// λ = (Cp + τDq - A - 4B)/mass, i.e. the weak equation tested against u itself.
/// Throws DomainError for mass = 0.
double lagrange_multiplier(const FiberCoefficients& c, const ProblemParams& params);

/// λ from a least-squares fit of the strong form
///   -(1 + 2u²)(u'' + (N-1)u'/r) - 2u u'² + λu = |u|^{p-2}u + τ|u|^{q-2}u
/// over the interior nodes with central differences. Independent of the weak form.
double strong_form_multiplier(const Profile& u, const ProblemParams& params);

}  // namespace normsol
