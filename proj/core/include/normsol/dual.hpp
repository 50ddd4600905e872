#pragma once

#include "normsol/grid.hpp"
#include "normsol/params.hpp"

namespace normsol {

/// v(s) = ∫₀ˢ √(1+2t²) dt = ½ s√(1+2s²) + (√2/4) ln(√2 s + √(1+2s²)); odd in s.
double dual_v(double s);
/// v'(s) = √(1+2s²).
double dual_v_derivative(double s);

/// φ = v⁻¹ by safeguarded Newton; |v(φ(w)) - w| < 1e-12 (1 + |w|).
double dual_phi(double w);
/// φ'(w) = 1/√(1+2φ(w)²).
double dual_phi_derivative(double w);

/// v_i = v(u_i).
Profile dual_profile(const Profile& u);

/// Relative weak residual of the semilinear equation satisfied by v = v(u),
///   -Δv + λ φ(v)φ'(v) = (φ(v)^{p-1} + τ φ(v)^{q-1}) φ'(v),
/// in the H¹ dual norm, relative to ‖-Δv‖_* + ‖λφφ'‖_*. Throws DomainError for a zero profile.
double dual_residual(const Profile& u, double lambda, const ProblemParams& params);

struct ShootResult {
  Profile profile;     ///< u = φ(v)
  double beta;         ///< v(0) of the decaying trajectory
  double cutoff;       ///< radius beyond which the trajectory was set to zero
  int bisections;
};

/// Radial shooting for the fixed-frequency problem at frequency λ > 0: integrates
///   v'' + (N-1)v'/r = λφφ' - (φ^{p-1} + τφ^{q-1})φ'
/// with RK4 from v(0) = β, v'(0) = 0 and bisects β ∈ [beta_lo, beta_hi] between
/// trajectories that cross zero and trajectories that turn back up.
/// Throws BracketError when both ends of the β range behave alike.
ShootResult shoot(double lambda, const ProblemParams& params, const GridPtr& grid,
                  double beta_lo, double beta_hi);

}  // namespace normsol
