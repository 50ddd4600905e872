#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "normsol/fiber.hpp"
#include "normsol/functionals.hpp"
#include "normsol/grid.hpp"
#include "normsol/params.hpp"

namespace normsol {

struct SolveOptions {
  int max_iters = 5000;
  double step0 = 1.0;
  double grad_tol = 1e-5;       ///< relative projected-gradient tolerance
  double pohozaev_tol = 1e-6;   ///< relative |P(u)|/(A + (N+2)B)
  std::uint64_t seed = 1;
  int restarts = 0;             ///< random-perturbation restarts besides the plain start
};

/// Defaults used by the mountain-pass solver (looser gradient tolerance).
SolveOptions mountain_pass_defaults();

enum class SolutionKind { Ground, MountainPass };

struct SolveResult {
  SolutionKind kind = SolutionKind::Ground;
  Profile profile;
  FiberCoefficients coeffs;
  double energy = 0.0;        ///< M⁺ or M⁻
  double lambda = 0.0;        ///< Lagrange multiplier
  double pohozaev_res = 0.0;  ///< |P(u)|/(A + (N+2)B)
  double el_res = 0.0;        ///< relative weak Euler-Lagrange residual
  double grad_norm = 0.0;     ///< last relative projected-gradient norm of the descent
  double mass_err = 0.0;      ///< |mass - a|
  ManifoldTag tag = ManifoldTag::NotOnP;
  int iterations = 0;
  bool converged = false;
  double fiber_condition = 0.0;  ///< (t_u - s_u)/t_u of the returned profile
  double barrier = 0.0;          ///< R0 for the ground solve, 0 otherwise
  std::vector<double> restart_energies;
  /// Objective (I, or E⁻ for the mountain pass) at the start of the selected descent and
  /// after each accepted step. Mountain-pass entries also follow each recentering
  /// resample, which is not a descent step.
  std::vector<double> objective_trace;
  std::string diagnostics;
};

/// Local minimizer of I on the mass sphere inside {V < R0}: preconditioned projected
/// descent with backtracking and step rejection at the barrier, started from a Gaussian
/// (or `initial`) pulled onto 𝒫⁺ by project_plus. After the descent the profile is
/// projected onto 𝒫⁺ once more so that P vanishes up to interpolation error.
/// Throws FeasibilityError when the condition on (a, τ) fails.
SolveResult solve_ground(const ProblemParams& params, const GridPtr& grid,
                         const SolveOptions& opts = {},
                         const std::optional<Profile>& initial = std::nullopt);

/// E⁻(u) = max_t I(t⋆u) = I(t_u⋆u) and its L²-Riesz gradient
///   (t²/2) grad_A + t^{N+2} grad_B - (t^{pγp}/p) grad_Cp - (τ t^{qγq}/q) grad_Dq at t = t_u.
struct EnvelopeGradient {
  std::vector<double> gradient;
  double t_u;
  double value;
};

EnvelopeGradient envelope_gradient(const Profile& u, const ProblemParams& params);
double envelope_energy(const Profile& u, const ProblemParams& params);

/// Minimizes E⁻ over the mass sphere, then materializes u⁻ = t_u ⋆ u.
SolveResult solve_mountain_pass(const ProblemParams& params, const GridPtr& grid,
                                const SolveOptions& opts = mountain_pass_defaults(),
                                const std::optional<Profile>& initial = std::nullopt);

struct TheoremCheck {
  std::string name;
  bool passed;
  double value;
  double threshold;
  std::string detail;
};

struct TheoremReport {
  std::vector<TheoremCheck> checks;
  bool passed() const;
};

struct VerifyTolerances {
  double mass_rel = 1e-10;
  double pohozaev = 1e-6;
  double el_ground = 1e-4;
  double el_mp = 1e-3;
  double lambda_fit_rel = 1e-3;
  double monotone_slack = 1e-12;  ///< relative to max|u|
};

/// Structured pass/fail report on the two solutions.
TheoremReport verify_theorem(const ProblemParams& params, const SolveResult& ground,
                             const SolveResult& mp, const VerifyTolerances& tol = {});

/// Number of nodes with u_{i+1} > u_i + slack·max|u|.
int monotonicity_violations(const Profile& u, double slack);

std::string_view to_string(SolutionKind kind);

}  // namespace normsol
