#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "normsol/functionals.hpp"
#include "normsol/grid.hpp"
#include "normsol/params.hpp"

namespace normsol {

/// g(s) = s - (C_p/p) a^{αp} s^{pγp/(N+2)} - (τ C_q/q) a^{αq} s^{qγq/(N+2)},
/// αt = (4N - t(N-2))/(2(N+2)). I(u) ≥ g(V(u)) on the mass ball.
double g_eval(double s, const ProblemParams& params);

/// Two sides of the feasibility inequality on (a, τ); computed in log space.
struct Feasibility {
  double log_lhs = 0.0;
  double log_rhs = 0.0;
  double lhs = 0.0;  ///< exp(log_lhs), may overflow to inf
  double rhs = 0.0;
  bool holds = false;
};

Feasibility feasibility_condition(const ProblemParams& params);

struct LandscapeReport {
  Feasibility condition;
  bool holds = false;
  double s_bar = 0.0;      ///< maximizer of f(s) = s^{1-qγq/(N+2)} - (C_p/p)a^{αp}s^{(pγp-qγq)/(N+2)}
  double f_at_s_bar = 0.0;
  double f_level = 0.0;    ///< (τ C_q/q) a^{αq}; g(s) > 0 iff f(s) > f_level
  double s0 = 0.0;         ///< local minimum of g
  double s1 = 0.0;         ///< global maximum of g
  double R0 = 0.0;
  double R1 = 0.0;
  double g_at_s0 = 0.0;
  double g_at_s1 = 0.0;
};

/// Closed-form s̄ and f(s̄); critical points of g through the unimodal auxiliary
///   φ(s) = s^{1-qγq/(N+2)} - (γp C_p/(N+2)) a^{αp} s^{(pγp-qγq)/(N+2)},
/// whose two crossings of (τγq C_q/(N+2)) a^{αq} are s0 < s1; zeros by bisection.
/// When the condition fails the report carries holds = false and no roots.
LandscapeReport landscape_report(const ProblemParams& params);

/// Scale-invariant Gagliardo-Nirenberg quotient
///   Q(u) = |u|_t^t / (mass^{(4N-t(N-2))/(2(N+2))} V^{N(t-2)/(2(N+2))}).
double gn_quotient(int dim, double t, double lt, double mass, double quasilinear);
double gn_quotient(const Profile& u, double t);

struct GnEstimate {
  double value = 0.0;           ///< best quotient found: a lower bound on C_{N,t}
  std::vector<double> seed_values;  ///< best quotient reached from each seed
  std::optional<Profile> best;
};

/// Maximizes Q by preconditioned gradient ascent from a Gaussian seed plus `trials`
/// random smooth seeds. Seeds with V = 0 are skipped; throws NumericalError when every
/// seed is degenerate. The result never exceeds the sharp constant.
GnEstimate estimate_gn_constant(int dim, double t, const GridPtr& grid, int trials,
                                std::uint64_t seed = 1, int max_iters = 400);

struct ScanRange {
  double lo;
  double hi;
};

struct ScanRow {
  double a;
  double tau;
  double lhs;
  double rhs;
  double log_lhs;
  double log_rhs;
  bool holds;
};

/// resolution × resolution log-spaced evaluation of the feasibility condition; rows are
/// ordered with a varying slowest. Rows are evaluated on up to `jobs` threads.
std::vector<ScanRow> region_scan(const ProblemParams& tmpl, ScanRange a, ScanRange tau,
                                 int resolution, int jobs = 1);

/// d(log τ)/d(log a) along the boundary lhs = rhs: minus the ratio of the a-exponent to
/// the τ-exponent of lhs.
double feasibility_boundary_slope(const ProblemParams& params);

}  // namespace normsol
