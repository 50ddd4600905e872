#pragma once

#include <string>

namespace normsol {

/// Parameters of -Δu - Δ(u²)u + λu = |u|^{p-2}u + τ|u|^{q-2}u with |u|₂² = a.
struct ProblemParams {
  int dim = 3;
  double p = 7.0;
  double q = 3.0;
  double tau = 1.0;
  double mass = 1.0;  ///< prescribed |u|₂² = a
  double gn_p = 0.0;  ///< Gagliardo-Nirenberg constant C_{N,p}
  double gn_q = 0.0;  ///< Gagliardo-Nirenberg constant C_{N,q}
};

/// γ_t = N(t-2)/(2t).
double gamma_exponent(int dim, double t);

/// 2·2* (infinite for N = 1, 2).
double doubled_critical_exponent(int dim);

/// Mass exponent (4N - t(N-2))/(2(N+2)) of the Gagliardo-Nirenberg inequality.
double gn_mass_exponent(int dim, double t);
/// V exponent N(t-2)/(2(N+2)) of the Gagliardo-Nirenberg inequality.
double gn_quasi_exponent(int dim, double t);

/// Powers of t in Ψ(t) = (A/2)t² + B t^{N+2} - (Cp/p) t^{pγp} - (τ Dq/q) t^{qγq}.
struct FiberExponents {
  double gamma_p;
  double gamma_q;
  double quasi;  ///< N + 2
  double lp;     ///< pγp
  double lq;     ///< qγq
};

FiberExponents fiber_exponents(const ProblemParams& params);

/// Checks N, the exponent window 2 < q < 2 + 4/N < 4 + 4/N < p < 2·2*, and tau, a > 0.
/// Throws ConfigError naming the violated hypothesis.
void validate_exponents(const ProblemParams& params);

/// validate_exponents plus positivity of both Gagliardo-Nirenberg constants.
void validate(const ProblemParams& params);

std::string describe(const ProblemParams& params);

}  // namespace normsol
