#include "normsol/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "normsol/error.hpp"

namespace normsol {

double gamma_exponent(int dim, double t) { return dim * (t - 2.0) / (2.0 * t); }

double doubled_critical_exponent(int dim) {
  if (dim <= 2) return std::numeric_limits<double>::infinity();
  return 4.0 * dim / (dim - 2.0);
}

double gn_mass_exponent(int dim, double t) {
  return (4.0 * dim - t * (dim - 2.0)) / (2.0 * (dim + 2.0));
}

double gn_quasi_exponent(int dim, double t) {
  return dim * (t - 2.0) / (2.0 * (dim + 2.0));
}

FiberExponents fiber_exponents(const ProblemParams& params) {
  const int n = params.dim;
  FiberExponents e{};
  e.gamma_p = gamma_exponent(n, params.p);
  e.gamma_q = gamma_exponent(n, params.q);
  e.quasi = n + 2.0;
  e.lp = params.p * e.gamma_p;
  e.lq = params.q * e.gamma_q;
  return e;
}

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

void validate_exponents(const ProblemParams& params) {
  const int n = params.dim;
  if (n < 1 || n > 4) {
    throw ConfigError("dimension N = " + std::to_string(n) + " violates 1 <= N <= 4");
  }
  const double q_hi = 2.0 + 4.0 / n;
  const double p_lo = 4.0 + 4.0 / n;
  const double p_hi = doubled_critical_exponent(n);
  if (!(params.q > 2.0)) {
    throw ConfigError("exponent q = " + num(params.q) + " violates 2 < q");
  }
  if (!(params.q < q_hi)) {
    throw ConfigError("exponent q = " + num(params.q) + " violates q < 2 + 4/N = " +
                      num(q_hi) + " (mass-subcritical term)");
  }
  if (!(params.p > p_lo)) {
    throw ConfigError("exponent p = " + num(params.p) + " violates 4 + 4/N = " + num(p_lo) +
                      " < p (mass-supercritical term)");
  }
  if (!(params.p < p_hi)) {
    throw ConfigError("exponent p = " + num(params.p) + " violates p < 2*2^* = " +
                      num(p_hi));
  }
  if (!(params.tau > 0.0) || !std::isfinite(params.tau)) {
    throw ConfigError("coupling tau = " + num(params.tau) + " must be positive");
  }
  if (!(params.mass > 0.0) || !std::isfinite(params.mass)) {
    throw ConfigError("mass a = " + num(params.mass) + " must be positive");
  }
}

void validate(const ProblemParams& params) {
  validate_exponents(params);
  if (!(params.gn_p > 0.0) || !std::isfinite(params.gn_p)) {
    throw ConfigError("Gagliardo-Nirenberg constant C_{N,p} = " + num(params.gn_p) +
                      " must be positive");
  }
  if (!(params.gn_q > 0.0) || !std::isfinite(params.gn_q)) {
    throw ConfigError("Gagliardo-Nirenberg constant C_{N,q} = " + num(params.gn_q) +
                      " must be positive");
  }
}

std::string describe(const ProblemParams& params) {
  std::ostringstream os;
  os.precision(10);
  os << "N=" << params.dim << " p=" << params.p << " q=" << params.q
     << " tau=" << params.tau << " a=" << params.mass << " C_Np=" << params.gn_p
     << " C_Nq=" << params.gn_q;
  return os.str();
}

}  // namespace normsol
