#include "normsol/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <string>

#include "normsol/error.hpp"

namespace normsol {

using nlohmann::json;

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json to_json(const ProblemParams& p) {
  return {{"N", p.dim},   {"p", p.p},       {"q", p.q},       {"tau", p.tau},
          {"a", p.mass},  {"C_p", p.gn_p > 0.0 ? json(p.gn_p) : json(nullptr)},
          {"C_q", p.gn_q > 0.0 ? json(p.gn_q) : json(nullptr)}};
}

ProblemParams params_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("params must be an object");
  ProblemParams p;
  p.dim = get_or<int>(j, "N", p.dim);
  p.p = get_or<double>(j, "p", p.p);
  p.q = get_or<double>(j, "q", p.q);
  p.tau = get_or<double>(j, "tau", p.tau);
  p.mass = get_or<double>(j, "a", p.mass);
  p.gn_p = get_or<double>(j, "C_p", 0.0);
  p.gn_q = get_or<double>(j, "C_q", 0.0);
  return p;
}

json to_json(const SolveOptions& o) {
  return {{"max_iters", o.max_iters}, {"step0", o.step0},       {"grad_tol", o.grad_tol},
          {"pohozaev_tol", o.pohozaev_tol}, {"seed", o.seed}, {"restarts", o.restarts}};
}

SolveOptions solve_options_from_json(const json& j, SolveOptions d) {
  if (j.is_null()) return d;
  if (!j.is_object()) throw ConfigError("solver options must be an object");
  d.max_iters = get_or<int>(j, "max_iters", d.max_iters);
  d.step0 = get_or<double>(j, "step0", d.step0);
  d.grad_tol = get_or<double>(j, "grad_tol", d.grad_tol);
  d.pohozaev_tol = get_or<double>(j, "pohozaev_tol", d.pohozaev_tol);
  d.seed = get_or<std::uint64_t>(j, "seed", d.seed);
  d.restarts = get_or<int>(j, "restarts", d.restarts);
  return d;
}

json to_json(const FiberCoefficients& c) {
  return {{"A", c.kinetic}, {"B", c.quasilinear}, {"Cp", c.lp}, {"Dq", c.lq}, {"mass", c.mass}};
}

json to_json(const FiberPortrait& f) {
  return {{"s_u", f.s_u},
          {"t_u", f.t_u},
          {"c_u", f.c_u},
          {"d_u", f.d_u},
          {"psi_at_s", f.psi_at_s},
          {"psi_at_t", f.psi_at_t},
          {"second_deriv_at_s", f.second_deriv_at_s},
          {"second_deriv_at_t", f.second_deriv_at_t},
          {"f_max_scale", f.f_max_scale},
          {"condition", f.condition()}};
}

json to_json(const Feasibility& f) {
  return {{"lhs", nullable(f.lhs)},
          {"rhs", nullable(f.rhs)},
          {"log_lhs", f.log_lhs},
          {"log_rhs", f.log_rhs},
          {"holds", f.holds}};
}

json to_json(const LandscapeReport& r) {
  json j = {{"condition", to_json(r.condition)},
            {"holds", r.holds},
            {"s_bar", r.s_bar},
            {"f_at_s_bar", r.f_at_s_bar},
            {"f_level", r.f_level}};
  if (r.holds) {
    j["s0"] = r.s0;
    j["s1"] = r.s1;
    j["R0"] = r.R0;
    j["R1"] = r.R1;
    j["g_at_s0"] = r.g_at_s0;
    j["g_at_s1"] = r.g_at_s1;
  }
  return j;
}

json to_json(const TheoremReport& r) {
  json checks = json::array();
  for (const TheoremCheck& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", nullable(c.value)},
                      {"threshold", nullable(c.threshold)},
                      {"detail", c.detail}});
  }
  return {{"passed", r.passed()}, {"checks", checks}};
}

json to_json(const Profile& u) {
  const RadialGrid& g = u.grid();
  return {{"grid", {{"N", g.dim()}, {"r_max", g.r_max()}, {"n", g.size()}}},
          {"r", std::vector<double>(g.nodes().begin(), g.nodes().end())},
          {"u", std::vector<double>(u.values().begin(), u.values().end())}};
}

Profile profile_from_json(const json& j) {
  const json& gj = j.contains("grid") ? j.at("grid") : json::object();
  const auto values = require<std::vector<double>>(j, "u");
  const int dim = get_or<int>(gj, "N", 3);
  const double r_max = gj.contains("r_max") ? gj.at("r_max").get<double>()
                                            : require<std::vector<double>>(j, "r").back();
  GridPtr grid = build_grid(dim, r_max, values.size());
  return Profile(grid, values);
}

json to_json(const SolveResult& r) {
  json restarts = json::array();
  for (double e : r.restart_energies) restarts.push_back(nullable(e));
  json trace = json::array();
  for (double e : r.objective_trace) trace.push_back(nullable(e));
  return {{"schema", kSchemaVersion},
          {"kind", std::string(to_string(r.kind))},
          {"energy", nullable(r.energy)},
          {"lambda", nullable(r.lambda)},
          {"pohozaev_res", nullable(r.pohozaev_res)},
          {"el_res", nullable(r.el_res)},
          {"grad_norm", nullable(r.grad_norm)},
          {"mass_err", nullable(r.mass_err)},
          {"tag", std::string(to_string(r.tag))},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"fiber_condition", nullable(r.fiber_condition)},
          {"barrier", nullable(r.barrier)},
          {"restart_energies", restarts},
          {"objective_trace", trace},
          {"diagnostics", r.diagnostics},
          {"coefficients", to_json(r.coeffs)},
          {"profile", to_json(r.profile)}};
}

SolveResult solve_result_from_json(const json& j) {
  try {
    SolveResult r;
    const std::string kind = require<std::string>(j, "kind");
    if (kind == "ground") {
      r.kind = SolutionKind::Ground;
    } else if (kind == "mountain_pass") {
      r.kind = SolutionKind::MountainPass;
    } else {
      throw ConfigError("unknown result kind '" + kind + "'");
    }
    r.profile = profile_from_json(require<json>(j, "profile"));
    const json& c = require<json>(j, "coefficients");
    r.coeffs = {require<double>(c, "A"), require<double>(c, "B"), require<double>(c, "Cp"),
                require<double>(c, "Dq"), require<double>(c, "mass")};
    const double nan = std::nan("");
    r.energy = get_or<double>(j, "energy", nan);
    r.lambda = get_or<double>(j, "lambda", nan);
    r.pohozaev_res = get_or<double>(j, "pohozaev_res", nan);
    r.el_res = get_or<double>(j, "el_res", nan);
    r.grad_norm = get_or<double>(j, "grad_norm", nan);
    r.mass_err = get_or<double>(j, "mass_err", nan);
    r.tag = manifold_tag_from_string(require<std::string>(j, "tag"));
    r.iterations = get_or<int>(j, "iterations", 0);
    r.converged = get_or<bool>(j, "converged", false);
    r.fiber_condition = get_or<double>(j, "fiber_condition", nan);
    r.barrier = get_or<double>(j, "barrier", 0.0);
    if (j.contains("restart_energies")) {
      for (const json& e : j.at("restart_energies")) {
        r.restart_energies.push_back(e.is_null() ? nan : e.get<double>());
      }
    }
    if (j.contains("objective_trace")) {
      for (const json& e : j.at("objective_trace")) {
        r.objective_trace.push_back(e.is_null() ? nan : e.get<double>());
      }
    }
    r.diagnostics = get_or<std::string>(j, "diagnostics", "");
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed result record: ") + e.what());
  }
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::row(std::initializer_list<double> values) {
  row(std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != header_.size()) throw ShapeError("csv: row width differs from header");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += format_double(values[i]);
  }
  body_ += "\r\n";
}

std::string CsvWriter::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += header_[i];
  }
  out += "\r\n";
  return out + body_;
}

void CsvWriter::save(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << str();
  if (!f) throw Error("failed writing " + path.string());
}

}  // namespace normsol
