#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "normsol/dual.hpp"
#include "normsol/error.hpp"
#include "normsol/fiber.hpp"
#include "normsol/io.hpp"
#include "normsol/landscape.hpp"
#include "normsol/solvers.hpp"

namespace normsol::cli {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {
      "check", "landscape", "fiber", "gn", "solve-ground", "solve-mp",
      "verify", "scan", "dual-check", "shoot-sweep"};
  return names;
}

fs::path resolve_output_dir(const json& config, const fs::path& out_override) {
  if (!out_override.empty()) return out_override;
  if (const char* env = std::getenv("NORMSOL_OUT"); env && *env) return fs::path(env);
  if (config.contains("output_dir") && config.at("output_dir").is_string()) {
    return fs::path(config.at("output_dir").get<std::string>());
  }
  return fs::path("normsol_out");
}

namespace {

struct GnSettings {
  double r_max = 20.0;
  std::size_t n = 801;
  int trials = 4;
  std::uint64_t seed = 1;
  int max_iters = 400;
};

struct Context {
  std::string command;
  json input;
  json resolved;
  ProblemParams params;
  GridPtr grid;
  SolveOptions ground_opts;
  SolveOptions mp_opts;
  GnSettings gn;
  bool estimated = false;
  fs::path out;
  int jobs = 1;
};

json section(const json& cfg, const char* key) {
  if (!cfg.contains(key) || cfg.at(key).is_null()) return json::object();
  if (!cfg.at(key).is_object()) throw ConfigError(std::string("section '") + key + "' must be an object");
  return cfg.at(key);
}

template <class T>
T opt(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

std::pair<double, double> range(const json& j, const char* key, std::pair<double, double> fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  const json& r = j.at(key);
  if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
    throw ConfigError(std::string("field '") + key + "' must be [lo, hi]");
  }
  return {r[0].get<double>(), r[1].get<double>()};
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read " + path.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

bool needs_constants(const std::string& cmd) { return cmd != "fiber" && cmd != "gn"; }

Context resolve(const Invocation& inv, const json& cfg) {
  Context ctx;
  ctx.command = inv.command;
  ctx.input = cfg;
  ctx.jobs = std::max(1, inv.jobs);
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  ctx.params = params_from_json(section(cfg, "params"));
  validate_exponents(ctx.params);

  const json g = section(cfg, "grid");
  if (g.contains("N") && opt<int>(g, "N", ctx.params.dim) != ctx.params.dim) {
    throw ConfigError("grid N differs from params N");
  }
  const double r_max = opt<double>(g, "r_max", 20.0);
  const auto n = opt<std::size_t>(g, "n", 2000);
  ctx.grid = build_grid(ctx.params.dim, r_max, n);

  ctx.ground_opts = solve_options_from_json(section(cfg, "solver"), SolveOptions{});
  ctx.mp_opts = solve_options_from_json(section(cfg, "solver_mp"), mountain_pass_defaults());

  const json gj = section(cfg, "gn");
  ctx.gn.r_max = opt<double>(gj, "r_max", ctx.gn.r_max);
  ctx.gn.n = opt<std::size_t>(gj, "n", ctx.gn.n);
  ctx.gn.trials = opt<int>(gj, "trials", ctx.gn.trials);
  ctx.gn.seed = opt<std::uint64_t>(gj, "seed", ctx.gn.seed);
  ctx.gn.max_iters = opt<int>(gj, "max_iters", ctx.gn.max_iters);

  const bool missing = !(ctx.params.gn_p > 0.0) || !(ctx.params.gn_q > 0.0);
  if (missing && needs_constants(inv.command)) {
    const GridPtr gg = build_grid(ctx.params.dim, ctx.gn.r_max, ctx.gn.n);
    if (!(ctx.params.gn_p > 0.0)) {
      ctx.params.gn_p = estimate_gn_constant(ctx.params.dim, ctx.params.p, gg, ctx.gn.trials,
                                             ctx.gn.seed, ctx.gn.max_iters).value;
    }
    if (!(ctx.params.gn_q > 0.0)) {
      ctx.params.gn_q = estimate_gn_constant(ctx.params.dim, ctx.params.q, gg, ctx.gn.trials,
                                             ctx.gn.seed, ctx.gn.max_iters).value;
    }
    ctx.estimated = true;
  }
  if (needs_constants(inv.command)) validate(ctx.params);

  ctx.resolved = cfg;
  ctx.resolved["params"] = to_json(ctx.params);
  ctx.resolved["params"]["C_source"] = ctx.estimated ? "estimated" : "config";
  ctx.resolved["grid"] = {{"N", ctx.params.dim}, {"r_max", r_max}, {"n", n}};
  ctx.resolved["solver"] = to_json(ctx.ground_opts);
  ctx.resolved["solver_mp"] = to_json(ctx.mp_opts);
  ctx.resolved["gn"] = {{"r_max", ctx.gn.r_max}, {"n", ctx.gn.n}, {"trials", ctx.gn.trials},
                        {"seed", ctx.gn.seed}, {"max_iters", ctx.gn.max_iters}};
  return ctx;
}

json record(const Context& ctx, json result) {
  return {{"schema", kSchemaVersion},
          {"command", ctx.command},
          {"timestamp", timestamp()},
          {"config", ctx.resolved},
          {"conditional_on_C_estimate", ctx.estimated},
          {"result", std::move(result)}};
}

std::string file_stem(const std::string& cmd) {
  std::string s = cmd;
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

void emit(const Context& ctx, const json& result) {
  write_json(ctx.out / (file_stem(ctx.command) + ".json"), record(ctx, result));
}

Profile gaussian_profile(const Context& ctx, double width) {
  Profile u = Profile::sample(ctx.grid, [&](double r) { return std::exp(-r * r / width); });
  const double m = coefficients(u, ctx.params).mass;
  return u.scaled(std::sqrt(ctx.params.mass / m));
}

Profile load_profile(const fs::path& path) {
  json j = read_json(path);
  if (j.contains("result")) j = j.at("result");
  if (j.contains("profile")) j = j.at("profile");
  return profile_from_json(j);
}

SolveResult load_result(const fs::path& path) {
  json j = read_json(path);
  if (j.contains("result")) j = j.at("result");
  return solve_result_from_json(j);
}

fs::path path_in(const Context& ctx, const json& sec, const char* key, const char* fallback) {
  const auto p = opt<std::string>(sec, key, "");
  return p.empty() ? ctx.out / fallback : fs::path(p);
}

void profile_csv(const Profile& u, const fs::path& path) {
  CsvWriter csv({"r", "u"});
  for (std::size_t i = 0; i < u.size(); ++i) csv.row({u.grid().node(i), u[i]});
  csv.save(path);
}

// ---------------------------------------------------------------- subcommands

int cmd_check(Context& ctx) {
  const Feasibility f = feasibility_condition(ctx.params);
  emit(ctx, {{"feasibility", to_json(f)},
             {"boundary_slope", feasibility_boundary_slope(ctx.params)},
             {"params", describe(ctx.params)}});
  std::cout << "holds=" << (f.holds ? "true" : "false") << " log_lhs=" << f.log_lhs
            << " log_rhs=" << f.log_rhs << '\n';
  return kOk;
}

int cmd_landscape(Context& ctx) {
  const LandscapeReport rep = landscape_report(ctx.params);
  const json sec = section(ctx.input, "landscape");
  const int samples = opt<int>(sec, "samples", 1001);
  if (samples < 2) throw ConfigError("landscape.samples must be at least 2");
  const double s_max = opt<double>(sec, "s_max", rep.holds ? 1.5 * rep.R1 : 10.0 * rep.s_bar);
  CsvWriter csv({"s", "g"});
  for (int i = 0; i < samples; ++i) {
    const double s = s_max * i / (samples - 1);
    csv.row({s, g_eval(s, ctx.params)});
  }
  csv.save(ctx.out / "landscape.csv");
  emit(ctx, {{"report", to_json(rep)}, {"series", "landscape.csv"}});
  std::cout << "holds=" << (rep.holds ? "true" : "false") << " R0=" << rep.R0 << " R1=" << rep.R1
            << '\n';
  return kOk;
}

int cmd_fiber(Context& ctx) {
  const json sec = section(ctx.input, "fiber");
  const Profile u = sec.contains("profile") ? load_profile(opt<std::string>(sec, "profile", ""))
                                            : gaussian_profile(ctx, opt<double>(sec, "gaussian_width", 1.0));
  const FiberCoefficients c = coefficients(u, ctx.params);
  const double t_min = opt<double>(sec, "t_min", 1e-2);
  const double t_max = opt<double>(sec, "t_max", 1e2);
  const int samples = opt<int>(sec, "samples", 1001);
  if (!(t_min > 0.0 && t_max > t_min) || samples < 2) throw ConfigError("fiber: bad t range");
  CsvWriter csv({"t", "psi", "psi1", "psi2"});
  for (int i = 0; i < samples; ++i) {
    const double t = std::exp(std::log(t_min) + (std::log(t_max) - std::log(t_min)) * i / (samples - 1));
    const FiberValue v = psi(c, ctx.params, t);
    csv.row({t, v.value, v.first, v.second});
  }
  csv.save(ctx.out / "fiber.csv");
  const FiberPortrait fp = fiber_portrait(c, ctx.params);
  emit(ctx, {{"coefficients", to_json(c)},
             {"portrait", to_json(fp)},
             {"tag", std::string(to_string(classify(c, ctx.params, kDegenerateBandTol)))},
             {"pohozaev", pohozaev(c, ctx.params)},
             {"series", "fiber.csv"}});
  std::cout << "s_u=" << fp.s_u << " t_u=" << fp.t_u << '\n';
  return kOk;
}

int cmd_gn(Context& ctx) {
  const GridPtr gg = build_grid(ctx.params.dim, ctx.gn.r_max, ctx.gn.n);
  json est = json::object();
  for (auto [name, t] : {std::pair{"p", ctx.params.p}, std::pair{"q", ctx.params.q}}) {
    const GnEstimate e =
        estimate_gn_constant(ctx.params.dim, t, gg, ctx.gn.trials, ctx.gn.seed, ctx.gn.max_iters);
    est[name] = {{"exponent", t}, {"value", e.value}, {"seed_values", e.seed_values}};
    std::cout << "C_" << name << "=" << e.value << '\n';
  }
  emit(ctx, {{"estimates", est}, {"lower_bound", true}});
  return kOk;
}

int cmd_solve(Context& ctx, bool ground) {
  const SolveResult r = ground ? solve_ground(ctx.params, ctx.grid, ctx.ground_opts)
                               : solve_mountain_pass(ctx.params, ctx.grid, ctx.mp_opts);
  const std::string stem = ground ? "ground" : "mp";
  profile_csv(r.profile, ctx.out / (stem + "_profile.csv"));
  write_json(ctx.out / (stem + ".json"), record(ctx, to_json(r)));
  std::cout << stem << " energy=" << r.energy << " lambda=" << r.lambda
            << " converged=" << (r.converged ? "true" : "false") << '\n';
  if (!r.converged) {
    throw NumericalError(stem + " solve did not converge: " + r.diagnostics);
  }
  return kOk;
}

int cmd_verify(Context& ctx) {
  const json sec = section(ctx.input, "verify");
  const SolveResult g = load_result(path_in(ctx, sec, "ground", "ground.json"));
  const SolveResult m = load_result(path_in(ctx, sec, "mp", "mp.json"));
  const TheoremReport rep = verify_theorem(ctx.params, g, m);
  emit(ctx, to_json(rep));
  for (const TheoremCheck& c : rep.checks) {
    if (!c.passed) std::cout << "FAIL " << c.name << " value=" << c.value << '\n';
  }
  std::cout << "verify " << (rep.passed() ? "passed" : "failed") << '\n';
  return rep.passed() ? kOk : kVerifyFailed;
}

int cmd_scan(Context& ctx) {
  const json sec = section(ctx.input, "scan");
  const auto [alo, ahi] = range(sec, "a", {0.1, 10.0});
  const auto [tlo, thi] = range(sec, "tau", {0.1, 100.0});
  const int res = opt<int>(sec, "resolution", 32);
  const std::vector<ScanRow> rows = region_scan(ctx.params, {alo, ahi}, {tlo, thi}, res, ctx.jobs);
  CsvWriter csv({"a", "tau", "lhs", "rhs", "holds"});
  int holds = 0;
  for (const ScanRow& r : rows) {
    csv.row({r.a, r.tau, r.lhs, r.rhs, r.holds ? 1.0 : 0.0});
    holds += r.holds;
  }
  // holds(a, τ) must imply holds at every dominated grid point
  long violations = 0;
  const auto n = static_cast<std::size_t>(res);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!rows[i * n + j].holds) continue;
      for (std::size_t k = 0; k <= i; ++k)
        for (std::size_t l = 0; l <= j; ++l) violations += !rows[k * n + l].holds;
    }
  csv.save(ctx.out / "scan.csv");
  emit(ctx, {{"rows", rows.size()},
             {"holds", holds},
             {"monotonicity_violations", violations},
             {"boundary_slope", feasibility_boundary_slope(ctx.params)},
             {"series", "scan.csv"}});
  std::cout << "holds " << holds << "/" << rows.size() << " violations=" << violations << '\n';
  return kOk;
}

int cmd_dual_check(Context& ctx) {
  const json sec = section(ctx.input, "dual");
  const fs::path src = path_in(ctx, sec, "result", "ground.json");
  const SolveResult r = fs::exists(src) ? load_result(src)
                                        : solve_ground(ctx.params, ctx.grid, ctx.ground_opts);
  const double noise = opt<double>(sec, "noise", 0.01);
  const auto seed = opt<std::uint64_t>(sec, "seed", 1);
  const int samples = opt<int>(sec, "inverse_samples", 1000);

  double inverse_err = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double s = 10.0 * i / std::max(1, samples - 1);
    inverse_err = std::max(inverse_err, std::abs(dual_phi(dual_v(s)) - s));
  }
  const double res = dual_residual(r.profile, r.lambda, ctx.params);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> pv(r.profile.values().begin(), r.profile.values().end());
  for (double& x : pv) x *= 1.0 + noise * gauss(rng);
  const Profile pert(r.profile.grid_ptr(), std::move(pv));
  const double res_pert = dual_residual(pert, r.lambda, ctx.params);
  const double el = el_residual(r.profile, r.lambda, ctx.params);
  const double el_pert = el_residual(pert, r.lambda, ctx.params);
  emit(ctx, {{"source", src.string()},
             {"lambda", r.lambda},
             {"inverse_max_error", inverse_err},
             {"dual_residual", res},
             {"dual_residual_perturbed", res_pert},
             {"sensitivity_ratio", res_pert / res},
             {"el_residual", el},
             {"el_residual_perturbed", el_pert},
             {"noise", noise}});
  std::cout << "dual_residual=" << res << " perturbed=" << res_pert << '\n';
  return kOk;
}

int cmd_shoot_sweep(Context& ctx) {
  const json sec = section(ctx.input, "shoot");
  const auto [llo, lhi] = range(sec, "lambda", {0.5, 5.0});
  const auto [blo, bhi] = range(sec, "beta", {1e-3, 50.0});
  const int samples = opt<int>(sec, "samples", 64);
  if (!(llo > 0.0 && lhi >= llo) || samples < 1) throw ConfigError("shoot: bad lambda range");

  struct Row {
    double lambda = 0, beta = 0, mass = 0, energy = 0, el = 0, cutoff = 0;
    std::string error;
  };
  std::vector<Row> rows(samples);
  auto work = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      Row& row = rows[i];
      row.lambda = samples == 1 ? llo
                                : std::exp(std::log(llo) + (std::log(lhi) - std::log(llo)) * i / (samples - 1));
      try {
        const ShootResult s = shoot(row.lambda, ctx.params, ctx.grid, blo, bhi);
        const FiberCoefficients c = coefficients(s.profile, ctx.params);
        row.beta = s.beta;
        row.mass = c.mass;
        row.energy = energy(c, ctx.params);
        row.el = el_residual(s.profile, row.lambda, ctx.params);
        row.cutoff = s.cutoff;
      } catch (const Error& e) {
        row.error = e.what();
      }
    }
  };
  const int nj = std::min(ctx.jobs, samples);
  std::vector<std::thread> pool;
  const int chunk = (samples + nj - 1) / nj;
  for (int j = 0; j < nj; ++j) pool.emplace_back(work, j * chunk, std::min(samples, (j + 1) * chunk));
  for (auto& t : pool) t.join();

  CsvWriter csv({"lambda", "beta", "mass", "energy", "el_res", "cutoff"});
  json failures = json::array();
  double max_jump = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Row& r = rows[i];
    if (!r.error.empty()) {
      failures.push_back({{"lambda", r.lambda}, {"error", r.error}});
      continue;
    }
    csv.row({r.lambda, r.beta, r.mass, r.energy, r.el, r.cutoff});
    if (i > 0 && rows[i - 1].error.empty()) {
      max_jump = std::max(max_jump, std::abs(r.mass - rows[i - 1].mass) / rows[i - 1].mass);
    }
  }
  csv.save(ctx.out / "shoot_sweep.csv");

  json cross = json::object();
  for (auto [name, file] : {std::pair{"ground", "ground.json"}, std::pair{"mountain_pass", "mp.json"}}) {
    const fs::path p = ctx.out / file;
    if (!fs::exists(p)) continue;
    const SolveResult ref = load_result(p);
    try {
      const ShootResult s = shoot(ref.lambda, ctx.params, ctx.grid, blo, bhi);
      const FiberCoefficients c = coefficients(s.profile, ctx.params);
      const double dm = std::abs(c.mass - ref.coeffs.mass) / ref.coeffs.mass;
      const double de = std::abs(energy(c, ctx.params) - ref.energy) / std::abs(ref.energy);
      cross[name] = {{"lambda", ref.lambda}, {"mass", c.mass}, {"energy", energy(c, ctx.params)},
                     {"mass_rel_diff", dm}, {"energy_rel_diff", de},
                     {"matches", dm < 0.05 && de < 0.05}};
    } catch (const Error& e) {
      cross[name] = {{"lambda", ref.lambda}, {"error", e.what()}};
    }
  }
  emit(ctx, {{"samples", samples},
             {"failures", failures},
             {"max_relative_mass_jump", max_jump},
             {"cross_check", cross},
             {"series", "shoot_sweep.csv"}});
  std::cout << "shoot-sweep " << samples - failures.size() << "/" << samples
            << " max_mass_jump=" << max_jump << '\n';
  return kOk;
}

int dispatch(Context& ctx) {
  const std::string& c = ctx.command;
  if (c == "check") return cmd_check(ctx);
  if (c == "landscape") return cmd_landscape(ctx);
  if (c == "fiber") return cmd_fiber(ctx);
  if (c == "gn") return cmd_gn(ctx);
  if (c == "solve-ground") return cmd_solve(ctx, true);
  if (c == "solve-mp") return cmd_solve(ctx, false);
  if (c == "verify") return cmd_verify(ctx);
  if (c == "scan") return cmd_scan(ctx);
  if (c == "dual-check") return cmd_dual_check(ctx);
  if (c == "shoot-sweep") return cmd_shoot_sweep(ctx);
  throw ConfigError("unknown subcommand '" + c + "'");
}

void write_error(const fs::path& out, const Invocation& inv, int code, const char* type,
                 const std::string& message) {
  std::cerr << "normsol " << inv.command << ": " << message << '\n';
  try {
    fs::create_directories(out);
    write_json(out / "error.json", {{"schema", kSchemaVersion},
                                    {"command", inv.command},
                                    {"timestamp", timestamp()},
                                    {"config_path", inv.config_path.string()},
                                    {"exit_code", code},
                                    {"error_type", type},
                                    {"message", message}});
  } catch (const std::exception&) {
  }
}

}  // namespace

int run(const Invocation& inv) {
  json cfg = json::object();
  fs::path out = resolve_output_dir(cfg, inv.out_override);
  try {
    cfg = read_json(inv.config_path);
    out = resolve_output_dir(cfg, inv.out_override);
    Context ctx = resolve(inv, cfg);
    ctx.out = out;
    fs::create_directories(out);
    return dispatch(ctx);
  } catch (const ConfigError& e) {
    write_error(out, inv, kConfigError, "config", e.what());
    return kConfigError;
  } catch (const ShapeError& e) {
    write_error(out, inv, kConfigError, "shape", e.what());
    return kConfigError;
  } catch (const FeasibilityError& e) {
    write_error(out, inv, kFeasibilityError, "feasibility", e.what());
    return kFeasibilityError;
  } catch (const NumericalError& e) {
    write_error(out, inv, kNumericalError, "numerical", e.what());
    return kNumericalError;
  } catch (const DomainError& e) {
    write_error(out, inv, kNumericalError, "domain", e.what());
    return kNumericalError;
  } catch (const std::exception& e) {
    write_error(out, inv, kNumericalError, "internal", e.what());
    return kNumericalError;
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Normalized solutions of a quasi-linear Schrödinger equation"};
  app.require_subcommand(1);
  Invocation inv;
  std::string config;
  std::string out;
  int jobs = 1;
  for (const std::string& name : subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("config", config, "JSON configuration file")->required();
    sub->add_option("--out", out, "output directory (overrides NORMSOL_OUT and output_dir)");
    sub->add_option("--jobs", jobs, "worker threads for scan and shoot-sweep")
        ->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  for (CLI::App* sub : app.get_subcommands()) inv.command = sub->get_name();
  inv.config_path = config;
  inv.out_override = out;
  inv.jobs = jobs;
  return run(inv);
}

}  // namespace normsol::cli
