#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "normsol/error.hpp"
#include "normsol/io.hpp"
#include "support.hpp"

using namespace normsol;
using nlohmann::json;

TEST_CASE("parameters round trip") {
  const ProblemParams p = testsupport::feasible_params();
  const json j = to_json(p);
  CHECK(j.at("N") == 3);
  CHECK(j.at("tau") == 10.0);
  CHECK(j.at("a") == 2.0);
  const ProblemParams back = params_from_json(j);
  CHECK(back.dim == p.dim);
  CHECK(back.p == p.p);
  CHECK(back.q == p.q);
  CHECK(back.tau == p.tau);
  CHECK(back.mass == p.mass);
  CHECK(back.gn_p == p.gn_p);
  CHECK(back.gn_q == p.gn_q);

  ProblemParams unset = p;
  unset.gn_p = 0.0;
  CHECK(to_json(unset).at("C_p").is_null());
  CHECK(params_from_json(to_json(unset)).gn_p == 0.0);

  CHECK_THROWS_AS(params_from_json(json::array()), ConfigError);
  CHECK_THROWS_AS(params_from_json(json{{"p", "seven"}}), ConfigError);
}

TEST_CASE("solve options round trip") {
  SolveOptions o;
  o.max_iters = 17;
  o.grad_tol = 3e-7;
  o.seed = 99;
  o.restarts = 2;
  const SolveOptions back = solve_options_from_json(to_json(o), {});
  CHECK(back.max_iters == 17);
  CHECK(back.grad_tol == 3e-7);
  CHECK(back.seed == 99);
  CHECK(back.restarts == 2);
  const SolveOptions d = solve_options_from_json(json{{"restarts", 4}}, mountain_pass_defaults());
  CHECK(d.restarts == 4);
  CHECK(d.grad_tol == mountain_pass_defaults().grad_tol);
  CHECK(solve_options_from_json(json(nullptr), o).max_iters == 17);
}

TEST_CASE("profile round trip") {
  auto g = build_grid(2, 7.5, 123);
  std::mt19937_64 rng(1);
  const Profile u = testsupport::random_profile(g, rng);
  const json j = to_json(u);
  CHECK(j.at("r").size() == 123);
  CHECK(j.at("grid").at("n") == 123);
  const Profile back = profile_from_json(json::parse(j.dump()));
  CHECK(back.grid().dim() == 2);
  CHECK(back.grid().r_max() == 7.5);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(back[i] == u[i]);
}

TEST_CASE("solve result round trip") {
  auto g = build_grid(3, 20.0, 200);
  SolveResult r;
  r.kind = SolutionKind::MountainPass;
  r.profile = Profile::sample(g, [](double x) { return std::exp(-x * x); });
  r.coeffs = {1.5, 0.25, 3.0, 2.0, 2.0};
  r.energy = 94.25;
  r.lambda = 1.0 / 3.0;
  r.pohozaev_res = 1e-15;
  r.el_res = 2e-4;
  r.grad_norm = 9e-5;
  r.mass_err = 0.0;
  r.tag = ManifoldTag::Minus;
  r.iterations = 15;
  r.converged = true;
  r.fiber_condition = std::numeric_limits<double>::quiet_NaN();
  r.restart_energies = {94.25, 94.5};
  r.objective_trace = {95.0, 94.5, 94.25};
  r.diagnostics = "restart spread 0.25";

  const json j = to_json(r);
  CHECK(j.at("schema") == kSchemaVersion);
  CHECK(j.at("kind") == "mountain_pass");
  CHECK(j.at("tag") == "minus");
  CHECK(j.at("fiber_condition").is_null());

  const SolveResult b = solve_result_from_json(json::parse(j.dump()));
  CHECK(b.kind == r.kind);
  CHECK(b.energy == r.energy);
  CHECK(b.lambda == r.lambda);
  CHECK(b.el_res == r.el_res);
  CHECK(b.tag == r.tag);
  CHECK(b.iterations == 15);
  CHECK(b.converged);
  CHECK(std::isnan(b.fiber_condition));
  CHECK(b.restart_energies == r.restart_energies);
  CHECK(b.objective_trace == r.objective_trace);
  CHECK(b.diagnostics == r.diagnostics);
  CHECK(b.coeffs.quasilinear == 0.25);
  for (std::size_t i = 0; i < r.profile.size(); ++i) CHECK(b.profile[i] == r.profile[i]);

  json broken = j;
  broken.erase("tag");
  CHECK_THROWS_AS(solve_result_from_json(broken), ConfigError);
}

TEST_CASE("format_double") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> e(-300.0, 300.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = std::pow(10.0, e(rng)) * (k % 2 ? -1 : 1);
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(1.0 / 3.0).find(',') == std::string::npos);
}

TEST_CASE("csv writer") {
  CsvWriter w({"s", "g"});
  w.row({0.5, -1.25});
  w.row(std::vector<double>{1.0 / 3.0, 2.0});
  CHECK(w.str() == "s,g\r\n0.5,-1.25\r\n0.3333333333333333,2\r\n");
  CHECK_THROWS_AS(w.row({1.0}), ShapeError);

  const auto path = std::filesystem::temp_directory_path() / "normsol_test_io.csv";
  w.save(path);
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == w.str());
  std::filesystem::remove(path);
}

TEST_CASE("report records") {
  const ProblemParams p = testsupport::feasible_params();
  const json land = to_json(landscape_report(p));
  CHECK(land.at("holds") == true);
  CHECK(land.contains("R0"));
  const json f = to_json(feasibility_condition(p));
  CHECK(f.at("holds") == true);
  const FiberCoefficients c{1, 1, 1, 1, 1};
  const json coef = to_json(c);
  CHECK(coef.at("A") == 1.0);
  CHECK(coef.at("mass") == 1.0);
  TheoremReport rep;
  rep.checks.push_back({"x", true, 1.0, 2.0, ""});
  rep.checks.push_back({"y", false, 3.0, 2.0, "too big"});
  const json rj = to_json(rep);
  CHECK(rj.at("passed") == false);
  CHECK(rj.at("checks").size() == 2);
}
