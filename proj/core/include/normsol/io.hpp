#pragma once

// JSON records and CSV series. Result records carry `schema: 1`.

#include <filesystem>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "normsol/fiber.hpp"
#include "normsol/landscape.hpp"
#include "normsol/params.hpp"
#include "normsol/solvers.hpp"

namespace normsol {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const ProblemParams& params);
ProblemParams params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SolveOptions& opts);
SolveOptions solve_options_from_json(const nlohmann::json& j, SolveOptions defaults);

nlohmann::json to_json(const FiberCoefficients& c);
nlohmann::json to_json(const FiberPortrait& portrait);
nlohmann::json to_json(const Feasibility& f);
nlohmann::json to_json(const LandscapeReport& report);
nlohmann::json to_json(const TheoremReport& report);

/// Parallel arrays r[] and u[] plus the grid description.
nlohmann::json to_json(const Profile& profile);
Profile profile_from_json(const nlohmann::json& j);

/// Every SolveResult field plus the profile.
nlohmann::json to_json(const SolveResult& result);
SolveResult solve_result_from_json(const nlohmann::json& j);

/// RFC-4180 style CSV with full double precision.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(std::initializer_list<double> values);
  void row(std::span<const double> values);
  std::string str() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::string body_;
};

/// Shortest decimal representation that round-trips a double.
std::string format_double(double x);

}  // namespace normsol
