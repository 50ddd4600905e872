#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace normsol::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kConfigError = 2,
  kFeasibilityError = 3,
  kNumericalError = 4,
};

struct Invocation {
  std::string command;
  std::filesystem::path config_path;
  std::filesystem::path out_override;  ///< --out, empty if absent
  int jobs = 1;
};

/// Subcommand names in dispatch order.
const std::vector<std::string>& subcommands();

/// Runs one subcommand; never throws. Artifacts land in the resolved output directory.
int run(const Invocation& inv);

/// argv front end (CLI11).
int main_entry(int argc, char** argv);

/// Output directory: --out, then $NORMSOL_OUT, then config "output_dir", then "normsol_out".
std::filesystem::path resolve_output_dir(const nlohmann::json& config,
                                         const std::filesystem::path& out_override);

}  // namespace normsol::cli
