#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polyhardy/commutator.hpp"
#include "scenario_file.hpp"

namespace polyhardy::cli {

inline constexpr const char* kToolVersion = "0.1.0";
// Dense projector checks in the "project" analysis run up to this ambient dimension.
inline constexpr long kDenseCheckLimit = 1024;

struct RunOptions {
  std::string scenario_path;
  std::string out_dir = ".";
  long grid = 256;
  double rank_tol = 1e-8;
  std::vector<long> schedule{40, 60, 80};
  bool json_only = false;
};

enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitAssertion = 2 };

struct RunResult {
  int exit_code = kExitOk;
  nlohmann::json report;
  nlohmann::json timings;
  std::vector<std::string> failed_blocks;
  std::optional<commutator::DecayProfile> decay;
};

// Runs every requested analysis. Throws InputError for input and sizing problems.
RunResult execute(const ScenarioFile& file, const RunOptions& options);

// Full command: load, execute, write files. Returns the process exit code.
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

// "N,sigma_index,sigma_value" rows sorted by (N, index); index is 1-based.
std::string decay_csv(const commutator::DecayProfile& profile);
void emit_decay_csv(const commutator::DecayProfile& profile, const std::string& path);

std::string summary_text(const nlohmann::json& report);

}  // namespace polyhardy::cli
