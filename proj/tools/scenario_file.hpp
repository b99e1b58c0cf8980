#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polyhardy/lattice.hpp"

namespace polyhardy::cli {

inline constexpr int kSchemaVersion = 1;

// Malformed or out-of-contract input; maps to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SlotSpec {
  enum class Kind { Blaschke, Full };
  Kind kind = Kind::Full;
  std::vector<std::complex<double>> zeros;
  std::complex<double> constant{1.0, 0.0};
  std::optional<long> truncation;
};

struct ScenarioSpec {
  int n = 0;
  std::vector<SlotSpec> slots;
  double max_modulus = disc::kDefaultMaxModulus;
};

inline const std::vector<std::string> kKnownAnalyses = {"project", "commutator", "essnorm", "blh",
                                                        "rigidity", "c0", "decay"};

struct ScenarioFile {
  int schema_version = kSchemaVersion;
  ScenarioSpec primary;
  std::vector<std::string> analyses;
  std::optional<ScenarioSpec> second;
  // 1-based pair for the decay analysis.
  std::pair<int, int> decay_pair{1, 2};

  bool requests(const std::string& analysis) const;
};

ScenarioFile parse_scenario(const nlohmann::json& doc);
ScenarioFile load_scenario(const std::string& path);

nlohmann::json to_json(const ScenarioFile& f);

// Throws InputError naming the slot when the Blaschke data is invalid.
lattice::PolydiscScenario to_scenario(const ScenarioSpec& spec);

nlohmann::json complex_to_json(std::complex<double> z);

}  // namespace polyhardy::cli
