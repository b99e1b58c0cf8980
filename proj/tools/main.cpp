#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "run.hpp"

namespace {

std::vector<long> parse_schedule(const std::string& text) {
  std::vector<long> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const long v = std::stol(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using polyhardy::cli::RunOptions;
  CLI::App app{"Submodule and quotient diagnostics on the polydisc Hardy space"};
  app.set_version_flag("--version", std::string(polyhardy::cli::kToolVersion));
  app.require_subcommand(1);

  RunOptions options;
  std::string schedule = "40,60,80";
  auto* run = app.add_subcommand("run", "Run the analyses requested by a scenario file");
  run->add_option("scenario", options.scenario_path, "Scenario JSON file")->required();
  run->add_option("--out", options.out_dir, "Output directory")->capture_default_str();
  run->add_option("--grid", options.grid, "Boundary grid size for inner-ness checks")->capture_default_str();
  run->add_option("--rank-tol", options.rank_tol, "Relative numerical-rank tolerance")->capture_default_str();
  run->add_option("--schedule", schedule, "Truncation schedule for decay, comma separated")
      ->capture_default_str();
  run->add_flag("--json-only", options.json_only, "Write only the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : polyhardy::cli::kExitInput;
  }
  try {
    options.schedule = parse_schedule(schedule);
  } catch (const std::exception&) {
    std::cerr << "error: --schedule expects comma-separated integers\n";
    return polyhardy::cli::kExitInput;
  }
  return polyhardy::cli::run(options, std::cout, std::cerr);
}
