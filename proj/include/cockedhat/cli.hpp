#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace cockedhat::cli {

/// Everything one command needs; serializable to JSON and back.
struct ExperimentConfig {
  std::string command;
  // Scenario source: a file, inline coordinates, or a generated scenario.
  std::string scenario_file;
  std::string points;
  std::string target;
  std::size_t generate_n = 0;
  int hull_case = 0;  // 0: any
  // "auto" picks an interval model for `simulate` and a random two-ray model
  // for the enumerating commands.
  std::string model = "auto";
  std::string formulation = "constrained";
  std::string event;  // "delta" | "unbounded"; empty: delta when n = 3
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  std::string output;
  std::size_t cap = 20;
  unsigned threads = 0;  // 0: COCKEDHAT_THREADS or hardware concurrency
  std::string counterexample;
  std::string lines;
  std::string lines_file;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

/// Executes a fully populated config.
int execute(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name) and executes the command.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace cockedhat::cli
