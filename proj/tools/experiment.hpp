#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wick/chaos_expansion.hpp"

namespace wick::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailure = 1, kInvalidInput = 2 };

/// Thrown for anything that should end the run with kInvalidInput.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::optional<ChaosExpansion> expansion;
  /// Absent means "use the command default"; present-but-empty is honoured.
  std::optional<std::vector<unsigned>> n_list;
  unsigned n_max = 512;
  unsigned n = 64;
  std::size_t samples = 100000;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned cases = 1000;
  double tolerance = 1e-10;
  double concentration_epsilon = 0.05;
  bool min_order = false;
};

/// "expansion" may be an inline expansion object or a path to a JSON file.
/// Unknown keys and malformed values raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);

/// Canonical form: every key present, expansion inline.
nlohmann::json config_to_json(const ExperimentConfig& config);

int run_verify(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int run_converge(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int run_dist(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int run_bench(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Full command line: <verify|converge|dist|bench> [flags]. Flags override
/// values from --config, which override defaults.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wick::cli
