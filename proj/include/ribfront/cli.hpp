#pragma once

// Command-line orchestration: parse a config, run one construction, write meshes and reports.

#include <cstdint>
#include <optional>
#include <string>

#include "ribfront/config.hpp"

namespace ribfront::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kCheckFailure = 1, kUsageError = 2, kNumericalFailure = 3 };

struct Options {
  std::string config;
  std::string out = ".";
  std::string loops;  // JSON file with a loops array, replacing the config's loops
  std::optional<std::uint64_t> seed;
  double tol_scale = 1.0;
};

/// Config with the command-line overrides applied.
RunConfig resolve(const Options& opts);

int cmd_transform(const RunConfig& cfg, const Options& opts);
int cmd_flatfront(const RunConfig& cfg, const Options& opts);
int cmd_verify(const RunConfig& cfg, const Options& opts);
int cmd_periods(const RunConfig& cfg, const Options& opts);
int cmd_classify(const RunConfig& cfg, const Options& opts);

/// Parses arguments, dispatches, and maps exceptions to exit codes.
int run(int argc, char** argv);

}  // namespace ribfront::cli
