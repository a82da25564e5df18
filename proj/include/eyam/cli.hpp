#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace eyam::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kGateFailed = 2,
  kNotConverged = 3,
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Runs one command on a JSON config and writes report.json plus the command's
// CSV tables into out_dir. Never throws; failures are reported in report.json
// and encoded in the exit code.
int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir, int jobs = 1,
                std::optional<std::uint64_t> seed = std::nullopt);

// exterior-yamabe <command> --config <path> --out <dir> [--jobs K] [--seed S]
int run(int argc, const char* const* argv);

}  // namespace eyam::cli
