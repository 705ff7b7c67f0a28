#pragma once

#include <filesystem>

#include "green/cli/run_config.hpp"

namespace green::cli {

// Exit codes shared by all commands: 0 success, 1 config/abort error
// (thrown as green::Error and mapped by the caller), 2 partial failures
// above the configured threshold.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitPartialFailures = 2;

// Creates (and returns) the run directory: explicit run_dir when set,
// otherwise a timestamped name under output_dir.
std::filesystem::path resolve_run_dir(const RunConfig& config);

int cmd_evaluate(const RunConfig& config);
int cmd_summarize(const RunConfig& config);
int cmd_validate(const RunConfig& config);
int cmd_synthesize(const RunConfig& config);
int cmd_prefer(const RunConfig& config);

}  // namespace green::cli
