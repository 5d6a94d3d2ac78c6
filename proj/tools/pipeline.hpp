#pragma once

#include <string>

#include "config.hpp"

namespace liouville::cli {

enum ExitCode { kOk = 0, kVerdictFailure = 1, kConfigError = 2, kIoError = 3 };

/// Run one subcommand end to end: validate, compute, write artifacts into
/// config.outdir.  Returns the process exit code (0 all-pass, 1 on
/// falsification/tolerance failure).  Throws ConfigError/IoError for exit
/// codes 2/3 (the CLI maps them).
int run_pipeline(const std::string& subcommand, const RunConfig& config);

}  // namespace liouville::cli
