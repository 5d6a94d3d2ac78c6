#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "liouville/generate.hpp"

namespace liouville::cli {

/// Config/validation problem; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// I/O problem; the CLI maps it to exit code 3.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Everything a pipeline run needs, filled with documented defaults
/// (N=2, n=256, L=16, radial stream field).
struct RunConfig {
    int dims = 2;
    int n = 256;
    double length = 16.0;

    GeneratorSpec field;
    GeneratorSpec bfield;
    bool has_bfield = false;

    double nu = 0.01;
    double dt = 0.01;
    double t_end = 1.0;
    int snapshot_every = 10;

    std::string scan_case = "diag1";
    double rmin = 0.0;  // 0: derive from the field support
    double rmax = 0.0;
    int rcount = 8;

    std::string outdir = "out";
    std::string input_field;  // optional LVF path
    bool plots = false;
    bool dump_fields = false;

    double tol_equip = 1e-3;  // relative to trace M
    double tol_cross = 1e-6;

    /// Keys overridden on the command line (recorded in the manifest).
    std::vector<std::string> overrides;
};

/// Apply one key=value setting; throws ConfigError naming unknown keys or
/// invalid values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Parse a flat key=value file ('#' comments, blank lines ignored).
RunConfig parse_config_file(const std::string& path);

/// Parse from an already-loaded text blob (testing hook).
RunConfig parse_config_text(const std::string& text);

/// Validate cross-field invariants (grid constructible, envelope fits, ...).
/// Throws ConfigError on violation.
void validate(const RunConfig& config);

/// Effective configuration as key=value pairs (manifest echo).
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config);

}  // namespace liouville::cli
