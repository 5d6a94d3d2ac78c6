// Batch driver for the incompressible-flow verification toolkit.
//
// Subcommands: gen-field, pressure, verify, scan, evolve, mhd-verify, report.
// Every run reads an optional flat key=value config file; command-line flags
// override file values and the manifest records both.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "pipeline.hpp"

using liouville::cli::ConfigError;
using liouville::cli::IoError;
using liouville::cli::RunConfig;

namespace {

struct FlagSpec {
    const char* flag;
    const char* key;
    const char* help;
};

constexpr FlagSpec kFlags[] = {
    {"--N", "N", "spatial dimension (2 or 3)"},
    {"--n", "n", "grid points per axis (power of two >= 16)"},
    {"--L", "L", "box side length"},
    {"--kind", "kind", "generator kind: stream2d | potential3d | random_divfree"},
    {"--shape", "shape", "field shape: radial | x1 | x1x2 | x4 | radial_poly | random"},
    {"--width", "width", "Gaussian envelope width (<= L/6)"},
    {"--seed", "seed", "generator seed"},
    {"--amplitude", "amplitude", "field amplitude"},
    {"--bkind", "bkind", "magnetic generator kind"},
    {"--bshape", "bshape", "magnetic field shape"},
    {"--bwidth", "bwidth", "magnetic envelope width"},
    {"--bseed", "bseed", "magnetic generator seed"},
    {"--bamplitude", "bamplitude", "magnetic field amplitude"},
    {"--nu", "nu", "viscosity"},
    {"--dt", "dt", "time step"},
    {"--T", "T", "final time"},
    {"--snap-every", "snap_every", "snapshot cadence in steps"},
    {"--case", "case", "scan case: diagJ | offdiagJK"},
    {"--rmin", "rmin", "smallest scan radius (0 = auto)"},
    {"--rmax", "rmax", "largest scan radius (0 = auto)"},
    {"--rcount", "rcount", "number of scan radii"},
    {"--out", "outdir", "output directory"},
    {"--in", "in", "input LVF1 field file"},
    {"--tol-equip", "tol_equip", "equipartition tolerance (relative to tr M)"},
    {"--tol-cross", "tol_cross", "cross-moment tolerance (relative to tr M)"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical verification toolkit for incompressible-flow integral identities"};
    app.require_subcommand(1);

    const std::vector<std::string> names = {"gen-field", "pressure", "verify",    "scan",
                                            "evolve",    "mhd-verify", "report"};
    const std::vector<std::string> descriptions = {
        "generate a divergence-free field and store it as LVF1",
        "compute the pressure and its tail diagnostics",
        "evaluate the Liouville/equipartition verdict on a state",
        "run the weak-form cutoff-radius scan",
        "run the 2D pseudo-spectral solver with per-snapshot diagnostics",
        "evaluate the MHD integral identities on a kinematic state",
        "summarize the artifacts of a previous run"};

    struct SubState {
        CLI::App* sub = nullptr;
        std::string config_path;
        std::vector<std::pair<std::string, std::string>> settings;  // key, value
        bool plots = false;
        bool dump_fields = false;
    };
    std::vector<SubState> subs(names.size());

    for (std::size_t i = 0; i < names.size(); ++i) {
        SubState& state = subs[i];
        state.sub = app.add_subcommand(names[i], descriptions[i]);
        state.sub->add_option("-c,--config", state.config_path, "flat key=value config file");
        for (const FlagSpec& spec : kFlags) {
            const std::string key = spec.key;
            state.sub
                ->add_option_function<std::string>(
                    spec.flag,
                    [&state, key](const std::string& value) {
                        state.settings.emplace_back(key, value);
                    },
                    spec.help)
                ->type_name("VALUE");
        }
        state.sub->add_flag("--plots", state.plots, "write SVG plots");
        state.sub->add_flag("--dump-fields", state.dump_fields, "write LVF1 snapshots");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (!subs[i].sub->parsed()) continue;
            RunConfig config;
            if (!subs[i].config_path.empty()) {
                config = liouville::cli::parse_config_file(subs[i].config_path);
            }
            for (const auto& [key, value] : subs[i].settings) {
                liouville::cli::apply_setting(config, key, value);
                config.overrides.push_back(key);
            }
            if (subs[i].plots) config.plots = true;
            if (subs[i].dump_fields) config.dump_fields = true;
            return liouville::cli::run_pipeline(names[i], config);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return liouville::cli::kConfigError;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return liouville::cli::kIoError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return liouville::cli::kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return liouville::cli::kVerdictFailure;
    }
    return liouville::cli::kConfigError;
}
