#include "pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "liouville/evolution.hpp"
#include "liouville/grid.hpp"
#include "liouville/identity.hpp"
#include "liouville/lvf.hpp"
#include "liouville/mhd.hpp"
#include "liouville/riesz.hpp"
#include "liouville/spectral.hpp"
#include "liouville/version.hpp"
#include "liouville/weakform.hpp"
#include "svg_plot.hpp"

namespace liouville::cli {

namespace {

namespace fs = std::filesystem;

void ensure_outdir(const RunConfig& config) {
    std::error_code ec;
    fs::create_directories(config.outdir, ec);
    if (ec) throw IoError("cannot create output directory " + config.outdir);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << text;
    if (!os) throw IoError("failed writing " + path);
}

void write_manifest(const RunConfig& config, const std::string& subcommand) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["subcommand"] = subcommand;
    j["seed"] = config.field.seed;
    nlohmann::json entries;
    for (const auto& [key, value] : config_entries(config)) entries[key] = value;
    j["config"] = entries;
    j["overrides"] = config.overrides;
    write_text(config.outdir + "/manifest.json", j.dump(2) + "\n");
}

Grid make_grid(const RunConfig& config) {
    return Grid(config.dims, config.n, config.length);
}

VectorField load_or_generate(const RunConfig& config, const Grid& grid) {
    if (!config.input_field.empty()) {
        // the stored grid wins; the config grid is only a default
        try {
            return vector_from_snapshot(lvf_read_file(config.input_field));
        } catch (const std::exception& e) {
            throw IoError(e.what());
        }
    }
    return gen_divfree(config.field, grid);
}

ScanCase parse_scan_case(const std::string& name, int dims) {
    ScanCase sc;
    auto axis = [&](char c) {
        const int j = c - '1';
        if (j < 0 || j >= dims) throw ConfigError("config: scan case axis out of range: " + name);
        return j;
    };
    if (name.rfind("diag", 0) == 0 && name.size() == 5) {
        sc.kind = ScanCase::Kind::diag;
        sc.j = axis(name[4]);
    } else if (name.rfind("offdiag", 0) == 0 && name.size() == 9) {
        sc.kind = ScanCase::Kind::offdiag;
        sc.j = axis(name[7]);
        sc.k = axis(name[8]);
        if (sc.j == sc.k) throw ConfigError("config: offdiag axes must differ: " + name);
    } else {
        throw ConfigError("config: bad scan case: " + name);
    }
    return sc;
}

std::vector<double> scan_radii(const RunConfig& config, const Grid& grid,
                               const VectorField& v) {
    if (config.rmin > 0.0 && config.rmax > 0.0) {
        if (config.rmax <= config.rmin) throw ConfigError("config: rmax must exceed rmin");
        if (2.0 * config.rmax > 0.45 * grid.length()) {
            throw ConfigError("config: rmax too large for the box (2R > 0.45 L)");
        }
        std::vector<double> radii;
        for (int i = 0; i < config.rcount; ++i) {
            radii.push_back(config.rmin *
                            std::pow(config.rmax / config.rmin,
                                     config.rcount == 1
                                         ? 0.0
                                         : static_cast<double>(i) / (config.rcount - 1)));
        }
        return radii;
    }
    return default_scan_radii(grid, support_radius(v));
}

int cmd_gen_field(const RunConfig& config) {
    const Grid grid = make_grid(config);
    const VectorField v = gen_divfree(config.field, grid);
    lvf_write_file(config.outdir + "/field.lvf", to_snapshot(v));
    write_manifest(config, "gen-field");
    return kOk;
}

int cmd_pressure(const RunConfig& config) {
    const Grid grid = make_grid(config);
    const VectorField v = load_or_generate(config, grid);
    const SpectralField phat = pressure_spectral(v);
    const ScalarField p = from_spectral(phat);
    const MomentumTensor m = momentum_tensor(v);
    const double core = support_radius(v);
    const L1Report l1 = l1_diagnostic(phat, p, core, &m);
    const FarfieldReport far = farfield_analysis(p, m, core);

    lvf_write_file(config.outdir + "/pressure.lvf", to_snapshot(p));
    nlohmann::json j;
    j["trace_m"] = m.trace();
    nlohmann::json mj = nlohmann::json::array();
    for (int a = 0; a < v.dims(); ++a) {
        nlohmann::json row = nlohmann::json::array();
        for (int b = 0; b < v.dims(); ++b) row.push_back(m.at(a, b));
        mj.push_back(row);
    }
    j["momentum_tensor"] = mj;
    j["pv_estimate"] = l1.pv_estimate;
    j["l1_class"] = to_string(l1.classification);
    j["log_slope"] = l1.log_slope;
    j["farfield_exponent"] = far.exponent;
    j["farfield_pattern_valid"] = far.pattern_valid;
    j["farfield_pattern_correlation"] = far.pattern_correlation;
    j["support_radius"] = core;
    j["exterior_fraction"] = exterior_fraction(v, grid.length() / 3.0);
    write_text(config.outdir + "/pressure.json", j.dump(2) + "\n");
    write_manifest(config, "pressure");

    if (config.plots) {
        PlotSeries a{"annulus_sum", l1.radii, l1.annulus_sums};
        write_svg_chart(config.outdir + "/annuli.svg", "pressure tail annulus sums", "R",
                        "A_R", {a}, true);
    }
    return kOk;
}

int cmd_verify(const RunConfig& config) {
    const Grid grid = make_grid(config);
    const VectorField v = load_or_generate(config, grid);
    const LiouvilleVerdict verdict = classify_state(v);
    write_text(config.outdir + "/verdict.json", verdict_to_json(verdict) + "\n");
    write_manifest(config, "verify");

    bool failed = verdict.falsification;
    if (verdict.verdict_case == LiouvilleCase::equipartition_case) {
        const double scale = std::max(verdict.trace_m, 1e-300);
        if (verdict.equipartition_defect > config.tol_equip * scale) failed = true;
        if (verdict.cross_defect > config.tol_cross * scale) failed = true;
    }
    std::cout << "verdict: " << to_string(verdict.verdict_case)
              << "  pressure_integral=" << verdict.pressure_integral
              << "  equipartition_defect=" << verdict.equipartition_defect
              << "  cross_defect=" << verdict.cross_defect
              << (verdict.falsification ? "  FALSIFICATION" : "") << "\n";
    return failed ? kVerdictFailure : kOk;
}

int cmd_scan(const RunConfig& config) {
    const Grid grid = make_grid(config);
    const VectorField v = load_or_generate(config, grid);
    const ScalarField p = compute_pressure(v);
    const ScanCase sc = parse_scan_case(config.scan_case, grid.dims());
    const ScanTable table = r_scan(v, p, sc, scan_radii(config, grid, v));

    std::ostringstream csv;
    table.write_csv(csv);
    write_text(config.outdir + "/scan.csv", csv.str());

    nlohmann::json j;
    j["case"] = table.scan_case.name();
    j["pressure_term_limit"] = table.pressure_term_limit;
    j["leading_term_final"] = table.leading_term_final;
    j["cutoff_term_decays"] = table.cutoff_term_decays;
    double worst_total = 0.0;
    for (const ScanRow& row : table.rows) worst_total = std::max(worst_total, std::abs(row.total));
    j["max_abs_total"] = worst_total;
    write_text(config.outdir + "/scan.json", j.dump(2) + "\n");
    write_manifest(config, "scan");

    if (config.plots) {
        std::vector<PlotSeries> series;
        for (std::size_t t = 0; t < table.term_names.size(); ++t) {
            PlotSeries s;
            s.name = table.term_names[t];
            for (const ScanRow& row : table.rows) {
                s.x.push_back(row.radius);
                s.y.push_back(row.terms[t]);
            }
            series.push_back(std::move(s));
        }
        write_svg_chart(config.outdir + "/scan.svg", "weak-form ledger vs cutoff radius", "R",
                        "term", series, false);
    }

    const double scale = std::max(momentum_tensor(v).trace(), 1e-300);
    return worst_total <= 1e-8 * scale ? kOk : kVerdictFailure;
}

int cmd_evolve(const RunConfig& config) {
    const Grid grid = make_grid(config);
    if (grid.dims() != 2) throw ConfigError("config: evolve needs N=2");

    // CFL precheck on the initial state, before any stepping
    const FlowState initial{gen_vorticity2d(config.field, grid), 0.0, config.nu};
    if (config.dt > cfl_limit(initial)) {
        throw ConfigError("config: dt violates the CFL bound 0.5 h / max|v| = " +
                          std::to_string(cfl_limit(initial)));
    }

    EvolveConfig ec;
    ec.init = config.field;
    ec.nu = config.nu;
    ec.dt = config.dt;
    ec.t_end = config.t_end;
    ec.snapshot_every = config.snapshot_every;
    if (config.dump_fields) {
        const std::string outdir = config.outdir;
        ec.on_snapshot = [outdir](int index, const ScalarField& omega, double) {
            char name[32];
            std::snprintf(name, sizeof(name), "/omega_%04d.lvf", index);
            lvf_write_file(outdir + name, to_snapshot(omega));
        };
    }
    const DiagnosticsSeries series = run_simulation(ec, grid);

    std::ostringstream csv;
    series.write_csv(csv);
    write_text(config.outdir + "/series.csv", csv.str());
    write_text(config.outdir + "/series.json", series.summary_json() + "\n");
    write_manifest(config, "evolve");

    if (config.plots) {
        PlotSeries e{"energy", {}, {}}, z{"enstrophy", {}, {}}, pv{"pv_estimate", {}, {}};
        for (const Snapshot& s : series.snapshots) {
            e.x.push_back(s.time);
            e.y.push_back(s.energy);
            z.x.push_back(s.time);
            z.y.push_back(s.enstrophy);
            pv.x.push_back(s.time);
            pv.y.push_back(s.pv_estimate);
        }
        write_svg_chart(config.outdir + "/series.svg", "evolution diagnostics", "t", "value",
                        {e, z, pv}, false);
    }

    bool failed = !series.support_valid;
    const double e0 = series.snapshots.empty() ? 0.0 : series.snapshots.front().energy;
    if (series.energy_law_residual > 1e-4 * std::max(e0, 1e-300)) failed = true;
    for (const Snapshot& s : series.snapshots) {
        if (s.l1_class != L1Class::integrable) continue;
        const double scale = std::max(s.m.trace(), 1e-300);
        for (double ej : s.energies) {
            if (std::abs(ej + 0.5 * s.pv_estimate) > config.tol_equip * scale) failed = true;
        }
        if (s.m.max_offdiag() > config.tol_cross * scale) failed = true;
    }
    return failed ? kVerdictFailure : kOk;
}

int cmd_mhd_verify(const RunConfig& config) {
    const Grid grid = make_grid(config);
    const VectorField v = config.field.amplitude == 0.0
                              ? VectorField(grid)
                              : gen_divfree(config.field, grid);
    const VectorField b = config.has_bfield && config.bfield.amplitude != 0.0
                              ? gen_divfree(config.bfield, grid)
                              : VectorField(grid);
    const MHDState state{v, b};
    const MHDVerdict verdict = mhd_classify(state);
    write_text(config.outdir + "/mhd_verdict.json", mhd_verdict_to_json(verdict) + "\n");
    write_manifest(config, "mhd-verify");
    std::cout << "mhd verdict: l1=" << to_string(verdict.l1_class)
              << "  pressure_integral=" << verdict.pressure_integral
              << "  sum_residual=" << verdict.sum_identity_residual
              << (verdict.falsification ? "  FALSIFICATION" : "") << "\n";
    return verdict.falsification ? kVerdictFailure : kOk;
}

int cmd_report(const RunConfig& config) {
    const fs::path dir(config.outdir);
    if (!fs::exists(dir)) throw IoError("report: no such directory: " + config.outdir);
    std::ostringstream out;
    bool any = false;
    bool failed = false;
    auto load = [&](const char* name) -> nlohmann::json {
        std::ifstream is(dir / name);
        if (!is) return {};
        any = true;
        nlohmann::json j;
        try {
            is >> j;
        } catch (const std::exception&) {
            throw IoError(std::string("report: cannot parse ") + name);
        }
        return j;
    };

    if (auto m = load("manifest.json"); !m.is_null()) {
        out << "run: " << m.value("subcommand", "?") << "  version " << m.value("version", "?")
            << "  seed " << m.value("seed", 0ull) << "\n";
    }
    if (auto v = load("verdict.json"); !v.is_null()) {
        out << "liouville verdict: " << v.value("case", "?") << "\n"
            << "  pressure integral " << v.value("pressure_integral", 0.0) << "\n"
            << "  equipartition defect " << v.value("equipartition_defect", 0.0) << "\n"
            << "  cross defect " << v.value("cross_defect", 0.0) << "\n";
        if (v.value("falsification", false)) {
            out << "  FALSIFICATION EVENT\n";
            failed = true;
        }
    }
    if (auto v = load("mhd_verdict.json"); !v.is_null()) {
        out << "mhd verdict: l1 " << v.value("l1_class", "?") << ", pressure integral "
            << v.value("pressure_integral", 0.0) << ", sum residual "
            << v.value("sum_identity_residual", 0.0) << "\n";
        if (v.value("falsification", false)) {
            out << "  FALSIFICATION EVENT\n";
            failed = true;
        }
    }
    if (auto s = load("scan.json"); !s.is_null()) {
        out << "scan " << s.value("case", "?") << ": max |sum of terms| "
            << s.value("max_abs_total", 0.0) << ", pressure term limit "
            << s.value("pressure_term_limit", 0.0) << "\n";
    }
    if (auto s = load("series.json"); !s.is_null()) {
        out << "evolution: " << s.value("snapshots", 0) << " snapshots, energy "
            << s.value("energy_initial", 0.0) << " -> " << s.value("energy_final", 0.0)
            << ", energy-law residual " << s.value("energy_law_residual", 0.0) << "\n";
        if (!s.value("support_valid", true)) {
            out << "  WARNING: support condition violated during the run\n";
        }
    }
    if (auto p = load("pressure.json"); !p.is_null()) {
        out << "pressure: pv " << p.value("pv_estimate", 0.0) << ", class "
            << p.value("l1_class", "?") << ", far-field exponent "
            << p.value("farfield_exponent", 0.0) << "\n";
    }
    if (!any) throw IoError("report: no artifacts found in " + config.outdir);

    std::cout << out.str();
    write_text(config.outdir + "/report.txt", out.str());
    return failed ? kVerdictFailure : kOk;
}

}  // namespace

int run_pipeline(const std::string& subcommand, const RunConfig& config) {
    validate(config);
    ensure_outdir(config);
    if (subcommand == "gen-field") return cmd_gen_field(config);
    if (subcommand == "pressure") return cmd_pressure(config);
    if (subcommand == "verify") return cmd_verify(config);
    if (subcommand == "scan") return cmd_scan(config);
    if (subcommand == "evolve") return cmd_evolve(config);
    if (subcommand == "mhd-verify") return cmd_mhd_verify(config);
    if (subcommand == "report") return cmd_report(config);
    throw ConfigError("unknown subcommand: " + subcommand);
}

}  // namespace liouville::cli
