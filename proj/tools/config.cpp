#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "liouville/grid.hpp"

namespace liouville::cli {

namespace {

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' needs an integer, got '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' needs a number, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes") return true;
    if (value == "0" || value == "false" || value == "no") return false;
    throw ConfigError("config: key '" + key + "' needs a boolean, got '" + value + "'");
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' needs an unsigned integer, got '" + value +
                          "'");
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "N") {
        config.dims = parse_int(key, value);
    } else if (key == "n") {
        config.n = parse_int(key, value);
    } else if (key == "L") {
        config.length = parse_double(key, value);
    } else if (key == "kind") {
        config.field.kind = parse_kind(value);  // throws on unknown kind
    } else if (key == "shape") {
        config.field.shape = value;
    } else if (key == "width") {
        config.field.width = parse_double(key, value);
    } else if (key == "seed") {
        config.field.seed = parse_seed(key, value);
    } else if (key == "amplitude") {
        config.field.amplitude = parse_double(key, value);
    } else if (key == "bkind") {
        config.bfield.kind = parse_kind(value);
        config.has_bfield = true;
    } else if (key == "bshape") {
        config.bfield.shape = value;
        config.has_bfield = true;
    } else if (key == "bwidth") {
        config.bfield.width = parse_double(key, value);
        config.has_bfield = true;
    } else if (key == "bseed") {
        config.bfield.seed = parse_seed(key, value);
        config.has_bfield = true;
    } else if (key == "bamplitude") {
        config.bfield.amplitude = parse_double(key, value);
        config.has_bfield = true;
    } else if (key == "nu") {
        config.nu = parse_double(key, value);
    } else if (key == "dt") {
        config.dt = parse_double(key, value);
    } else if (key == "T") {
        config.t_end = parse_double(key, value);
    } else if (key == "snap_every") {
        config.snapshot_every = parse_int(key, value);
    } else if (key == "case") {
        config.scan_case = value;
    } else if (key == "rmin") {
        config.rmin = parse_double(key, value);
    } else if (key == "rmax") {
        config.rmax = parse_double(key, value);
    } else if (key == "rcount") {
        config.rcount = parse_int(key, value);
    } else if (key == "outdir") {
        config.outdir = value;
    } else if (key == "in") {
        config.input_field = value;
    } else if (key == "plots") {
        config.plots = parse_bool(key, value);
    } else if (key == "dump_fields") {
        config.dump_fields = parse_bool(key, value);
    } else if (key == "tol_equip") {
        config.tol_equip = parse_double(key, value);
    } else if (key == "tol_cross") {
        config.tol_cross = parse_double(key, value);
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig config;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        // trim
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const auto end = line.find_last_not_of(" \t\r");
        line = line.substr(begin, end - begin + 1);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not key=value: '" + line + "'");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t");
            return s.substr(b, e - b + 1);
        };
        apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << is.rdbuf();
    try {
        return parse_config_text(buffer.str());
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(e.what()) + " (in " + path + ")");
    }
}

void validate(const RunConfig& config) {
    try {
        Grid grid(config.dims, config.n, config.length);  // checks N, n, L
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!(config.field.width > 0.0) || config.field.width > config.length / 6.0) {
        throw ConfigError("config: key 'width' must satisfy 0 < width <= L/6");
    }
    if (config.has_bfield &&
        (!(config.bfield.width > 0.0) || config.bfield.width > config.length / 6.0)) {
        throw ConfigError("config: key 'bwidth' must satisfy 0 < bwidth <= L/6");
    }
    if (!(config.dt > 0.0)) throw ConfigError("config: key 'dt' must be positive");
    if (!(config.t_end > 0.0)) throw ConfigError("config: key 'T' must be positive");
    if (config.nu < 0.0) throw ConfigError("config: key 'nu' must be nonnegative");
    if (config.snapshot_every < 1) throw ConfigError("config: key 'snap_every' must be >= 1");
    if (config.rcount < 1) throw ConfigError("config: key 'rcount' must be >= 1");
    const bool diag = config.scan_case.rfind("diag", 0) == 0 && config.scan_case.size() == 5;
    const bool off = config.scan_case.rfind("offdiag", 0) == 0 && config.scan_case.size() == 9;
    if (!diag && !off) {
        throw ConfigError("config: key 'case' must be diagJ or offdiagJK, got '" +
                          config.scan_case + "'");
    }
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config) {
    std::vector<std::pair<std::string, std::string>> e;
    e.emplace_back("N", std::to_string(config.dims));
    e.emplace_back("n", std::to_string(config.n));
    e.emplace_back("L", format_double(config.length));
    e.emplace_back("kind", kind_name(config.field.kind));
    e.emplace_back("shape", config.field.shape);
    e.emplace_back("width", format_double(config.field.width));
    e.emplace_back("seed", std::to_string(config.field.seed));
    e.emplace_back("amplitude", format_double(config.field.amplitude));
    if (config.has_bfield) {
        e.emplace_back("bkind", kind_name(config.bfield.kind));
        e.emplace_back("bshape", config.bfield.shape);
        e.emplace_back("bwidth", format_double(config.bfield.width));
        e.emplace_back("bseed", std::to_string(config.bfield.seed));
        e.emplace_back("bamplitude", format_double(config.bfield.amplitude));
    }
    e.emplace_back("nu", format_double(config.nu));
    e.emplace_back("dt", format_double(config.dt));
    e.emplace_back("T", format_double(config.t_end));
    e.emplace_back("snap_every", std::to_string(config.snapshot_every));
    e.emplace_back("case", config.scan_case);
    e.emplace_back("rmin", format_double(config.rmin));
    e.emplace_back("rmax", format_double(config.rmax));
    e.emplace_back("rcount", std::to_string(config.rcount));
    // outdir is environmental, not semantic; leaving it out keeps reruns
    // byte-identical across directories
    if (!config.input_field.empty()) e.emplace_back("in", config.input_field);
    e.emplace_back("plots", config.plots ? "1" : "0");
    e.emplace_back("dump_fields", config.dump_fields ? "1" : "0");
    e.emplace_back("tol_equip", format_double(config.tol_equip));
    e.emplace_back("tol_cross", format_double(config.tol_cross));
    return e;
}

}  // namespace liouville::cli
