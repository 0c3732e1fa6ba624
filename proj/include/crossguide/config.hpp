// Run configuration: a flat sectioned key-value file, merged with
// command-line overrides (flags win), validated as a whole so every
// violation is reported at once.
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "crossguide/geometry.hpp"
#include "crossguide/quadrant.hpp"
#include "crossguide/time_domain.hpp"

namespace crossguide {

enum class RunMode { Solve, Sweep, SMatrix, TimeDomain, Validate };

inline const char* to_string(RunMode m) {
    switch (m) {
        case RunMode::Solve: return "solve";
        case RunMode::Sweep: return "sweep";
        case RunMode::SMatrix: return "smatrix";
        case RunMode::TimeDomain: return "timedomain";
        case RunMode::Validate: return "validate";
    }
    return "?";
}

struct RunConfig {
    // [geometry]
    Geometry geometry{};
    // [run]
    RunMode mode = RunMode::Solve;
    double k = 0.0;
    double k_min = 0.0, k_max = 0.0;
    int n_k = 0;
    std::optional<BCPair> bc;       // solve: restrict to one sub-problem
    ModeFamily parity = ModeFamily::Even;
    int p = 0;
    std::map<BCPair, int> p_override; // per-sub-problem incident mode
    int N = 100;
    int jobs = 1;
    unsigned seed = 0;
    int samples = 1000;             // validate: randomized oracle samples
    // [grid]
    GridSpec grid;
    // [spectrum]
    SpectrumSpec spectrum = SpectrumSpec::gaussian(3.0, 8.0, 1.0 / pi);
    std::string spectrum_file;
    // [time]
    std::vector<double> times;
    // [output]
    std::filesystem::path out_dir = "out";

    int incident_mode(BCPair b) const {
        const auto it = p_override.find(b);
        return it == p_override.end() ? p : it->second;
    }
};

namespace detail {

struct KeyValue {
    std::string value;
    int line;
};

using ConfigMap = std::map<std::string, KeyValue>; // "section.key" -> value

inline const std::map<std::string, std::vector<std::string>>& known_keys() {
    static const std::map<std::string, std::vector<std::string>> keys = {
        {"geometry", {"a1", "a2", "b1", "b2"}},
        {"run",
         {"mode", "k", "k_min", "k_max", "n_k", "bc", "parity", "p", "p_nn", "p_dd", "p_nd",
          "p_dn", "n", "jobs", "seed", "samples"}},
        {"grid", {"nx", "ny", "channel_length"}},
        {"spectrum", {"kind", "center", "rate", "scale", "file"}},
        {"time", {"t_values"}},
        {"output", {"dir"}},
    };
    return keys;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline void parse_config_stream(std::istream& in, ConfigMap& map) {
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!known_keys().count(section))
                throw ParseError("line " + std::to_string(lineno) + ": unknown section [" +
                                 section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ParseError("line " + std::to_string(lineno) + ": key outside any section");
        const auto& allowed = known_keys().at(section);
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key +
                             "' in section [" + section + "]");
        map[section + "." + key] = {value, lineno};
    }
}

inline double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ParseError("key " + key + ": cannot parse '" + v + "' as a number");
    }
}

inline int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return static_cast<int>(d);
    } catch (const std::exception&) {
        throw ParseError("key " + key + ": cannot parse '" + v + "' as an integer");
    }
}

} // namespace detail

/// Parses a config file plus command-line overrides ("section.key" -> value;
/// overrides win and are recorded in the returned echo map). Unknown keys are
/// rejected; all validation violations are reported together.
inline RunConfig parse_config(const std::optional<std::filesystem::path>& path,
                              const std::map<std::string, std::string>& overrides,
                              std::map<std::string, std::string>* echo = nullptr,
                              std::vector<std::string>* override_notes = nullptr) {
    detail::ConfigMap map;
    if (path) {
        std::ifstream in(*path);
        if (!in) throw IoError("cannot open config file " + path->string());
        detail::parse_config_stream(in, map);
    }
    for (const auto& [key, value] : overrides) {
        const auto dot = key.find('.');
        const std::string section = key.substr(0, dot);
        const std::string name = dot == std::string::npos ? "" : key.substr(dot + 1);
        const auto it = detail::known_keys().find(section);
        if (it == detail::known_keys().end() ||
            std::find(it->second.begin(), it->second.end(), name) == it->second.end())
            throw ParseError("unknown override key '" + key + "'");
        if (map.count(key) && map[key].value != value && override_notes)
            override_notes->push_back("flag overrides config value for " + key + " ('" +
                                      map[key].value + "' -> '" + value + "')");
        map[key] = {value, 0};
    }

    RunConfig cfg;
    std::vector<std::string> violations;
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        const auto it = map.find(key);
        if (it == map.end()) return std::nullopt;
        return it->second.value;
    };

    // geometry: all four required
    double dims[4] = {0, 0, 0, 0};
    const char* dim_keys[4] = {"geometry.a1", "geometry.a2", "geometry.b1", "geometry.b2"};
    bool have_all_dims = true;
    for (int i = 0; i < 4; ++i) {
        if (const auto v = get(dim_keys[i]))
            dims[i] = detail::to_double(dim_keys[i], *v);
        else {
            violations.push_back(std::string("missing required key ") + dim_keys[i]);
            have_all_dims = false;
        }
    }
    if (have_all_dims) {
        try {
            cfg.geometry = validate_geometry(dims[0], dims[1], dims[2], dims[3]);
        } catch (const Error& e) {
            violations.push_back(e.what());
        }
    }

    if (const auto v = get("run.mode")) {
        const std::string m = *v;
        if (m == "solve") cfg.mode = RunMode::Solve;
        else if (m == "sweep") cfg.mode = RunMode::Sweep;
        else if (m == "smatrix") cfg.mode = RunMode::SMatrix;
        else if (m == "timedomain") cfg.mode = RunMode::TimeDomain;
        else if (m == "validate") cfg.mode = RunMode::Validate;
        else violations.push_back("run.mode must be solve|sweep|smatrix|timedomain|validate");
    } else {
        violations.push_back("missing required key run.mode");
    }

    if (const auto v = get("run.k")) cfg.k = detail::to_double("run.k", *v);
    if (const auto v = get("run.k_min")) cfg.k_min = detail::to_double("run.k_min", *v);
    if (const auto v = get("run.k_max")) cfg.k_max = detail::to_double("run.k_max", *v);
    if (const auto v = get("run.n_k")) cfg.n_k = detail::to_int("run.n_k", *v);
    if (const auto v = get("run.bc")) {
        try {
            cfg.bc = bc_from_string(*v);
        } catch (const Error& e) {
            violations.push_back(e.what());
        }
    }
    if (const auto v = get("run.parity")) {
        if (*v == "even") cfg.parity = ModeFamily::Even;
        else if (*v == "odd") cfg.parity = ModeFamily::Odd;
        else violations.push_back("run.parity must be even|odd");
    }
    if (const auto v = get("run.p")) cfg.p = detail::to_int("run.p", *v);
    const std::pair<const char*, BCPair> overrides_p[] = {{"run.p_nn", BCPair::NN},
                                                          {"run.p_dd", BCPair::DD},
                                                          {"run.p_nd", BCPair::ND},
                                                          {"run.p_dn", BCPair::DN}};
    for (const auto& [key, b] : overrides_p)
        if (const auto v = get(key)) cfg.p_override[b] = detail::to_int(key, *v);
    if (const auto v = get("run.n")) cfg.N = detail::to_int("run.n", *v);
    if (const auto v = get("run.jobs")) cfg.jobs = detail::to_int("run.jobs", *v);
    if (const auto v = get("run.seed")) cfg.seed = static_cast<unsigned>(detail::to_int("run.seed", *v));
    if (const auto v = get("run.samples")) cfg.samples = detail::to_int("run.samples", *v);

    if (const auto v = get("grid.nx")) cfg.grid.nx = detail::to_int("grid.nx", *v);
    if (const auto v = get("grid.ny")) cfg.grid.ny = detail::to_int("grid.ny", *v);
    if (const auto v = get("grid.channel_length"))
        cfg.grid.channel_length = detail::to_double("grid.channel_length", *v);

    {
        double center = 3.0, rate = 8.0, scale = 1.0 / pi;
        std::string kind = "gaussian";
        if (const auto v = get("spectrum.kind")) kind = *v;
        if (const auto v = get("spectrum.center")) center = detail::to_double("spectrum.center", *v);
        if (const auto v = get("spectrum.rate")) rate = detail::to_double("spectrum.rate", *v);
        if (const auto v = get("spectrum.scale")) scale = detail::to_double("spectrum.scale", *v);
        if (const auto v = get("spectrum.file")) cfg.spectrum_file = *v;
        if (kind == "gaussian") {
            try {
                cfg.spectrum = SpectrumSpec::gaussian(center, rate, scale);
            } catch (const Error& e) {
                violations.push_back(e.what());
            }
        } else if (kind == "tabulated") {
            if (cfg.spectrum_file.empty())
                violations.push_back("spectrum.kind = tabulated requires spectrum.file");
        } else {
            violations.push_back("spectrum.kind must be gaussian|tabulated");
        }
    }

    if (const auto v = get("time.t_values")) {
        std::stringstream ss(*v);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = detail::trim(tok);
            if (!tok.empty()) cfg.times.push_back(detail::to_double("time.t_values", tok));
        }
    }
    if (const auto v = get("output.dir")) cfg.out_dir = *v;

    // mode-specific requirements
    auto require_positive = [&](double v, const char* what) {
        if (!(v > 0.0)) violations.push_back(std::string(what) + " must be positive");
    };
    switch (cfg.mode) {
        case RunMode::Solve:
        case RunMode::SMatrix:
            require_positive(cfg.k, "run.k");
            break;
        case RunMode::Sweep:
            require_positive(cfg.k_min, "run.k_min");
            if (!(cfg.k_max > cfg.k_min)) violations.push_back("run.k_max must exceed run.k_min");
            if (cfg.n_k < 2) violations.push_back("run.n_k must be >= 2 for a sweep");
            break;
        case RunMode::TimeDomain:
            // defaults fixed by the quadrature-convergence study: the grid
            // covers the spectrum support and doubling n_k moves the t = 0
            // snapshot by well under 1e-3
            if (cfg.k_max == 0.0 && cfg.spectrum.kind == SpectrumSpec::Kind::Gaussian &&
                cfg.spectrum_file.empty())
                cfg.k_max = cfg.spectrum.center + 4.0 / std::sqrt(cfg.spectrum.rate);
            if (cfg.n_k == 0) cfg.n_k = 256;
            require_positive(cfg.k_max, "run.k_max");
            if (cfg.n_k < 2) violations.push_back("run.n_k must be >= 2");
            if (cfg.times.empty()) violations.push_back("time.t_values is required");
            break;
        case RunMode::Validate:
            if (cfg.k == 0.0) cfg.k = 4.0;
            if (cfg.samples < 1) violations.push_back("run.samples must be >= 1");
            break;
    }
    if (cfg.N < 1) violations.push_back("run.n must be >= 1");
    if (cfg.jobs < 1) violations.push_back("run.jobs must be >= 1");
    if (cfg.p < 0) violations.push_back("run.p must be >= 0");

    if (!violations.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& v : violations) msg += "\n  - " + v;
        throw ValidationError(msg);
    }
    if (echo)
        for (const auto& [key, kv] : map) (*echo)[key] = kv.value;
    return cfg;
}

} // namespace crossguide
