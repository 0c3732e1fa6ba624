// Text serialization of grids, coefficient sets, kernel tables, diagnostic
// reports and scattering matrices. All numeric output keeps full double
// precision (17 significant digits) so downstream comparisons stay exact.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crossguide/diagnostics.hpp"
#include "crossguide/full_field.hpp"
#include "crossguide/kernels.hpp"
#include "crossguide/smatrix.hpp"
#include "crossguide/time_domain.hpp"

namespace crossguide::io {

using json = nlohmann::json;

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

// ---- field grids -------------------------------------------------------------

/// Header lines "# key = value", then one "x,y,Re,Im" row per unmasked point.
inline void write_field_grid(std::ostream& out, const FieldGrid& grid,
                             const std::map<std::string, std::string>& header) {
    for (const auto& [key, value] : header) out << "# " << key << " = " << value << "\n";
    out << "# columns = x,y,re,im\n";
    for (int i = 0; i < grid.y.size(); ++i)
        for (int j = 0; j < grid.x.size(); ++j)
            if (grid.mask(i, j))
                out << fmt(grid.x(j)) << ',' << fmt(grid.y(i)) << ','
                    << fmt(grid.values(i, j).real()) << ',' << fmt(grid.values(i, j).imag())
                    << "\n";
}

struct GridRow {
    double x, y;
    cplx value;
};

struct ParsedGrid {
    std::map<std::string, std::string> header;
    std::vector<GridRow> rows;
};

inline ParsedGrid read_field_grid(std::istream& in) {
    ParsedGrid g;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                auto trim = [](std::string s) {
                    const auto b = s.find_first_not_of(" \t#");
                    const auto e = s.find_last_not_of(" \t\r");
                    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
                };
                g.header[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
            }
            continue;
        }
        GridRow row{};
        double re, im;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &row.x, &row.y, &re, &im) != 4)
            throw ParseError("grid line " + std::to_string(lineno) + ": expected x,y,re,im");
        row.value = cplx(re, im);
        g.rows.push_back(row);
    }
    return g;
}

// ---- coefficient dumps --------------------------------------------------------

/// Columns: series in {A,B,C,D}, mode index, Re, Im.
inline void write_coefficients(std::ostream& out, const QuadrantSolution& sol) {
    out << "# bc = " << to_string(sol.problem.bc) << "\n";
    out << "# columns = series,n,re,im\n";
    const struct {
        char label;
        const Eigen::VectorXcd& v;
    } series[] = {{'A', sol.A}, {'B', sol.B}, {'C', sol.C}, {'D', sol.D}};
    for (const auto& s : series)
        for (int n = 0; n < s.v.size(); ++n)
            out << s.label << ',' << n << ',' << fmt(s.v(n).real()) << ',' << fmt(s.v(n).imag())
                << "\n";
}

struct CoefficientRow {
    char series;
    int n;
    cplx value;
};

inline std::vector<CoefficientRow> read_coefficients(std::istream& in) {
    std::vector<CoefficientRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        char s;
        int n;
        double re, im;
        if (std::sscanf(line.c_str(), "%c,%d,%lf,%lf", &s, &n, &re, &im) != 4)
            throw ParseError("coefficient line " + std::to_string(lineno));
        rows.push_back({s, n, cplx(re, im)});
    }
    return rows;
}

/// Debug dump of a kernel table, one "m,n,re,im" row per entry.
inline void write_kernel_table(std::ostream& out, const KernelTable& table) {
    out << "# kernel = " << to_string(table.name) << "\n";
    out << "# k = " << fmt(table.k) << "\n";
    out << "# columns = m,n,re,im\n";
    for (int m = 0; m < table.entries.rows(); ++m)
        for (int n = 0; n < table.entries.cols(); ++n)
            out << m << ',' << n << ',' << fmt(table.entries(m, n).real()) << ','
                << fmt(table.entries(m, n).imag()) << "\n";
}

// ---- JSON reports --------------------------------------------------------------

inline json to_json(const DiagnosticReport& rep) {
    return json{{"energy_defect", rep.energy_defect},
                {"pressure_residuals", {rep.pressure_residuals[0], rep.pressure_residuals[1]}},
                {"velocity_residuals", {rep.velocity_residuals[0], rep.velocity_residuals[1]}},
                {"wall_residuals", {rep.wall_residuals[0], rep.wall_residuals[1]}},
                {"condition_estimate", rep.condition_estimate},
                {"flags", rep.flags}};
}

inline json to_json(const Geometry& g) {
    return json{{"a1", g.a1}, {"a2", g.a2}, {"b1", g.b1}, {"b2", g.b2}};
}

inline std::string slot_name(int slot) {
    static const char* channel[] = {"left", "up", "right", "down"};
    return std::string(channel[slot / 2]) + (slot % 2 == 0 ? "_even" : "_odd");
}

inline json to_json(const SMatrix& S) {
    json blocks = json::object();
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            const auto& B = S.blocks[i][j];
            json re = json::array(), im = json::array();
            for (int r = 0; r < B.rows(); ++r) {
                json rre = json::array(), rim = json::array();
                for (int c = 0; c < B.cols(); ++c) {
                    rre.push_back(B(r, c).real());
                    rim.push_back(B(r, c).imag());
                }
                re.push_back(rre);
                im.push_back(rim);
            }
            blocks[slot_name(i) + "<-" + slot_name(j)] = json{{"re", re}, {"im", im}};
        }
    return json{{"k", S.k},
                {"geometry", to_json(S.geometry)},
                {"q", S.q},
                {"q_tilde", S.q_tilde},
                {"n_even", S.n_even},
                {"n_odd", S.n_odd},
                {"truncation", S.truncation},
                {"normalization",
                 S.normalization == Normalization::RawAmplitude ? "raw_amplitude"
                                                                : "flux_normalized"},
                {"blocks", blocks}};
}

/// Flattened dump for plotting sweeps: out_slot,in_slot,row,col,re,im.
inline void write_smatrix_flat(std::ostream& out, const SMatrix& S) {
    out << "# k = " << fmt(S.k) << "\n";
    out << "# columns = out_slot,in_slot,row,col,re,im\n";
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            for (int r = 0; r < S.blocks[i][j].rows(); ++r)
                for (int c = 0; c < S.blocks[i][j].cols(); ++c)
                    out << slot_name(i) << ',' << slot_name(j) << ',' << r << ',' << c << ','
                        << fmt(S.blocks[i][j](r, c).real()) << ','
                        << fmt(S.blocks[i][j](r, c).imag()) << "\n";
}

// ---- time-domain frames ----------------------------------------------------------

struct FrameRow {
    double x, y, value;
};

struct ParsedFrame {
    std::map<std::string, std::string> header;
    std::vector<FrameRow> rows;
};

inline ParsedFrame read_frame(std::istream& in) {
    ParsedFrame f;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                auto trim = [](std::string s) {
                    const auto b = s.find_first_not_of(" \t#");
                    const auto e = s.find_last_not_of(" \t\r");
                    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
                };
                f.header[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
            }
            continue;
        }
        FrameRow row{};
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &row.x, &row.y, &row.value) != 3)
            throw ParseError("frame line " + std::to_string(lineno) + ": expected x,y,value");
        f.rows.push_back(row);
    }
    return f;
}

/// One delimited-text frame per time value ("x,y,value" rows) plus an index
/// file listing the frames in order.
inline void write_frames(const std::filesystem::path& dir, const TimeSynthesis& ts,
                         const std::vector<double>& times,
                         const std::vector<Eigen::VectorXd>& frames,
                         const std::map<std::string, std::string>& header) {
    if (times.size() != frames.size()) throw DimensionMismatch("times/frames size mismatch");
    auto index = open_out(dir / "frames_index.txt");
    for (std::size_t f = 0; f < frames.size(); ++f) {
        char name[64];
        std::snprintf(name, sizeof name, "frame_%04zu.csv", f);
        auto out = open_out(dir / name);
        out << "# t = " << fmt(times[f]) << "\n";
        for (const auto& [key, value] : header) out << "# " << key << " = " << value << "\n";
        out << "# columns = x,y,value\n";
        for (int i = 0; i < frames[f].size(); ++i)
            out << fmt(ts.points[i].x) << ',' << fmt(ts.points[i].y) << ','
                << fmt(frames[f](i)) << "\n";
        index << name << ' ' << fmt(times[f]) << "\n";
    }
}

} // namespace crossguide::io
