// Batch orchestration of the CLI modes: solve, sweep, smatrix, timedomain,
// validate. Every run writes its artifacts plus a manifest (resolved config,
// tool version, wall time) into the output directory.
#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "crossguide/config.hpp"
#include "crossguide/detail/parallel.hpp"
#include "crossguide/io.hpp"
#include "crossguide/smatrix.hpp"
#include "crossguide/time_domain.hpp"
#include "crossguide/version.hpp"

namespace crossguide {

namespace detail {

/// Masked grid of the quadrant field on [-(b2+ext), 0] x [0, b1+ext].
inline FieldGrid sample_quadrant_grid(const QuadrantSolution& sol, const GridSpec& spec) {
    const auto& g = sol.problem.geometry;
    const double ext =
        spec.channel_length > 0.0 ? spec.channel_length : 2.0 * std::max(g.b1, g.b2);
    FieldGrid grid;
    grid.x.setLinSpaced(spec.nx, -(g.b2 + ext), 0.0);
    grid.y.setLinSpaced(spec.ny, 0.0, g.b1 + ext);
    grid.values.setZero(spec.ny, spec.nx);
    grid.mask.setConstant(spec.ny, spec.nx, false);
    for (int i = 0; i < spec.ny; ++i)
        for (int j = 0; j < spec.nx; ++j)
            if (in_quadrant(g, grid.x(j), grid.y(i))) {
                grid.mask(i, j) = true;
                grid.values(i, j) = eval_quadrant(sol, grid.x(j), grid.y(i));
            }
    return grid;
}

inline std::map<std::string, std::string> grid_header(const Geometry& g, double k, int p, int N,
                                                      const std::string& label) {
    return {{"a1", io::fmt(g.a1)}, {"a2", io::fmt(g.a2)}, {"b1", io::fmt(g.b1)},
            {"b2", io::fmt(g.b2)}, {"k", io::fmt(k)},     {"p", std::to_string(p)},
            {"N", std::to_string(N)}, {"case", label}};
}

} // namespace detail

struct RunContext {
    RunConfig cfg;
    std::map<std::string, std::string> config_echo;
    std::vector<std::string> override_notes;
};

namespace detail {

inline void write_manifest(const RunContext& ctx, double wall_seconds,
                           const std::vector<std::string>& notes) {
    io::json j{{"tool", "crossguide"},
               {"version", kVersion},
               {"mode", to_string(ctx.cfg.mode)},
               {"config", ctx.config_echo},
               {"override_notes", ctx.override_notes},
               {"notes", notes},
               {"wall_time_seconds", wall_seconds}};
    auto out = io::open_out(ctx.cfg.out_dir / "manifest.json");
    out << j.dump(2) << "\n";
}

inline SpectrumSpec load_spectrum(const RunConfig& cfg) {
    if (cfg.spectrum_file.empty()) return cfg.spectrum;
    auto in = io::open_in(cfg.spectrum_file);
    std::vector<double> grid;
    std::vector<cplx> vals;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        double k, re, im = 0.0;
        const int got = std::sscanf(line.c_str(), "%lf,%lf,%lf", &k, &re, &im);
        if (got < 2) throw ParseError("spectrum file: expected k,re[,im] per line");
        grid.push_back(k);
        vals.push_back(cplx(re, im));
    }
    return SpectrumSpec::tabulated(std::move(grid), std::move(vals));
}

inline int run_solve(const RunConfig& cfg, std::vector<std::string>& notes) {
    std::vector<BCPair> cases =
        cfg.bc ? std::vector<BCPair>{*cfg.bc}
               : std::vector<BCPair>{BCPair::NN, BCPair::DD, BCPair::ND, BCPair::DN};
    io::json energy = io::json::object();
    for (const BCPair bc : cases) {
        const int p = cfg.incident_mode(bc);
        const QuadrantSolution sol =
            solve_quadrant(make_problem(cfg.geometry, cfg.k, bc, p, cfg.N));
        const std::string label = to_string(bc);
        {
            auto out = io::open_out(cfg.out_dir / ("coefficients_" + label + ".csv"));
            io::write_coefficients(out, sol);
        }
        {
            auto out = io::open_out(cfg.out_dir / ("field_" + label + ".csv"));
            io::write_field_grid(out, sample_quadrant_grid(sol, cfg.grid),
                                 grid_header(cfg.geometry, cfg.k, p, cfg.N, label));
        }
        const DiagnosticReport rep = diagnose(sol);
        energy[label] = io::to_json(rep);
        for (const auto& f : rep.flags) notes.push_back(label + ": " + f);
    }
    auto out = io::open_out(cfg.out_dir / "diagnostics.json");
    out << energy.dump(2) << "\n";
    return 0;
}

inline int run_sweep(const RunConfig& cfg, std::vector<std::string>& notes) {
    std::vector<BCPair> cases =
        cfg.bc ? std::vector<BCPair>{*cfg.bc}
               : std::vector<BCPair>{BCPair::NN, BCPair::DD, BCPair::ND, BCPair::DN};
    const int nk = cfg.n_k;
    std::vector<double> ks(nk);
    for (int i = 0; i < nk; ++i)
        ks[i] = cfg.k_min + (cfg.k_max - cfg.k_min) * i / static_cast<double>(nk - 1);
    const bool square = cfg.geometry.a1 == cfg.geometry.a2 && cfg.geometry.b1 == cfg.geometry.b2;

    struct Row {
        std::string text;
        std::string smatrix_json;
        bool hard_failure = false;
    };
    std::vector<std::vector<Row>> rows(nk);
    detail::parallel_for(nk, cfg.jobs, [&](int i) {
        const double k = ks[i];
        for (const BCPair bc : cases) {
            std::ostringstream line;
            line << io::fmt(k) << ',' << to_string(bc);
            Row row;
            try {
                const int p = cfg.incident_mode(bc);
                const QuadrantSolution sol =
                    solve_quadrant(make_problem(cfg.geometry, k, bc, p, cfg.N));
                const DiagnosticReport rep = diagnose(sol);
                line << ',' << io::fmt(rep.energy_defect);
                for (double r : rep.pressure_residuals) line << ',' << io::fmt(r);
                for (double r : rep.velocity_residuals) line << ',' << io::fmt(r);
                line << ',' << io::fmt(rep.condition_estimate);
                std::string flags;
                for (const auto& f : rep.flags) flags += (flags.empty() ? "" : "|") + f;
                line << ',' << flags;
            } catch (const DegenerateCutOn& e) {
                line << ",nan,nan,nan,nan,nan,nan," << e.what();
            } catch (const SingularDiagonalFactor& e) {
                line << ",nan,nan,nan,nan,nan,nan," << e.what();
            } catch (const SingularPrefactor& e) {
                line << ",nan,nan,nan,nan,nan,nan," << e.what();
            } catch (const InvalidIncidentMode& e) {
                line << ",nan,nan,nan,nan,nan,nan," << e.what();
            } catch (const Error& e) {
                line << ",nan,nan,nan,nan,nan,nan,error: " << e.what();
                row.hard_failure = true;
            }
            row.text = line.str();
            rows[i].push_back(std::move(row));
        }
        if (square) {
            Row srow;
            try {
                const SMatrix S = build_smatrix(cfg.geometry, k, cfg.N);
                srow.smatrix_json = io::to_json(S).dump(2);
            } catch (const Error&) {
                // flagged in the diagnostics rows; no matrix for this k
            }
            rows[i].push_back(std::move(srow));
        }
    });

    auto table = io::open_out(cfg.out_dir / "sweep.csv");
    table << "# columns = k,bc,energy_defect,pressure_res_1,pressure_res_2,"
             "velocity_res_1,velocity_res_2,condition,flags\n";
    int failures = 0;
    for (int i = 0; i < nk; ++i)
        for (const auto& row : rows[i]) {
            if (!row.text.empty()) table << row.text << "\n";
            if (row.hard_failure) ++failures;
            if (!row.smatrix_json.empty()) {
                char name[48];
                std::snprintf(name, sizeof name, "smatrix_%04d.json", i);
                auto out = io::open_out(cfg.out_dir / name);
                out << row.smatrix_json << "\n";
            }
        }
    if (failures > 0) {
        notes.push_back(std::to_string(failures) + " sweep points failed to solve");
        return 2;
    }
    return 0;
}

inline int run_smatrix(const RunConfig& cfg, std::vector<std::string>&) {
    const SMatrix S = build_smatrix(cfg.geometry, cfg.k, cfg.N, cfg.jobs);
    {
        auto out = io::open_out(cfg.out_dir / "smatrix.json");
        out << io::to_json(S).dump(2) << "\n";
    }
    {
        auto out = io::open_out(cfg.out_dir / "smatrix_flux_normalized.json");
        out << io::to_json(flux_normalize(S)).dump(2) << "\n";
    }
    auto out = io::open_out(cfg.out_dir / "smatrix_flat.csv");
    io::write_smatrix_flat(out, S);
    return 0;
}

inline int run_timedomain(const RunConfig& cfg, std::vector<std::string>& notes) {
    const auto& g = cfg.geometry;
    // evaluation points = unmasked nodes of the rendering lattice
    const double ext =
        cfg.grid.channel_length > 0.0 ? cfg.grid.channel_length : 2.0 * std::max(g.b1, g.b2);
    const double X = g.b2 + ext, Y = g.b1 + ext;
    std::vector<TimePoint> points;
    for (int i = 0; i < cfg.grid.ny; ++i)
        for (int j = 0; j < cfg.grid.nx; ++j) {
            const double x = -X + 2.0 * X * j / (cfg.grid.nx - 1);
            const double y = -Y + 2.0 * Y * i / (cfg.grid.ny - 1);
            if (in_domain(g, x, y)) points.push_back({x, y});
        }
    const QuadratureGrid grid = build_quadrature(cfg.k_max, cfg.n_k);
    const TimeSynthesis ts =
        precompute_field_matrix(g, cfg.parity, cfg.p, cfg.N, std::move(points), grid, cfg.jobs);
    const SpectrumSpec spectrum = load_spectrum(cfg);
    const auto frames = snapshot_series(ts, spectrum, cfg.times);
    auto header = grid_header(g, cfg.k_max, cfg.p, cfg.N,
                              cfg.parity == ModeFamily::Even ? "even" : "odd");
    io::write_frames(cfg.out_dir, ts, cfg.times, frames, header);
    io::json meta{{"n_k", cfg.n_k},
                  {"k_max", cfg.k_max},
                  {"skipped_columns", ts.skipped_columns},
                  {"nudged_columns", ts.nudged_columns},
                  {"points", ts.points.size()},
                  {"frames", frames.size()}};
    auto out = io::open_out(cfg.out_dir / "synthesis.json");
    out << meta.dump(2) << "\n";
    if (!ts.skipped_columns.empty())
        notes.push_back(std::to_string(ts.skipped_columns.size()) +
                        " quadrature nodes below the incident-mode cut-on were zeroed");
    return 0;
}

inline int run_validate(const RunConfig& cfg, std::vector<std::string>& notes) {
    io::json report = io::json::object();
    bool all_pass = true;
    auto check = [&](const std::string& name, bool pass, double value, double tol) {
        std::cout << (pass ? "PASS" : "FAIL") << "  " << name << "  value " << value << "  tol "
                  << tol << "\n";
        report[name] = io::json{{"pass", pass}, {"value", value}, {"tolerance", tol}};
        all_pass = all_pass && pass;
    };

    // 1. closed-form kernels against the quadrature oracle on randomized inputs
    {
        std::mt19937 rng(cfg.seed);
        std::uniform_real_distribution<double> uhw(0.5, 4.0), uext(0.0, 3.0), uk(0.3, 8.0);
        std::uniform_int_distribution<int> uidx(0, 12);
        const KernelName names[] = {KernelName::H,  KernelName::V,  KernelName::O,
                                    KernelName::E,  KernelName::R,  KernelName::Q,
                                    KernelName::W,  KernelName::K,  KernelName::Vp,
                                    KernelName::Wp, KernelName::Qp, KernelName::Op};
        double worst = 0.0;
        int done = 0;
        while (done < cfg.samples) {
            const double a1 = uhw(rng), a2 = uhw(rng);
            const Geometry g = validate_geometry(a1, a2, a1 + uext(rng), a2 + uext(rng));
            const double k = uk(rng);
            const int m = uidx(rng), n = uidx(rng);
            for (const KernelName name : names) {
                try {
                    const cplx cf = kernel(name, m, n, g, k);
                    const cplx orc = quadrature_oracle(name, m, n, g, k);
                    worst = std::max(worst, std::abs(cf - orc) / (1.0 + std::abs(orc)));
                } catch (const SingularPrefactor&) {
                    // resonant draw; both paths reject it
                }
                ++done;
            }
        }
        check("kernel_vs_oracle_max_rel_error", worst <= 1e-9, worst, 1e-9);
    }

    // 2. energy defects of the four sub-problems at the configured k
    for (const BCPair bc : {BCPair::NN, BCPair::DD, BCPair::ND, BCPair::DN}) {
        const ModeFamily fam = incident_family(bc);
        int p = cfg.incident_mode(bc);
        if (eigenvalue(fam, p, cfg.geometry.a1) >= cfg.k) p = 0;
        if (eigenvalue(fam, p, cfg.geometry.a1) >= cfg.k) continue; // nothing propagates
        const auto sol = solve_quadrant(make_problem(cfg.geometry, cfg.k, bc, p, cfg.N));
        const double defect = quadrant_flux_defect(sol);
        check(std::string("energy_defect_") + to_string(bc), defect <= 1e-4, defect, 1e-4);
    }

    // 3. scattering-matrix physics on the square junction
    if (cfg.geometry.a1 == cfg.geometry.a2 && cfg.geometry.b1 == cfg.geometry.b2) {
        const SMatrix S = build_smatrix(cfg.geometry, cfg.k, cfg.N, cfg.jobs);
        const Eigen::MatrixXcd D = flux_normalize(S).dense();
        const double uni =
            (D.adjoint() * D - Eigen::MatrixXcd::Identity(D.rows(), D.cols())).norm();
        const double rec = (D - D.transpose()).norm();
        check("smatrix_unitarity_defect", uni <= 1e-3, uni, 1e-3);
        check("smatrix_reciprocity_defect", rec <= 1e-3, rec, 1e-3);
    } else {
        notes.push_back("geometry not square: scattering-matrix checks skipped");
    }

    // 4. transpose-geometry duality in the single-propagating-mode regime
    {
        const auto& g = cfg.geometry;
        const double amax = std::max(g.a1, g.a2);
        const double kd = 0.8 * pi / amax;
        const bool single_mode = kd > pi / (2.0 * g.a1) && kd > pi / (2.0 * g.a2) &&
                                 kd < pi / g.a1 && kd < pi / g.a2 &&
                                 kd < 3.0 * pi / (2.0 * amax);
        if (single_mode) {
            const Geometry gt = validate_geometry(g.a2, g.a1, g.b2, g.b1);
            double worst = 0.0;
            for (const BCPair bc : {BCPair::NN, BCPair::DD, BCPair::ND, BCPair::DN}) {
                const BCPair bct = bc == BCPair::ND   ? BCPair::DN
                                   : bc == BCPair::DN ? BCPair::ND
                                                      : bc;
                const auto f = detail::quadrant_flux_split(
                    solve_quadrant(make_problem(g, kd, bc, 0, cfg.N)));
                const auto ft = detail::quadrant_flux_split(
                    solve_quadrant(make_problem(gt, kd, bct, 0, cfg.N)));
                worst = std::max(worst,
                                 std::abs(f.reflected / f.incident - ft.reflected / ft.incident));
            }
            check("transpose_duality_energy_split", worst <= 1e-10, worst, 1e-10);
        } else {
            notes.push_back("no single-mode k for this aspect ratio: duality check skipped");
        }
    }

    auto out = io::open_out(cfg.out_dir / "validate_report.json");
    out << report.dump(2) << "\n";
    return all_pass ? 0 : 2;
}

} // namespace detail

/// Executes a validated configuration. Returns the process exit code:
/// 0 success, 2 numerical failure (I/O and config errors are thrown).
inline int run(const RunContext& ctx) {
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(ctx.cfg.out_dir);
    std::vector<std::string> notes = ctx.override_notes;
    int rc = 0;
    switch (ctx.cfg.mode) {
        case RunMode::Solve: rc = detail::run_solve(ctx.cfg, notes); break;
        case RunMode::Sweep: rc = detail::run_sweep(ctx.cfg, notes); break;
        case RunMode::SMatrix: rc = detail::run_smatrix(ctx.cfg, notes); break;
        case RunMode::TimeDomain: rc = detail::run_timedomain(ctx.cfg, notes); break;
        case RunMode::Validate: rc = detail::run_validate(ctx.cfg, notes); break;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail::write_manifest(ctx, wall, notes);
    return rc;
}

} // namespace crossguide
