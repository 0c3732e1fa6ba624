// Time-domain pulse synthesis: trapezoidal quadrature over the frequency
// axis turns the continuous superposition of Helmholtz solutions into a
// matrix multiplication. The frequency-domain field matrix is precomputed
// once and reused for any number of spectra and times.
#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crossguide/detail/parallel.hpp"
#include "crossguide/full_field.hpp"

namespace crossguide {

/// Incident pulse spectrum f̂(k).
struct SpectrumSpec {
    enum class Kind { Gaussian, Tabulated };
    Kind kind = Kind::Gaussian;
    // Gaussian: scale * exp(-rate * (k - center)^2)
    double center = 3.0;
    double rate = 8.0;
    double scale = 1.0;
    // Tabulated: linear interpolation on a strictly increasing grid, zero outside
    std::vector<double> k_grid;
    std::vector<cplx> values;

    static SpectrumSpec gaussian(double center, double rate, double scale) {
        if (rate <= 0.0) throw ValidationError("spectrum decay rate must be positive");
        SpectrumSpec s;
        s.kind = Kind::Gaussian;
        s.center = center;
        s.rate = rate;
        s.scale = scale;
        return s;
    }
    static SpectrumSpec tabulated(std::vector<double> grid, std::vector<cplx> vals) {
        if (grid.size() != vals.size() || grid.empty())
            throw ValidationError("tabulated spectrum needs matching nonempty grid and values");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (grid[i] < 0.0) throw ValidationError("tabulated spectrum grid must be nonnegative");
            if (i > 0 && grid[i] <= grid[i - 1])
                throw ValidationError("tabulated spectrum grid must be strictly increasing");
        }
        SpectrumSpec s;
        s.kind = Kind::Tabulated;
        s.k_grid = std::move(grid);
        s.values = std::move(vals);
        return s;
    }

    cplx eval(double k) const {
        if (kind == Kind::Gaussian) {
            const double d = k - center;
            return cplx(scale * std::exp(-rate * d * d), 0.0);
        }
        if (k <= k_grid.front() || k >= k_grid.back()) {
            if (k == k_grid.front()) return values.front();
            if (k == k_grid.back()) return values.back();
            return 0.0;
        }
        const auto it = std::upper_bound(k_grid.begin(), k_grid.end(), k);
        const std::size_t j = static_cast<std::size_t>(it - k_grid.begin());
        const double t = (k - k_grid[j - 1]) / (k_grid[j] - k_grid[j - 1]);
        return values[j - 1] + t * (values[j] - values[j - 1]);
    }
};

/// Uniform trapezoidal grid k_j = j*dk, j = 1..N_k (k = 0 excluded), with
/// endpoint weights dk/2 and interior weights dk.
struct QuadratureGrid {
    Eigen::VectorXd k;
    Eigen::VectorXd w;
    double dk = 0.0;
};

inline QuadratureGrid build_quadrature(double k_max, int n_k) {
    if (n_k < 2) throw ValidationError("quadrature needs at least two nodes");
    if (!(k_max > 0.0)) throw ValidationError("k_max must be positive");
    QuadratureGrid grid;
    grid.dk = k_max / n_k;
    grid.k.resize(n_k);
    grid.w.resize(n_k);
    for (int j = 0; j < n_k; ++j) {
        grid.k(j) = (j + 1) * grid.dk;
        grid.w(j) = (j == 0 || j == n_k - 1) ? grid.dk / 2.0 : grid.dk;
    }
    return grid;
}

struct TimePoint {
    double x;
    double y;
};

/// Precomputed frequency-domain fields: field_matrix(i, j) = phi(x_i, y_i, k_j)
/// for the fixed incidence (parity, p) from x = -inf.
struct TimeSynthesis {
    Geometry geometry{};
    ModeFamily parity = ModeFamily::Even;
    int p = 0;
    int N = 0;
    std::vector<TimePoint> points;
    QuadratureGrid grid;
    Eigen::MatrixXcd field_matrix;
    std::vector<int> skipped_columns; ///< k_j below the incident-mode cut-on (columns zero)
    std::vector<int> nudged_columns;  ///< k_j moved off an exact cut-on by +1e-8*dk
};

/// Solves the full scattering problem at every quadrature node and evaluates
/// it at the requested points. Columns whose k leaves the incident mode
/// evanescent are stored as zero (no incoming wave exists there) and listed
/// in skipped_columns. Work is parallel over frequencies.
inline TimeSynthesis precompute_field_matrix(const Geometry& g, ModeFamily parity, int p, int N,
                                             std::vector<TimePoint> points,
                                             const QuadratureGrid& grid, int jobs = 1) {
    TimeSynthesis ts;
    ts.geometry = g;
    ts.parity = parity;
    ts.p = p;
    ts.N = N;
    ts.points = std::move(points);
    ts.grid = grid;
    const int n_x = static_cast<int>(ts.points.size());
    const int n_k = static_cast<int>(grid.k.size());
    ts.field_matrix.setZero(n_x, n_k);

    const double mu_inc = eigenvalue(parity, p, g.a1);
    std::vector<int> skipped(n_k, 0), nudged(n_k, 0);
    std::vector<std::string> errors(n_k);
    detail::parallel_for(n_k, jobs, [&](int j) {
        double k = grid.k(j);
        if (mu_inc >= k) {
            skipped[j] = 1;
            return;
        }
        bool hit = false;
        for (const double L : {g.a1, g.a2, g.b1, g.b2})
            if (near_cut_on(ModeFamily::Even, k, L) || near_cut_on(ModeFamily::Odd, k, L))
                hit = true;
        if (hit) {
            k += 1e-8 * grid.dk;
            nudged[j] = 1;
        }
        try {
            const FullSolution full = solve_full(g, k, parity, p, N);
            for (int i = 0; i < n_x; ++i)
                ts.field_matrix(i, j) = reconstruct(full, ts.points[i].x, ts.points[i].y);
        } catch (const Error& e) {
            errors[j] = std::string("k index ") + std::to_string(j) + ": " + e.what();
        }
    });
    for (int j = 0; j < n_k; ++j)
        if (!errors[j].empty()) throw Error(errors[j]);
    for (int j = 0; j < n_k; ++j) {
        if (skipped[j]) ts.skipped_columns.push_back(j);
        if (nudged[j]) ts.nudged_columns.push_back(j);
    }
    return ts;
}

/// Samples a spectrum on the synthesis grid.
inline Eigen::VectorXcd sample_spectrum(const TimeSynthesis& ts, const SpectrumSpec& spec) {
    Eigen::VectorXcd f(ts.grid.k.size());
    for (int j = 0; j < f.size(); ++j) f(j) = spec.eval(ts.grid.k(j));
    return f;
}

/// Re{ [phi] Diag(w_j e^{-i k_j t}) f̂ } as a real vector over the points.
inline Eigen::VectorXd synthesize(const TimeSynthesis& ts, const Eigen::VectorXcd& spectrum,
                                  double t) {
    if (spectrum.size() != ts.grid.k.size())
        throw DimensionMismatch("spectrum sample count does not match the quadrature grid");
    const cplx I(0.0, 1.0);
    Eigen::VectorXcd weights(ts.grid.k.size());
    for (int j = 0; j < weights.size(); ++j)
        weights(j) = ts.grid.w(j) * std::exp(-I * ts.grid.k(j) * t) * spectrum(j);
    return (ts.field_matrix * weights).real();
}

inline Eigen::VectorXd synthesize(const TimeSynthesis& ts, const SpectrumSpec& spec, double t) {
    return synthesize(ts, sample_spectrum(ts, spec), t);
}

/// One frame per time value.
inline std::vector<Eigen::VectorXd> snapshot_series(const TimeSynthesis& ts,
                                                    const SpectrumSpec& spec,
                                                    const std::vector<double>& times) {
    const Eigen::VectorXcd f = sample_spectrum(ts, spec);
    std::vector<Eigen::VectorXd> frames;
    frames.reserve(times.size());
    for (const double t : times) frames.push_back(synthesize(ts, f, t));
    return frames;
}

} // namespace crossguide
