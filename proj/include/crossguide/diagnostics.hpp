// Solution-quality diagnostics: energy-conservation defects, interface
// matching residuals and boundary residuals.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "crossguide/detail/gauss.hpp"
#include "crossguide/full_field.hpp"
#include "crossguide/quadrant.hpp"

namespace crossguide {

namespace detail {

constexpr double kCutOnTol = 1e-9;

/// Modal powers of one quadrant solution over propagating modes:
/// incident, reflected (Omega1) and transmitted (Omega3).
struct FluxSplit {
    double incident;
    double reflected;
    double transmitted;
};

inline FluxSplit quadrant_flux_split(const QuadrantSolution& sol) {
    const auto& pr = sol.problem;
    const auto& f1 = sol.fam1;
    const auto& f3 = sol.fam3;
    for (int n = 0; n < f1.count(); ++n)
        if (f1.mubar(n).real() > 0.0 && f1.mubar(n).real() < kCutOnTol * pr.k)
            throw DegenerateCutOn("left-channel mode " + std::to_string(n) + " at cut-on");
    FluxSplit fs{0.0, 0.0, 0.0};
    fs.incident = f1.mubar(pr.p).real() * f1.norm(pr.p);
    for (int n = 0; n < f1.count(); ++n)
        if (f1.mubar(n).imag() == 0.0)
            fs.reflected += f1.mubar(n).real() * f1.norm(n) * std::norm(sol.A(n));
    for (int n = 0; n < f3.count(); ++n)
        if (f3.mubar(n).imag() == 0.0)
            fs.transmitted += f3.mubar(n).real() * f3.norm(n) * std::norm(sol.D(n));
    return fs;
}

} // namespace detail

/// |LHS - 1| of the printed conservation identity for the Neumann-Neumann
/// problem with a1 = a2: for p = 0,
///   (|A0|^2 + |D0|^2) + (1/2) sum_{n=1..q} (bb_n/bb_0)(|A_n|^2 + |D_n|^2) = 1,
/// and the (2 bb_0 / bb_p)-weighted form for p != 0.
inline double energy_defect_nn(const QuadrantSolution& sol) {
    const auto& pr = sol.problem;
    if (pr.bc != BCPair::NN) throw NotApplicable("energy_defect_nn requires the NN problem");
    if (pr.geometry.a1 != pr.geometry.a2)
        throw NotApplicable("energy_defect_nn requires a1 = a2");
    const auto& f1 = sol.fam1;
    const int q = propagating_counts(pr.k, pr.geometry.a1).q;
    for (int n = 0; n <= q && n < f1.count(); ++n)
        if (std::abs(f1.mubar(n)) < detail::kCutOnTol * pr.k)
            throw DegenerateCutOn("mode " + std::to_string(n) + " is at cut-on");
    auto term = [&](int n) {
        return std::norm(sol.A(n)) + std::norm(sol.D(n));
    };
    const double bb0 = f1.mubar(0).real();
    const double bbp = f1.mubar(pr.p).real();
    double lhs;
    if (pr.p == 0) {
        lhs = term(0);
        for (int n = 1; n <= q; ++n) lhs += 0.5 * (f1.mubar(n).real() / bb0) * term(n);
    } else {
        lhs = (2.0 * bb0 / bbp) * term(0);
        for (int n = 1; n <= q; ++n) lhs += (f1.mubar(n).real() / bbp) * term(n);
    }
    return std::abs(lhs - 1.0);
}

/// Generalized power balance of a reconstructed full solution:
/// |1 - (reflected + three transmitted channel powers) / incident| with
/// per-mode power weights mubar * ||mode||^2 in each channel, computed from
/// the full-field amplitude combinations (independent of energy_defect_nn's
/// printed form).
inline double flux_defect(const FullSolution& full) {
    const auto& qe = full.even_x;
    const auto& qo = full.odd_x;
    const auto& pr = qe.problem;
    const auto& f1 = qe.fam1;
    const cplx mubar_p = f1.mubar(pr.p);
    if (mubar_p.imag() != 0.0 || mubar_p.real() < detail::kCutOnTol * pr.k)
        throw DegenerateCutOn("incident mode is evanescent or at cut-on");
    // full-channel norms are twice the half-channel ones; the factor cancels
    // between incident and scattered powers, so half-norms are used throughout
    const double p_inc = mubar_p.real() * f1.norm(pr.p);
    double out = 0.0;
    for (int n = 0; n < f1.count(); ++n) {
        if (f1.mubar(n).imag() != 0.0) continue;
        const double w = f1.mubar(n).real() * f1.norm(n);
        out += w * std::norm(0.5 * (qe.A(n) + qo.A(n))); // reflected
        out += w * std::norm(0.5 * (qe.A(n) - qo.A(n))); // right-transmitted
    }
    // up and down channels carry equal power by the y-symmetry of the pair
    const auto& f3e = qe.fam3;
    for (int n = 0; n < f3e.count(); ++n)
        if (f3e.mubar(n).imag() == 0.0)
            out += 2.0 * f3e.mubar(n).real() * f3e.norm(n) * std::norm(0.5 * qe.D(n));
    const auto& f3o = qo.fam3;
    for (int n = 0; n < f3o.count(); ++n)
        if (f3o.mubar(n).imag() == 0.0)
            out += 2.0 * f3o.mubar(n).real() * f3o.norm(n) * std::norm(0.5 * qo.D(n));
    return std::abs(1.0 - out / p_inc);
}

/// Quadrant-level power-balance defect |1 - (reflected + transmitted)/incident|
/// over propagating modes; the building block of flux_defect and the general-
/// geometry counterpart of energy_defect_nn.
inline double quadrant_flux_defect(const QuadrantSolution& sol) {
    const auto fs = detail::quadrant_flux_split(sol);
    return std::abs(1.0 - (fs.reflected + fs.transmitted) / fs.incident);
}

/// Interface and wall residuals of one quadrant solution.
///
/// pressure: relative L2 norm of the trace mismatch.
/// velocity/wall: relative L2 norm of the cumulative normal-flux mismatch
/// along the interface (the integrated form of the derivative condition; the
/// pointwise derivative trace diverges at the re-entrant corners, so its raw
/// L2 norm does not converge with truncation).
struct MatchingResiduals {
    double pressure[2];  ///< x = -b2 and y = b1 interfaces
    double velocity[2];
    double wall[2];      ///< zero branches: x = -b2, y in (a1, b1); y = b1, x in (-b2, -a2)
};

inline MatchingResiduals matching_residuals(const QuadrantSolution& sol) {
    const auto& pr = sol.problem;
    const auto& g = pr.geometry;
    const int npts = 4 * pr.N; // resolves the highest retained mode with margin

    MatchingResiduals out{};
    const double eps = 1e-12; // evaluate a hair inside each region

    // ---- interface x = -b2 -------------------------------------------------
    {
        const auto rule = detail::gauss_legendre(npts, 0.0, g.a1);
        double num_p = 0.0, den_p = 0.0;
        cplx cum_mis = 0.0, cum_ref = 0.0;
        double num_v = 0.0, den_v = 0.0;
        for (int i = 0; i < npts; ++i) {
            const double y = rule.x[i], w = rule.w[i];
            const FieldSample s1 = sample_quadrant(sol, -g.b2 - eps, y);
            const FieldSample s2 = sample_quadrant(sol, -g.b2 + eps, y);
            num_p += w * std::norm(s1.value - s2.value);
            den_p += w * std::norm(s1.value);
            cum_mis += w * (s2.dx - s1.dx);
            cum_ref += w * s1.dx;
            num_v += w * std::norm(cum_mis);
            den_v += w * std::norm(cum_ref);
        }
        out.pressure[0] = std::sqrt(num_p / den_p);
        out.velocity[0] = std::sqrt(num_v / den_v);
        // wall segment y in (a1, b1): the junction-side velocity must vanish.
        // Accumulate from the regular corner at b1 toward the singular one at
        // a1 so the re-entrant corner only affects the tail of the cumulative
        // flux.
        const auto wrule = detail::gauss_legendre(npts, g.a1, g.b1);
        cplx cum_wall = 0.0;
        double num_w = 0.0;
        for (int i = npts - 1; i >= 0; --i) {
            const FieldSample s2 = sample_quadrant(sol, -g.b2 + eps, wrule.x[i]);
            cum_wall += wrule.w[i] * s2.dx;
            num_w += wrule.w[i] * std::norm(cum_wall);
        }
        out.wall[0] = std::sqrt(num_w / den_v);
    }

    // ---- interface y = b1 --------------------------------------------------
    {
        const auto rule = detail::gauss_legendre(npts, -g.a2, 0.0);
        double num_p = 0.0, den_p = 0.0;
        cplx cum_mis = 0.0, cum_ref = 0.0;
        double num_v = 0.0, den_v = 0.0;
        // cumulative flux runs from the regular interface end at x = 0 toward
        // the re-entrant corner at x = -a2
        for (int i = npts - 1; i >= 0; --i) {
            const double x = rule.x[i], w = rule.w[i];
            const FieldSample s3 = sample_quadrant(sol, x, g.b1 + eps);
            const FieldSample s2 = sample_quadrant(sol, x, g.b1 - eps);
            num_p += w * std::norm(s3.value - s2.value);
            den_p += w * std::norm(s3.value);
            cum_mis += w * (s2.dy - s3.dy);
            cum_ref += w * s3.dy;
            num_v += w * std::norm(cum_mis);
            den_v += w * std::norm(cum_ref);
        }
        out.pressure[1] = std::sqrt(num_p / den_p);
        out.velocity[1] = std::sqrt(num_v / den_v);
        const auto wrule = detail::gauss_legendre(npts, -g.b2, -g.a2);
        cplx cum_wall = 0.0;
        double num_w = 0.0;
        for (int i = 0; i < npts; ++i) {
            const FieldSample s2 = sample_quadrant(sol, wrule.x[i], g.b1 - eps);
            cum_wall += wrule.w[i] * s2.dy;
            num_w += wrule.w[i] * std::norm(cum_wall);
        }
        out.wall[1] = std::sqrt(num_w / den_v);
    }
    return out;
}

/// Degeneracy warnings for a problem configuration: cut-ons coinciding with k
/// and near-resonant junction profile denominators.
inline std::vector<std::string> degeneracy_flags(const Geometry& g, double k, BCPair bc,
                                                 double k_tol = 1e-6) {
    std::vector<std::string> flags;
    const ModeFamily fy = neumann_at_y0(bc) ? ModeFamily::Even : ModeFamily::Odd;
    const ModeFamily fx = neumann_at_x0(bc) ? ModeFamily::Even : ModeFamily::Odd;
    const struct {
        ModeFamily f;
        double L;
        const char* label;
    } fams[] = {{fy, g.a1, "a1"}, {fy, g.b1, "b1"}, {fx, g.b2, "b2"}, {fx, g.a2, "a2"}};
    for (const auto& fam : fams)
        if (near_cut_on(fam.f, k, fam.L, k_tol))
            flags.push_back(std::string("cut-on within tolerance on half-width ") + fam.label);
    // junction-profile resonances: cos or sin of mubar * (b2 or b1) near zero
    auto check_res = [&](ModeFamily f, double colL, double denL, bool odd_profile,
                         const char* label) {
        for (int n = 0; n < family_count(f, 64); ++n) {
            const double mu = eigenvalue(f, n, colL);
            if (mu >= k) break; // evanescent profiles cannot resonate
            const double th = axial_wavenumber(k, mu).real() * denL;
            const double d = odd_profile ? std::abs(std::sin(th)) : std::abs(std::cos(th));
            if (d < k_tol)
                flags.push_back(std::string("junction resonance near mode ") +
                                std::to_string(n) + " of " + label);
        }
    };
    check_res(fy, g.b1, g.b2, !neumann_at_x0(bc), "x-series");
    check_res(fx, g.b2, g.b1, !neumann_at_y0(bc), "y-series");
    return flags;
}

struct DiagnosticReport {
    double energy_defect = 0.0; ///< NN identity defect or generalized quadrant flux defect
    double pressure_residuals[2] = {0.0, 0.0};
    double velocity_residuals[2] = {0.0, 0.0};
    double wall_residuals[2] = {0.0, 0.0};
    double condition_estimate = 0.0;
    std::vector<std::string> flags;
};

/// Full diagnostic roll-up for one quadrant solution.
inline DiagnosticReport diagnose(const QuadrantSolution& sol) {
    DiagnosticReport rep;
    const auto& pr = sol.problem;
    rep.flags = degeneracy_flags(pr.geometry, pr.k, pr.bc);
    try {
        rep.energy_defect = (pr.bc == BCPair::NN && pr.geometry.a1 == pr.geometry.a2)
                                ? energy_defect_nn(sol)
                                : quadrant_flux_defect(sol);
    } catch (const DegenerateCutOn& e) {
        rep.flags.push_back(e.what());
        rep.energy_defect = std::numeric_limits<double>::quiet_NaN();
    }
    const MatchingResiduals mr = matching_residuals(sol);
    for (int i = 0; i < 2; ++i) {
        rep.pressure_residuals[i] = mr.pressure[i];
        rep.velocity_residuals[i] = mr.velocity[i];
        rep.wall_residuals[i] = mr.wall[i];
    }
    rep.condition_estimate = sol.condition_estimate;
    return rep;
}

} // namespace crossguide
