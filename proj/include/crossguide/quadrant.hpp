// Assembly and solution of the truncated block systems on the principal
// quadrant (x < 0 < y) for the four artificial-boundary-condition pairs, and
// evaluation of the resulting piecewise modal field.
//
// Region split of the quadrant: Omega1 = left channel half (x <= -b2,
// 0 <= y <= a1), Omega2 = junction quarter (-b2 <= x <= 0, 0 <= y <= b1),
// Omega3 = top channel half (-a2 <= x <= 0, y >= b1).
#pragma once

#include <array>
#include <complex>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "crossguide/detail/stable_trig.hpp"
#include "crossguide/errors.hpp"
#include "crossguide/geometry.hpp"
#include "crossguide/kernels.hpp"

namespace crossguide {

/// (condition at x = 0, condition at y = 0); N = Neumann, D = Dirichlet.
/// The x-condition fixes the x-parity of the full-domain extension, the
/// y-condition the y-parity.
enum class BCPair { NN, DD, ND, DN };

inline const char* to_string(BCPair bc) {
    switch (bc) {
        case BCPair::NN: return "NN";
        case BCPair::DD: return "DD";
        case BCPair::ND: return "ND";
        case BCPair::DN: return "DN";
    }
    return "?";
}

inline BCPair bc_from_string(const std::string& s) {
    if (s == "NN") return BCPair::NN;
    if (s == "DD") return BCPair::DD;
    if (s == "ND") return BCPair::ND;
    if (s == "DN") return BCPair::DN;
    throw ParseError("unknown boundary-condition pair: " + s);
}

inline bool neumann_at_x0(BCPair bc) { return bc == BCPair::NN || bc == BCPair::ND; }
inline bool neumann_at_y0(BCPair bc) { return bc == BCPair::NN || bc == BCPair::DN; }

/// Transverse family of the incident/reflected series (left channel).
inline ModeFamily incident_family(BCPair bc) {
    return neumann_at_y0(bc) ? ModeFamily::Even : ModeFamily::Odd;
}

namespace detail {

/// One mode basis: family, half-width, truncated count, with eigenvalues and
/// axial wavenumbers precomputed at a fixed k.
struct Basis {
    ModeFamily family;
    double L;
    Eigen::VectorXd mu;
    Eigen::VectorXcd mubar;

    static Basis make(ModeFamily family, double L, int count, double k) {
        Basis b{family, L, Eigen::VectorXd(count), Eigen::VectorXcd(count)};
        for (int n = 0; n < count; ++n) {
            b.mu(n) = eigenvalue(family, n, L);
            b.mubar(n) = axial_wavenumber(k, b.mu(n));
        }
        return b;
    }
    int count() const { return static_cast<int>(mu.size()); }
    double f(int n, double t) const {
        return family == ModeFamily::Even ? std::cos(mu(n) * t) : std::sin(mu(n) * t);
    }
    double df(int n, double t) const {
        return family == ModeFamily::Even ? -mu(n) * std::sin(mu(n) * t)
                                          : mu(n) * std::cos(mu(n) * t);
    }
    double norm(int n) const { return diagonal_norm(family, n, L); }
};

} // namespace detail

struct QuadrantProblem {
    Geometry geometry;
    double k;
    BCPair bc;
    int p; ///< incident mode index within the incident family
    int N; ///< truncation; even series run 0..N, odd series 0..N-1
};

/// Validates the problem: k positive, N >= 1, p in range and propagating.
inline QuadrantProblem make_problem(const Geometry& g, double k, BCPair bc, int p, int N) {
    if (!(k > 0.0)) throw ValidationError("k must be positive");
    if (N < 1) throw ValidationError("N must be >= 1");
    const ModeFamily fam = incident_family(bc);
    if (p < 0 || p >= family_count(fam, N))
        throw InvalidIncidentMode("incident mode index out of range for truncation");
    const double mu = eigenvalue(fam, p, g.a1);
    if (mu >= k)
        throw InvalidIncidentMode("incident mode " + std::to_string(p) +
                                  " is not propagating at k = " + std::to_string(k));
    return QuadrantProblem{g, k, bc, p, N};
}

struct AssembledSystem {
    Eigen::MatrixXcd matrix;
    Eigen::VectorXcd rhs;
};

struct QuadrantSolution {
    QuadrantProblem problem;
    Eigen::VectorXcd A; ///< reflected amplitudes (Omega1)
    Eigen::VectorXcd B; ///< junction x-series
    Eigen::VectorXcd C; ///< junction y-series
    Eigen::VectorXcd D; ///< transmitted amplitudes (Omega3)
    double condition_estimate = 0.0;
    double solve_residual = 0.0;

    // bases cached for evaluation
    detail::Basis fam1, famB, famC, fam3;
};

namespace detail {

struct QuadrantBases {
    Basis fam1, famB, famC, fam3;
};

inline QuadrantBases make_bases(const QuadrantProblem& pr) {
    const auto& g = pr.geometry;
    const ModeFamily fy = neumann_at_y0(pr.bc) ? ModeFamily::Even : ModeFamily::Odd;
    const ModeFamily fx = neumann_at_x0(pr.bc) ? ModeFamily::Even : ModeFamily::Odd;
    return QuadrantBases{
        Basis::make(fy, g.a1, family_count(fy, pr.N), pr.k),
        Basis::make(fy, g.b1, family_count(fy, pr.N), pr.k),
        Basis::make(fx, g.b2, family_count(fx, pr.N), pr.k),
        Basis::make(fx, g.a2, family_count(fx, pr.N), pr.k),
    };
}

/// Kernel names entering each block system:
/// row-1 pair couples Omega1 to the junction x- and y-series, row-2 pair
/// couples Omega3 to them.
inline std::array<KernelName, 4> kernel_names(BCPair bc) {
    switch (bc) {
        case BCPair::NN: return {KernelName::H, KernelName::V, KernelName::O, KernelName::E};
        case BCPair::DD: return {KernelName::R, KernelName::Q, KernelName::W, KernelName::K};
        case BCPair::ND: return {KernelName::R, KernelName::Vp, KernelName::Wp, KernelName::E};
        case BCPair::DN: return {KernelName::H, KernelName::Qp, KernelName::Op, KernelName::K};
    }
    throw ValidationError("unknown BCPair");
}

} // namespace detail

/// Builds the 4-block-row square system over the stacked unknowns
/// [A; B; C; D]. Rows project the two pressure-continuity conditions onto the
/// Omega1/Omega3 families and the two velocity conditions onto the junction
/// families.
inline AssembledSystem assemble_system(const QuadrantProblem& pr) {
    using namespace detail;
    const auto& g = pr.geometry;
    const QuadrantBases bs = make_bases(pr);
    const auto [nameB1, nameC1, nameB2, nameC2] = kernel_names(pr.bc);

    const Eigen::MatrixXcd M1B = kernel_table(nameB1, g, pr.k, pr.N).entries;
    const Eigen::MatrixXcd M1C = kernel_table(nameC1, g, pr.k, pr.N).entries;
    const Eigen::MatrixXcd M2B = kernel_table(nameB2, g, pr.k, pr.N).entries;
    const Eigen::MatrixXcd M2C = kernel_table(nameC2, g, pr.k, pr.N).entries;

    const int n1 = bs.fam1.count(), nB = bs.famB.count(), nC = bs.famC.count(),
              n3 = bs.fam3.count();
    const int total = n1 + nB + nC + n3;
    AssembledSystem sys{Eigen::MatrixXcd::Zero(total, total), Eigen::VectorXcd::Zero(total)};
    auto& M = sys.matrix;
    const int cA = 0, cB = n1, cC = n1 + nB, cD = n1 + nB + nC;
    const int r1 = 0, r2 = n1, r3 = n1 + n3, r4 = n1 + n3 + nB;

    // pressure at x = -b2 projected on the Omega1 family
    for (int m = 0; m < n1; ++m) M(r1 + m, cA + m) = -bs.fam1.norm(m);
    M.block(r1, cB, n1, nB) = M1B;
    M.block(r1, cC, n1, nC) = M1C;
    sys.rhs(r1 + pr.p) = bs.fam1.norm(pr.p);

    // pressure at y = b1 projected on the Omega3 family
    M.block(r2, cB, n3, nB) = M2B;
    M.block(r2, cC, n3, nC) = M2C;
    for (int m = 0; m < n3; ++m) M(r2 + m, cD + m) = -bs.fam3.norm(m);

    // normal velocity at x = -b2 projected on the junction x-series family
    for (int m = 0; m < nB; ++m)
        for (int n = 0; n < n1; ++n) M(r3 + m, cA + n) = bs.fam1.mubar(n) * M1B(n, m);
    for (int m = 0; m < nB; ++m) {
        cplx factor;
        try {
            factor = neumann_at_x0(pr.bc) ? detail::tan_factor_neg(bs.famB.mubar(m), g.b2)
                                          : detail::cot_factor_neg(bs.famB.mubar(m), g.b2);
        } catch (const SingularDiagonalFactor& e) {
            throw SingularDiagonalFactor("junction x-series mode " + std::to_string(m) + ": " +
                                         e.what());
        }
        M(r3 + m, cB + m) = factor * diagonal_norm(bs.famB.family, m, g.b1);
    }
    for (int m = 0; m < nB; ++m) sys.rhs(r3 + m) = bs.fam1.mubar(pr.p) * M1B(pr.p, m);

    // normal velocity at y = b1 projected on the junction y-series family
    for (int m = 0; m < nC; ++m) {
        cplx factor;
        try {
            factor = neumann_at_y0(pr.bc) ? detail::tan_factor_pos(bs.famC.mubar(m), g.b1)
                                          : detail::cot_factor_pos(bs.famC.mubar(m), g.b1);
        } catch (const SingularDiagonalFactor& e) {
            throw SingularDiagonalFactor("junction y-series mode " + std::to_string(m) + ": " +
                                         e.what());
        }
        M(r4 + m, cC + m) = factor * diagonal_norm(bs.famC.family, m, g.b2);
    }
    for (int m = 0; m < nC; ++m)
        for (int n = 0; n < n3; ++n) M(r4 + m, cD + n) = -bs.fam3.mubar(n) * M2C(n, m);

    return sys;
}

/// Dense direct solve with a reciprocal-condition estimate and an explicit
/// residual check. Accepted solutions satisfy ||Mx - rhs||/||rhs|| <= 1e-10.
inline QuadrantSolution solve_quadrant(const QuadrantProblem& pr) {
    AssembledSystem sys = assemble_system(pr);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys.matrix);
    const double rcond = lu.rcond();
    const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    Eigen::VectorXcd x = lu.solve(sys.rhs);
    // one step of iterative refinement keeps the residual near round-off
    x += lu.solve(sys.rhs - sys.matrix * x);
    const double residual = (sys.matrix * x - sys.rhs).norm() / sys.rhs.norm();
    if (cond > 1e12)
        throw IllConditioned("quadrant system condition estimate " + std::to_string(cond));
    if (residual > 1e-10)
        throw IllConditioned("quadrant solve residual " + std::to_string(residual));

    detail::QuadrantBases bs = detail::make_bases(pr);
    const int n1 = bs.fam1.count(), nB = bs.famB.count(), nC = bs.famC.count(),
              n3 = bs.fam3.count();
    QuadrantSolution sol{pr,
                         x.segment(0, n1),
                         x.segment(n1, nB),
                         x.segment(n1 + nB, nC),
                         x.segment(n1 + nB + nC, n3),
                         cond,
                         residual,
                         std::move(bs.fam1),
                         std::move(bs.famB),
                         std::move(bs.famC),
                         std::move(bs.fam3)};
    return sol;
}

namespace detail {

inline bool in_quadrant(const Geometry& g, double x, double y) {
    if (x > 0.0 || y < 0.0) return false;
    if (x < -g.b2) return y <= g.a1;       // Omega1 (extends to x = -inf)
    if (y > g.b1) return x >= -g.a2;       // Omega3
    return true;                           // Omega2, including its wall edges
}

} // namespace detail

/// Field value and gradient of the quadrant solution. On shared interfaces
/// the junction-region series is used; either side agrees to the matching
/// residual.
struct FieldSample {
    cplx value;
    cplx dx;
    cplx dy;
};

inline FieldSample sample_quadrant(const QuadrantSolution& sol, double x, double y) {
    const auto& pr = sol.problem;
    const auto& g = pr.geometry;
    if (!detail::in_quadrant(g, x, y))
        throw OutOfDomain("(" + std::to_string(x) + ", " + std::to_string(y) +
                          ") outside the principal quadrant");
    const cplx I(0.0, 1.0);
    FieldSample out{0.0, 0.0, 0.0};
    if (x <= -g.b2 && y <= g.a1) {
        // incident + reflected series; exponents are nonpositive for
        // evanescent modes since x + b2 <= 0
        const auto& f1 = sol.fam1;
        const cplx mp = f1.mubar(pr.p);
        const cplx inc = std::exp(I * mp * (x + g.b2));
        out.value = inc * f1.f(pr.p, y);
        out.dx = I * mp * inc * f1.f(pr.p, y);
        out.dy = inc * f1.df(pr.p, y);
        for (int n = 0; n < f1.count(); ++n) {
            const cplx e = sol.A(n) * std::exp(-I * f1.mubar(n) * (x + g.b2));
            out.value += e * f1.f(n, y);
            out.dx += -I * f1.mubar(n) * e * f1.f(n, y);
            out.dy += e * f1.df(n, y);
        }
        return out;
    }
    if (y >= g.b1 && x >= -g.a2) {
        const auto& f3 = sol.fam3;
        for (int n = 0; n < f3.count(); ++n) {
            const cplx e = sol.D(n) * std::exp(I * f3.mubar(n) * (y - g.b1));
            out.value += e * f3.f(n, x);
            out.dx += e * f3.df(n, x);
            out.dy += I * f3.mubar(n) * e * f3.f(n, x);
        }
        return out;
    }
    // junction region: x-profile series (unit trace at x = -b2) plus
    // y-profile series (unit trace at y = b1)
    const auto& fB = sol.famB;
    const auto& fC = sol.famC;
    const bool nx = neumann_at_x0(pr.bc);
    const bool ny = neumann_at_y0(pr.bc);
    for (int n = 0; n < fB.count(); ++n) {
        // Neumann: cos(mu x)/cos(mu b2); Dirichlet: sin(-mu x)/sin(mu b2)
        const detail::ProfileEval pe = nx ? detail::even_profile(fB.mubar(n), x, g.b2)
                                          : detail::odd_profile(fB.mubar(n), -x, g.b2);
        const cplx dpdx = nx ? pe.slope : -pe.slope;
        out.value += sol.B(n) * pe.value * fB.f(n, y);
        out.dx += sol.B(n) * dpdx * fB.f(n, y);
        out.dy += sol.B(n) * pe.value * fB.df(n, y);
    }
    for (int n = 0; n < fC.count(); ++n) {
        const detail::ProfileEval pe = ny ? detail::even_profile(fC.mubar(n), y, g.b1)
                                          : detail::odd_profile(fC.mubar(n), y, g.b1);
        out.value += sol.C(n) * pe.value * fC.f(n, x);
        out.dx += sol.C(n) * pe.value * fC.df(n, x);
        out.dy += sol.C(n) * pe.slope * fC.f(n, x);
    }
    return out;
}

inline cplx eval_quadrant(const QuadrantSolution& sol, double x, double y) {
    return sample_quadrant(sol, x, y).value;
}

inline std::pair<cplx, cplx> eval_quadrant_gradient(const QuadrantSolution& sol, double x,
                                                    double y) {
    const FieldSample s = sample_quadrant(sol, x, y);
    return {s.dx, s.dy};
}

} // namespace crossguide
