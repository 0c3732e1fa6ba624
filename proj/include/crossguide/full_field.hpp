// Reconstruction of the scattering solution on the full four-channel domain
// from a symmetric/antisymmetric pair of quadrant solutions, plus an
// independent closed-form evaluator used as a cross-check and masked grid
// sampling.
#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "crossguide/quadrant.hpp"

namespace crossguide {

/// Pair of quadrant solutions reconstructing one full-domain scattering
/// solution for a unit incident mode from x = -inf.
/// Even incident parity (cosine mode) pairs the x-even problem NN with the
/// x-odd problem DN; odd parity (sine mode) pairs ND with DD.
struct FullSolution {
    ModeFamily parity;
    QuadrantSolution even_x; ///< NN (even parity) or ND (odd parity)
    QuadrantSolution odd_x;  ///< DN (even parity) or DD (odd parity)

    const Geometry& geometry() const { return even_x.problem.geometry; }
    double k() const { return even_x.problem.k; }
    int p() const { return even_x.problem.p; }
    int truncation() const { return even_x.problem.N; }
};

inline FullSolution make_full_solution(ModeFamily parity, QuadrantSolution even_x,
                                       QuadrantSolution odd_x) {
    const BCPair want_even = parity == ModeFamily::Even ? BCPair::NN : BCPair::ND;
    const BCPair want_odd = parity == ModeFamily::Even ? BCPair::DN : BCPair::DD;
    if (even_x.problem.bc != want_even || odd_x.problem.bc != want_odd)
        throw ValidationError("quadrant pair does not match the requested parity");
    const auto& pa = even_x.problem;
    const auto& pb = odd_x.problem;
    const auto close = [](double u, double v) { return u == v; };
    if (!close(pa.k, pb.k) || pa.p != pb.p || pa.N != pb.N ||
        !close(pa.geometry.a1, pb.geometry.a1) || !close(pa.geometry.a2, pb.geometry.a2) ||
        !close(pa.geometry.b1, pb.geometry.b1) || !close(pa.geometry.b2, pb.geometry.b2))
        throw ValidationError("quadrant pair must share geometry, k, p and N");
    return FullSolution{parity, std::move(even_x), std::move(odd_x)};
}

/// Solves both quadrant problems of the pair for a unit incident mode p.
inline FullSolution solve_full(const Geometry& g, double k, ModeFamily parity, int p, int N) {
    const BCPair bce = parity == ModeFamily::Even ? BCPair::NN : BCPair::ND;
    const BCPair bco = parity == ModeFamily::Even ? BCPair::DN : BCPair::DD;
    return FullSolution{parity, solve_quadrant(make_problem(g, k, bce, p, N)),
                        solve_quadrant(make_problem(g, k, bco, p, N))};
}

/// True if (x, y) lies in the closed four-channel domain.
inline bool in_domain(const Geometry& g, double x, double y) {
    if (std::abs(y) <= g.a1 && std::abs(x) >= g.b2) return true; // horizontal channels
    if (std::abs(x) <= g.a2 && std::abs(y) >= g.b1) return true; // vertical channels
    return std::abs(x) <= g.b2 && std::abs(y) <= g.b1;           // junction rectangle
}

/// Reconstructed field at (x, y): the half-sum/half-difference of the pair,
/// reflected into the principal quadrant with the parity-appropriate signs.
/// The even-parity field is even in y; the odd-parity field is odd in y and
/// both pick up the x-odd member's sign flip for x > 0.
inline cplx reconstruct(const FullSolution& full, double x, double y) {
    const auto& g = full.geometry();
    if (!in_domain(g, x, y))
        throw OutOfDomain("(" + std::to_string(x) + ", " + std::to_string(y) +
                          ") outside the waveguide domain");
    const double ysign = full.parity == ModeFamily::Even ? 1.0 : -1.0;
    if (x <= 0.0 && y >= 0.0)
        return 0.5 * (eval_quadrant(full.even_x, x, y) + eval_quadrant(full.odd_x, x, y));
    if (x > 0.0 && y >= 0.0)
        return 0.5 * (eval_quadrant(full.even_x, -x, y) - eval_quadrant(full.odd_x, -x, y));
    if (x <= 0.0)
        return ysign * 0.5 *
               (eval_quadrant(full.even_x, x, -y) + eval_quadrant(full.odd_x, x, -y));
    return ysign * 0.5 *
           (eval_quadrant(full.even_x, -x, -y) - eval_quadrant(full.odd_x, -x, -y));
}

/// Gradient of the reconstructed field (chain rule over the quadrant
/// reflections).
inline std::pair<cplx, cplx> reconstruct_gradient(const FullSolution& full, double x, double y) {
    const auto& g = full.geometry();
    if (!in_domain(g, x, y)) throw OutOfDomain("point outside the waveguide domain");
    const double sx = x > 0.0 ? -1.0 : 1.0;         // argument reflection in x
    const double sy = y < 0.0 ? -1.0 : 1.0;         // argument reflection in y
    const double wodd = sx;                         // sign of the x-odd member
    const double wpar = (full.parity == ModeFamily::Odd && y < 0.0) ? -1.0 : 1.0;
    const FieldSample se = sample_quadrant(full.even_x, sx * x, sy * y);
    const FieldSample so = sample_quadrant(full.odd_x, sx * x, sy * y);
    const cplx dx = 0.5 * wpar * (se.dx + wodd * so.dx) * sx;
    const cplx dy = 0.5 * wpar * (se.dy + wodd * so.dy) * sy;
    return {dx, dy};
}

/// Direct evaluation of the reconstructed solution from its channel-wise
/// closed forms (amplitude combinations of the pair), used as a cross-check
/// of reconstruct(). Derived from the same symmetry combination; the junction
/// region keeps both quadrant series with their parity profiles.
inline cplx closed_form_check(const FullSolution& full, double x, double y) {
    const auto& g = full.geometry();
    if (!in_domain(g, x, y)) throw OutOfDomain("point outside the waveguide domain");
    const cplx I(0.0, 1.0);
    const auto& qe = full.even_x; // NN or ND
    const auto& qo = full.odd_x;  // DN or DD
    const auto& f1 = qe.fam1;     // left-channel family (shared by the pair)
    const auto& fB = qe.famB;
    const auto& fCe = qe.famC; // even-x junction y-series
    const auto& fCo = qo.famC; // odd-x junction y-series
    const auto& f3e = qe.fam3; // even-x top family (cos)
    const auto& f3o = qo.fam3; // odd-x top family (sin)
    const int p = full.p();

    if (x <= -g.b2) {
        cplx v = std::exp(I * f1.mubar(p) * (x + g.b2)) * f1.f(p, y);
        for (int n = 0; n < f1.count(); ++n)
            v += 0.5 * (qe.A(n) + qo.A(n)) * std::exp(-I * f1.mubar(n) * (x + g.b2)) * f1.f(n, y);
        return v;
    }
    if (x >= g.b2) {
        cplx v = 0.0;
        for (int n = 0; n < f1.count(); ++n)
            v += 0.5 * (qe.A(n) - qo.A(n)) * std::exp(I * f1.mubar(n) * (x - g.b2)) * f1.f(n, y);
        return v;
    }
    if (y >= g.b1 || y <= -g.b1) {
        const double s = y >= g.b1 ? y - g.b1 : -y - g.b1;
        const double ysign =
            (y <= -g.b1 && full.parity == ModeFamily::Odd) ? -1.0 : 1.0;
        cplx v = 0.0;
        for (int n = 0; n < f3e.count(); ++n)
            v += 0.5 * qe.D(n) * std::exp(I * f3e.mubar(n) * s) * f3e.f(n, x);
        for (int n = 0; n < f3o.count(); ++n)
            v += 0.5 * qo.D(n) * std::exp(I * f3o.mubar(n) * s) * f3o.f(n, x);
        return ysign * v;
    }
    // junction rectangle: even-x member contributes an even x-profile, odd-x
    // member an odd one; the y-profiles carry the parity of the pair
    const double ay = std::abs(y);
    const double ysign = (y < 0.0 && full.parity == ModeFamily::Odd) ? -1.0 : 1.0;
    cplx v = 0.0;
    for (int n = 0; n < fB.count(); ++n) {
        const cplx even_prof = detail::even_profile(fB.mubar(n), x, g.b2).value;
        const cplx odd_prof = detail::odd_profile(fB.mubar(n), -x, g.b2).value;
        v += 0.5 * (qe.B(n) * even_prof + qo.B(n) * odd_prof) * fB.f(n, ay);
    }
    for (int n = 0; n < fCe.count(); ++n) {
        const cplx prof = full.parity == ModeFamily::Even
                              ? detail::even_profile(fCe.mubar(n), ay, g.b1).value
                              : detail::odd_profile(fCe.mubar(n), ay, g.b1).value;
        v += 0.5 * qe.C(n) * prof * fCe.f(n, x);
    }
    for (int n = 0; n < fCo.count(); ++n) {
        const cplx prof = full.parity == ModeFamily::Even
                              ? detail::even_profile(fCo.mubar(n), ay, g.b1).value
                              : detail::odd_profile(fCo.mubar(n), ay, g.b1).value;
        v += 0.5 * qo.C(n) * prof * fCo.f(n, x);
    }
    return ysign * v;
}

struct FieldGrid {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    Eigen::MatrixXcd values;                      ///< values(i, j) at (x(j), y(i))
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask; ///< true inside the domain
};

struct GridSpec {
    int nx = 181;
    int ny = 121;
    double channel_length = 0.0; ///< 0 -> default 2 * max(b1, b2) beyond the junction
};

/// Samples the reconstructed field on a rectangular grid covering the
/// junction plus finite channel stubs; points outside the domain are masked.
inline FieldGrid sample_grid(const FullSolution& full, const GridSpec& spec) {
    if (spec.nx < 2 || spec.ny < 2) throw ValidationError("grid resolution must be >= 2");
    const auto& g = full.geometry();
    const double ext = spec.channel_length > 0.0 ? spec.channel_length
                                                 : 2.0 * std::max(g.b1, g.b2);
    const double X = g.b2 + ext, Y = g.b1 + ext;
    FieldGrid grid;
    grid.x.setLinSpaced(spec.nx, -X, X);
    grid.y.setLinSpaced(spec.ny, -Y, Y);
    grid.values.setZero(spec.ny, spec.nx);
    grid.mask.setConstant(spec.ny, spec.nx, false);
    for (int i = 0; i < spec.ny; ++i)
        for (int j = 0; j < spec.nx; ++j)
            if (in_domain(g, grid.x(j), grid.y(i))) {
                grid.mask(i, j) = true;
                grid.values(i, j) = reconstruct(full, grid.x(j), grid.y(i));
            }
    return grid;
}

} // namespace crossguide
