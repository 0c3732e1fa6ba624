// Numerically stable trigonometric building blocks shared by the kernel
// closed forms and the piecewise field evaluators.
//
// Axial wavenumbers are either real (propagating) or purely imaginary with
// positive imaginary part (evanescent). Evanescent arguments turn the trig
// ratios below into hyperbolic ratios that overflow if numerator and
// denominator are formed separately; every function here rewrites them as
// products whose exponents are all <= 0.
#pragma once

#include <cmath>
#include <complex>

#include "crossguide/errors.hpp"
#include "crossguide/geometry.hpp"

namespace crossguide::detail {

/// sin(z)/z, finite and accurate through z = 0.
inline cplx csinc(cplx z) {
    if (std::abs(z) < 1e-4) {
        const cplx z2 = z * z;
        return 1.0 - z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0));
    }
    return std::sin(z) / z;
}

/// int_0^L cos(mu y) cos(nu y) dy, exact for complex mu. The sinc form covers
/// the coincident and zero eigenvalue cases without branching.
inline cplx cos_cos_overlap(cplx mu, double nu, double L) {
    return 0.5 * L * (csinc((mu + nu) * L) + csinc((mu - nu) * L));
}

/// int_0^L sin(mu y) sin(nu y) dy.
inline cplx sin_sin_overlap(cplx mu, double nu, double L) {
    return 0.5 * L * (csinc((mu - nu) * L) - csinc((mu + nu) * L));
}

inline bool is_evanescent(cplx mubar) { return mubar.imag() != 0.0; }

constexpr double kSingularTol = 1e-12;
// Below this |Im mu|*L the complex trig functions cannot overflow and the
// direct formulas are used; above it the scaled-exponential path takes over.
constexpr double kDirectHyperbolicLimit = 30.0;

inline void check_prefactor(cplx den, const char* what) {
    if (std::abs(den) < kSingularTol)
        throw SingularPrefactor(std::string(what) + " vanishes: internal resonance");
}

// cosh(t s)/cosh(t L), sinh(t s)/cosh(t L), ... for t > 0, 0 <= s <= L,
// with every exponent <= 0.
inline double cosh_over_cosh(double t, double s, double L) {
    return std::exp(t * (s - L)) * (1.0 + std::exp(-2.0 * t * s)) / (1.0 + std::exp(-2.0 * t * L));
}
inline double sinh_over_cosh(double t, double s, double L) {
    return std::exp(t * (s - L)) * (1.0 - std::exp(-2.0 * t * s)) / (1.0 + std::exp(-2.0 * t * L));
}
inline double sinh_over_sinh(double t, double s, double L) {
    return std::exp(t * (s - L)) * (-std::expm1(-2.0 * t * s)) / (-std::expm1(-2.0 * t * L));
}
inline double cosh_over_sinh(double t, double s, double L) {
    return std::exp(t * (s - L)) * (1.0 + std::exp(-2.0 * t * s)) / (-std::expm1(-2.0 * t * L));
}

/// cos_cos_overlap(mu, nu, L1) / cos(mu L2) for L1 <= L2, stable for strongly
/// evanescent mu. Throws SingularPrefactor at cavity resonances of the
/// propagating branch.
inline cplx cos_cos_over_cos(cplx mu, double nu, double L1, double L2) {
    if (!is_evanescent(mu)) {
        const double m = mu.real();
        const double den = std::cos(m * L2);
        check_prefactor(den, "cos(mu b)");
        return cos_cos_overlap(mu, nu, L1) / den;
    }
    const double t = mu.imag();
    if (t * L2 < kDirectHyperbolicLimit)
        return cos_cos_overlap(mu, nu, L1) / std::cos(mu * L2);
    // sin((mu +- nu) L1)/cos(mu L2) = +-sin(nu L1) CR + i cos(nu L1) SR
    const double CR = cosh_over_cosh(t, L1, L2);
    const double SR = sinh_over_cosh(t, L1, L2);
    const double sn = std::sin(nu * L1), cn = std::cos(nu * L1);
    const cplx plus(sn * CR, cn * SR);
    const cplx minus(-sn * CR, cn * SR);
    return 0.5 * (plus / (mu + nu) + minus / (mu - nu));
}

/// sin_sin_overlap(mu, nu, L1) / sin(mu L2), with the removable mu -> 0 limit
/// evaluated by series (the ratio is an even analytic function of mu).
inline cplx sin_sin_over_sin(cplx mu, double nu, double L1, double L2) {
    if (nu == 0.0) return 0.0;
    if (std::abs(mu) * L2 < 1e-5) {
        // [mu J1 - mu^3 J3 / 6 + ...] / [mu L2 (1 - (mu L2)^2/6 + ...)]
        const double J1 = (std::sin(nu * L1) - nu * L1 * std::cos(nu * L1)) / (nu * nu);
        const double c = std::cos(nu * L1), s = std::sin(nu * L1);
        const double J3 = -L1 * L1 * L1 * c / nu + 3.0 * L1 * L1 * s / (nu * nu) +
                          6.0 * L1 * c / (nu * nu * nu) - 6.0 * s / (nu * nu * nu * nu);
        const cplx mu2 = mu * mu;
        return (J1 - mu2 / 6.0 * J3) * (1.0 + mu2 * (L2 * L2) / 6.0) / L2;
    }
    if (!is_evanescent(mu)) {
        const double m = mu.real();
        const double den = std::sin(m * L2);
        check_prefactor(den, "sin(mu b)");
        return sin_sin_overlap(mu, nu, L1) / den;
    }
    const double t = mu.imag();
    if (t * L2 < kDirectHyperbolicLimit)
        return sin_sin_overlap(mu, nu, L1) / std::sin(mu * L2);
    // sin((mu +- nu) L1)/sin(mu L2) = cos(nu L1) SS -+ i sin(nu L1) CS
    const double SS = sinh_over_sinh(t, L1, L2);
    const double CS = cosh_over_sinh(t, L1, L2);
    const double sn = std::sin(nu * L1), cn = std::cos(nu * L1);
    const cplx plus(cn * SS, -sn * CS);
    const cplx minus(cn * SS, sn * CS);
    return 0.5 * (minus / (mu - nu) - plus / (mu + nu));
}

/// Value and d/ds of cos(mu s)/cos(mu L) on |s| <= L (even profile through the
/// junction, unit trace at |s| = L).
struct ProfileEval {
    cplx value;
    cplx slope;
};

inline ProfileEval even_profile(cplx mu, double s, double L) {
    if (!is_evanescent(mu)) {
        const double m = mu.real();
        const double den = std::cos(m * L);
        check_prefactor(den, "cos(mu b)");
        return {std::cos(m * s) / den, -m * std::sin(m * s) / den};
    }
    const double t = mu.imag();
    const double as = std::abs(s);
    const double v = cosh_over_cosh(t, as, L);
    const double d = t * sinh_over_cosh(t, as, L) * (s < 0 ? -1.0 : 1.0);
    return {cplx(v, 0.0), cplx(d, 0.0)};
}

/// Value and d/ds of sin(mu s)/sin(mu L) on |s| <= L (odd profile, unit trace
/// at s = L). The mu -> 0 limit is s/L.
inline ProfileEval odd_profile(cplx mu, double s, double L) {
    if (std::abs(mu) * L < 1e-9) return {cplx(s / L, 0.0), cplx(1.0 / L, 0.0)};
    if (!is_evanescent(mu)) {
        const double m = mu.real();
        const double den = std::sin(m * L);
        check_prefactor(den, "sin(mu b)");
        return {std::sin(m * s) / den, m * std::cos(m * s) / den};
    }
    const double t = mu.imag();
    const double as = std::abs(s);
    const double sgn = s < 0 ? -1.0 : 1.0;
    const double v = sinh_over_sinh(t, as, L) * sgn;
    const double d = t * cosh_over_sinh(t, as, L);
    return {cplx(v, 0.0), cplx(d, 0.0)};
}

// Diagonal derivative factors of the block systems. All four are bounded for
// evanescent mubar; for propagating mubar they blow up at the cavity
// resonances, which is reported rather than regularized.

/// mubar * tanh(-i mubar L)
inline cplx tan_factor_neg(cplx mubar, double L) {
    if (!is_evanescent(mubar)) {
        const double m = mubar.real();
        const double den = std::cos(m * L);
        if (std::abs(den) < kSingularTol)
            throw SingularDiagonalFactor("tan factor singular: cos(mu b) = 0");
        return cplx(0.0, -m * std::tan(m * L));
    }
    const double t = mubar.imag();
    return cplx(0.0, t * std::tanh(t * L));
}

/// mubar * tanh(+i mubar L)
inline cplx tan_factor_pos(cplx mubar, double L) { return -tan_factor_neg(mubar, L); }

/// mubar * coth(-i mubar L); finite (i/L) through mubar = 0.
inline cplx cot_factor_neg(cplx mubar, double L) {
    if (std::abs(mubar) * L < 1e-5) {
        // mu coth(-i mu L) = i/L - i mu^2 L/3 + O(mu^4)
        const cplx mu2 = mubar * mubar;
        return cplx(0.0, 1.0) * (1.0 / L - mu2 * (L / 3.0));
    }
    if (!is_evanescent(mubar)) {
        const double m = mubar.real();
        const double den = std::sin(m * L);
        if (std::abs(den) < kSingularTol)
            throw SingularDiagonalFactor("cot factor singular: sin(mu b) = 0");
        return cplx(0.0, m * std::cos(m * L) / den);
    }
    const double t = mubar.imag();
    return cplx(0.0, t / std::tanh(t * L));
}

/// mubar * coth(+i mubar L)
inline cplx cot_factor_pos(cplx mubar, double L) { return -cot_factor_neg(mubar, L); }

} // namespace crossguide::detail
