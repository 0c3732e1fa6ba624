// Junction geometry, transverse mode families, axial wavenumbers and
// propagating-mode counts.
//
// The domain is a cross of four semi-infinite channels joined by a rectangle:
// horizontal channels of half-width a1 (|y| < a1, |x| > b2), vertical channels
// of half-width a2 (|x| < a2, |y| > b1), junction rectangle |x| < b2, |y| < b1.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "crossguide/errors.hpp"

namespace crossguide {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

struct Geometry {
    double a1; ///< half-width of the horizontal channels
    double a2; ///< half-width of the vertical channels
    double b1; ///< half-height of the junction rectangle
    double b2; ///< half-width of the junction rectangle
};

/// Validates raw dimensions. Channels must attach strictly inside the
/// rectangle faces: a1 <= b1 and a2 <= b2.
inline Geometry validate_geometry(double a1, double a2, double b1, double b2) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw NonPositiveDimension(std::string(name) + " must be a positive finite length");
    };
    positive(a1, "a1");
    positive(a2, "a2");
    positive(b1, "b1");
    positive(b2, "b2");
    if (a1 > b1)
        throw ChannelWiderThanJunction("a1 > b1: horizontal channel wider than junction face");
    if (a2 > b2)
        throw ChannelWiderThanJunction("a2 > b2: vertical channel wider than junction face");
    return Geometry{a1, a2, b1, b2};
}

/// Transverse symmetry class of a channel mode about the channel axis.
/// Even modes are cosines (Neumann at the axis), odd modes sines (Dirichlet).
enum class ModeFamily { Even, Odd };

/// Transverse eigenvalue of mode n of a family on half-width L:
/// Even -> n*pi/L, Odd -> (2n+1)*pi/(2L).
inline double eigenvalue(ModeFamily family, int n, double L) {
    return family == ModeFamily::Even ? n * pi / L : (2 * n + 1) * pi / (2.0 * L);
}

/// A (family, index, half-width) triple naming one transverse mode.
struct ModeIndexing {
    ModeFamily family;
    int n;
    double half_width;

    double eigenvalue() const { return crossguide::eigenvalue(family, n, half_width); }
};

/// Axial wavenumber sqrt(k^2 - mu^2) with the outgoing branch: real >= 0 for
/// propagating modes (k >= mu), +i*sqrt(mu^2 - k^2) for evanescent ones, so
/// that e^{+i*value*s} decays as the outgoing coordinate s grows.
inline cplx axial_wavenumber(double k, double mu) {
    const double d = (k - mu) * (k + mu);
    if (d >= 0.0) return cplx(std::sqrt(d), 0.0);
    return cplx(0.0, std::sqrt(-d));
}

struct PropagatingCounts {
    int q;       ///< floor(k*a1/pi); the even family has q+1 propagating modes
    int q_tilde; ///< max(0, floor((2*k*a1 - pi)/(2*pi)))

    int even_modes() const { return q + 1; }
    int odd_modes() const { return q_tilde; }
};

/// Mode counts reported for a horizontal channel of half-width a1 at
/// frequency k, by the floor formulas.
inline PropagatingCounts propagating_counts(double k, double a1) {
    const int q = static_cast<int>(std::floor(k * a1 / pi));
    const int qt = std::max(0, static_cast<int>(std::floor((2.0 * k * a1 - pi) / (2.0 * pi))));
    return PropagatingCounts{q, qt};
}

/// Number of modes of a family on half-width L that are strictly propagating
/// at k (transverse eigenvalue < k). This is the count a lossless scattering
/// matrix must span; for the odd family it exceeds q_tilde by one whenever
/// the fundamental odd mode is cut on.
inline int propagating_mode_count(ModeFamily family, double k, double L) {
    int n = 0;
    while (eigenvalue(family, n, L) < k) ++n;
    return n;
}

/// True if k lies within tol of some cut-on of the family on half-width L.
inline bool near_cut_on(ModeFamily family, double k, double L, double tol = 1e-9) {
    // cut-ons are at mu_n = k; only finitely many mu_n <= k + tol
    for (int n = 0;; ++n) {
        const double mu = eigenvalue(family, n, L);
        if (mu > k + tol) return false;
        if (std::abs(mu - k) <= tol) return true;
    }
}

} // namespace crossguide
