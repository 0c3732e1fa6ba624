// The twelve overlap kernels coupling the channel and junction mode families,
// in closed form, plus diagonal norms and an adaptive-quadrature oracle that
// integrates the defining integrals directly.
//
// Each kernel is sign * T(mu_n, nu_m, L) [/ trig(mu_n * L')] where T is a
// cosine-cosine or sine-sine overlap, mu_n is either a transverse eigenvalue
// or an axial wavenumber of the junction expansion, and the optional
// denominator is the profile normalization at the far junction face.
#pragma once

#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "crossguide/detail/stable_trig.hpp"
#include "crossguide/errors.hpp"
#include "crossguide/geometry.hpp"

namespace crossguide {

/// Vp/Wp/Qp/Op are the primed kernels V', W', Q', O'.
enum class KernelName { H, V, O, E, R, Q, W, K, Vp, Wp, Qp, Op };

inline const char* to_string(KernelName n) {
    switch (n) {
        case KernelName::H: return "H";
        case KernelName::V: return "V";
        case KernelName::O: return "O";
        case KernelName::E: return "E";
        case KernelName::R: return "R";
        case KernelName::Q: return "Q";
        case KernelName::W: return "W";
        case KernelName::K: return "K";
        case KernelName::Vp: return "V'";
        case KernelName::Wp: return "W'";
        case KernelName::Qp: return "Q'";
        case KernelName::Op: return "O'";
    }
    return "?";
}

enum class NormKind { EvenNorm, OddNorm };

/// Self-overlap of mode m over half a channel: Even -> L for m = 0, L/2
/// otherwise; Odd -> L/2 for all m.
inline double diagonal_norm(NormKind kind, int m, double L) {
    if (kind == NormKind::EvenNorm) return m == 0 ? L : L / 2.0;
    return L / 2.0;
}

inline double diagonal_norm(ModeFamily family, int m, double L) {
    return diagonal_norm(family == ModeFamily::Even ? NormKind::EvenNorm : NormKind::OddNorm, m, L);
}

struct DiagonalNorm {
    NormKind kind;
    double half_width;
    Eigen::VectorXd values;
};

inline DiagonalNorm diagonal_norms(NormKind kind, double L, int count) {
    Eigen::VectorXd v(count);
    for (int m = 0; m < count; ++m) v(m) = diagonal_norm(kind, m, L);
    return DiagonalNorm{kind, L, std::move(v)};
}

enum class TrigParity { CosCos, SinSin };

/// Closed form of int_0^L cos(mu y) cos(nu y) dy or int_0^L sin(mu y) sin(nu y) dy,
/// valid for complex mu including the coincident (mu = nu) and zero cases.
inline cplx trig_overlap(cplx mu, double nu, double L, TrigParity parity) {
    if (!(L > 0.0)) throw NonPositiveDimension("trig_overlap: L must be positive");
    if (nu < 0.0) throw ValidationError("trig_overlap: nu must be nonnegative");
    return parity == TrigParity::CosCos ? detail::cos_cos_overlap(mu, nu, L)
                                        : detail::sin_sin_overlap(mu, nu, L);
}

namespace detail {

// Per-kernel structure: row family (index m) over half-width rowL, column
// family (index n); the column profile argument is either the transverse
// eigenvalue itself (plain overlap) or the axial wavenumber with a
// normalization denominator at denL.
struct KernelSpec {
    ModeFamily row_family;
    // selects a1/a2 for the integration interval and row eigenvalues
    bool row_on_a1;
    ModeFamily col_family;
    // half-width defining the column eigenvalues (b1 or b2)
    bool col_on_b1;
    bool uses_axial;  // column argument is an axial wavenumber
    bool extra_minus; // Dirichlet-at-x=0 junction profile: sinh(-i mu b2) = -i sin(mu b2)
};

inline KernelSpec kernel_spec(KernelName name) {
    using MF = ModeFamily;
    switch (name) {
        // rows over a1 (interface x = -b2), columns over b1 (junction x-series)
        case KernelName::H:  return {MF::Even, true, MF::Even, true, false, false};
        case KernelName::R:  return {MF::Odd, true, MF::Odd, true, false, false};
        // rows over a1, columns over b2 (junction y-series, axial in y)
        case KernelName::V:  return {MF::Even, true, MF::Even, false, true, false};
        case KernelName::Q:  return {MF::Odd, true, MF::Odd, false, true, true};
        case KernelName::Vp: return {MF::Odd, true, MF::Even, false, true, false};
        case KernelName::Qp: return {MF::Even, true, MF::Odd, false, true, true};
        // rows over a2 (interface y = b1), columns over b1 (junction x-series, axial in x)
        case KernelName::O:  return {MF::Even, false, MF::Even, true, true, false};
        case KernelName::W:  return {MF::Odd, false, MF::Odd, true, true, true};
        case KernelName::Wp: return {MF::Even, false, MF::Odd, true, true, false};
        case KernelName::Op: return {MF::Odd, false, MF::Even, true, true, true};
        // rows over a2, columns over b2 (plain overlaps)
        case KernelName::E:  return {MF::Even, false, MF::Even, false, false, false};
        case KernelName::K:  return {MF::Odd, false, MF::Odd, false, false, false};
    }
    throw ValidationError("unknown kernel name");
}

// sign of the column mode function evaluated at the far face: cos(n pi) or
// sin((2n+1) pi/2) give (-1)^n; sin(-(2n+1) pi/2) gives -(-1)^n. Implemented
// exactly, never via floating-point trig.
inline double parity_sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

} // namespace detail

/// One entry of an overlap kernel in closed form.
inline cplx kernel(KernelName name, int m, int n, const Geometry& g, double k) {
    using namespace detail;
    const KernelSpec sp = kernel_spec(name);
    if (m < 0 || n < 0) throw ValidationError("kernel: negative mode index");
    const double rowL = sp.row_on_a1 ? g.a1 : g.a2;
    const double colL = sp.col_on_b1 ? g.b1 : g.b2;
    const double nu = eigenvalue(sp.row_family, m, rowL);
    const double col_eig = eigenvalue(sp.col_family, n, colL);
    if (!sp.uses_axial) {
        const TrigParity par =
            sp.row_family == ModeFamily::Even ? TrigParity::CosCos : TrigParity::SinSin;
        return trig_overlap(cplx(col_eig, 0.0), nu, rowL, par);
    }
    const cplx mubar = axial_wavenumber(k, col_eig);
    // the profile is normalized at the opposite face: y-series at b1, x-series at b2
    const double denL = sp.col_on_b1 ? g.b2 : g.b1;
    // face value of the column mode, cos(n pi) or sin(+-(2n+1) pi/2), plus the
    // -i/i mismatch of sinh(-i mu b2) denominators for the Dirichlet x-profiles
    double sign = parity_sign(n);
    if (sp.extra_minus) sign = -sign;
    if (sp.row_family == ModeFamily::Even)
        return sign * cos_cos_over_cos(mubar, nu, rowL, denL);
    return sign * sin_sin_over_sin(mubar, nu, rowL, denL);
}

struct KernelTable {
    KernelName name;
    Eigen::MatrixXcd entries;
    Geometry geometry;
    double k;
    int N;
};

/// Row/column counts of a kernel at truncation N: even families keep modes
/// 0..N (N+1 entries), odd families 0..N-1.
inline int family_count(ModeFamily f, int N) { return f == ModeFamily::Even ? N + 1 : N; }

/// Batched kernel evaluation for all m, n at truncation N.
inline KernelTable kernel_table(KernelName name, const Geometry& g, double k, int N) {
    if (N < 1) throw ValidationError("kernel_table: N must be >= 1");
    const detail::KernelSpec sp = detail::kernel_spec(name);
    const int rows = family_count(sp.row_family, N);
    const int cols = family_count(sp.col_family, N);
    Eigen::MatrixXcd M(rows, cols);
    for (int n = 0; n < cols; ++n) {
        try {
            for (int m = 0; m < rows; ++m) M(m, n) = kernel(name, m, n, g, k);
        } catch (const SingularPrefactor& e) {
            throw SingularPrefactor(std::string(to_string(name)) + " column " + std::to_string(n) +
                                    ": " + e.what());
        }
    }
    return KernelTable{name, std::move(M), g, k, N};
}

/// Adaptive Gauss-Kronrod integration of the kernel's defining integral,
/// independent of the closed-form path. Absolute tolerance per component.
inline cplx quadrature_oracle(KernelName name, int m, int n, const Geometry& g, double k,
                              double abs_tol = 1e-12) {
    using namespace detail;
    const KernelSpec sp = kernel_spec(name);
    const double rowL = sp.row_on_a1 ? g.a1 : g.a2;
    const double colL = sp.col_on_b1 ? g.b1 : g.b2;
    const double nu = eigenvalue(sp.row_family, m, rowL);
    const double col_eig = eigenvalue(sp.col_family, n, colL);

    std::function<cplx(double)> integrand;
    const bool row_even = sp.row_family == ModeFamily::Even;
    auto row_fn = [row_even, nu](double t) { return row_even ? std::cos(nu * t) : std::sin(nu * t); };

    if (!sp.uses_axial) {
        integrand = [row_fn, col_even = sp.col_family == ModeFamily::Even,
                     col_eig](double t) -> cplx {
            const double colf = col_even ? std::cos(col_eig * t) : std::sin(col_eig * t);
            return cplx(colf * row_fn(t), 0.0);
        };
    } else {
        const cplx mubar = axial_wavenumber(k, col_eig);
        const double denL = sp.col_on_b1 ? g.b2 : g.b1;
        double sign = parity_sign(n);
        if (sp.extra_minus) sign = -sign;
        const bool even_prof = sp.row_family == ModeFamily::Even;
        integrand = [row_fn, mubar, denL, sign, even_prof](double t) -> cplx {
            const ProfileEval pe =
                even_prof ? even_profile(mubar, t, denL) : odd_profile(mubar, t, denL);
            return sign * pe.value * row_fn(t);
        };
    }

    using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
    auto integrate_part = [&](auto part) {
        double err = 0.0, l1 = 0.0;
        const double v = gk::integrate([&](double t) { return part(integrand(t)); }, 0.0, rowL, 6,
                                       1e-14, &err, &l1);
        // the reported estimate accumulates round-off per subinterval, so a
        // machine-precision floor relative to the integrand's L1 mass applies
        if (err > abs_tol + 3e-13 * l1)
            throw NonConvergence(std::string("oracle for ") + to_string(name) +
                                 " did not reach tolerance");
        return v;
    };
    const double re = integrate_part([](cplx v) { return v.real(); });
    const double im = integrate_part([](cplx v) { return v.imag(); });
    return cplx(re, im);
}

} // namespace crossguide
