// Gauss-Legendre nodes and weights by Newton iteration on the Legendre
// recurrence, mapped to an arbitrary interval.
#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "crossguide/geometry.hpp"

namespace crossguide::detail {

struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

/// n-point Gauss-Legendre rule on [a, b].
inline GaussRule gauss_legendre(int n, double a, double b) {
    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
        rule.x[i] = xm - xl * z;
        rule.x[n - 1 - i] = xm + xl * z;
        rule.w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        rule.w[n - 1 - i] = rule.w[i];
    }
    return rule;
}

} // namespace crossguide::detail
