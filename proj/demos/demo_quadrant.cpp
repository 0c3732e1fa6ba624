// Minimal library walkthrough: solve one quadrant sub-problem, print the
// dominant scattering coefficients and the quality diagnostics.
#include <cstdio>

#include "crossguide/diagnostics.hpp"
#include "crossguide/quadrant.hpp"

using namespace crossguide;

int main() {
    const Geometry g = validate_geometry(3, 3, 5, 5);
    const double k = 5.0;
    const auto problem = make_problem(g, k, BCPair::NN, 2, 100);
    const QuadrantSolution sol = solve_quadrant(problem);

    const auto counts = propagating_counts(k, g.a1);
    std::printf("k = %.2f: %d even / %d odd propagating modes reported\n", k,
                counts.even_modes(), counts.odd_modes());
    for (int n = 0; n <= counts.q; ++n)
        std::printf("  reflected A_%d = %+.6f %+.6fi   transmitted D_%d = %+.6f %+.6fi\n", n,
                    sol.A(n).real(), sol.A(n).imag(), n, sol.D(n).real(), sol.D(n).imag());

    const DiagnosticReport rep = diagnose(sol);
    std::printf("energy defect      %.3e\n", rep.energy_defect);
    std::printf("pressure residuals %.3e  %.3e\n", rep.pressure_residuals[0],
                rep.pressure_residuals[1]);
    std::printf("velocity residuals %.3e  %.3e\n", rep.velocity_residuals[0],
                rep.velocity_residuals[1]);
    std::printf("condition estimate %.3e\n", rep.condition_estimate);

    std::printf("field at the junction center: %+.6f %+.6fi\n",
                eval_quadrant(sol, -g.b2 / 2, g.b1 / 2).real(),
                eval_quadrant(sol, -g.b2 / 2, g.b1 / 2).imag());
    return 0;
}
