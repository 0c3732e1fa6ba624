// Pulse synthesis along the channel axis: precompute the frequency-domain
// field matrix once, then render the same pulse at several times.
#include <cstdio>
#include <vector>

#include "crossguide/time_domain.hpp"

using namespace crossguide;

int main() {
    const Geometry g = validate_geometry(2, 3, 5, 4);
    // probe points along the horizontal channel axis
    std::vector<TimePoint> points;
    for (double x = -14.0; x <= 14.0; x += 1.0)
        if (in_domain(g, x, 0.0)) points.push_back({x, 0.0});

    const double k_max = 3.0 + 4.0 / std::sqrt(8.0);
    const TimeSynthesis ts = precompute_field_matrix(g, ModeFamily::Even, 0, 60, points,
                                                     build_quadrature(k_max, 129), 4);
    const SpectrumSpec spectrum = SpectrumSpec::gaussian(3.0, 8.0, 1.0 / pi);

    for (const double t : {-5.0, 0.0, 5.0, 10.0}) {
        const Eigen::VectorXd frame = synthesize(ts, spectrum, t);
        std::printf("t = %+5.1f  ", t);
        for (int i = 0; i < frame.size(); i += 4) std::printf("%+6.3f ", frame(i));
        std::printf("\n");
    }
    std::printf("(%zu probe points, %d frequencies, %zu columns below cut-on)\n",
                ts.points.size(), static_cast<int>(ts.grid.k.size()),
                ts.skipped_columns.size());
    return 0;
}
