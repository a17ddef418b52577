#include "plasmon/analysis.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "plasmon/errors.hpp"

namespace plasmon {

double fit_population_decay_rate(const AmplitudeTrajectory& traj, std::size_t i, double t_begin,
                                 double t_end) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t s = 0; s < traj.size(); ++s) {
        const double t = traj.time(s);
        if (t < t_begin || t > t_end) continue;
        const double p = traj.population(s, i);
        if (!(p > 0.0)) throw DomainError("population vanished inside the fit window");
        const double y = -std::log(p);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++n;
    }
    if (n < 2) throw DomainError("fit window holds fewer than two samples");
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

double oscillation_period(std::span<const double> times, std::span<const double> values) {
    if (times.size() != values.size() || times.size() < 3) return 0.0;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    std::vector<double> crossings;
    for (std::size_t k = 1; k < values.size(); ++k) {
        const double a = values[k - 1] - mean;
        const double b = values[k] - mean;
        if (a < 0.0 && b >= 0.0) crossings.push_back(times[k - 1] + (times[k] - times[k - 1]) * (-a) / (b - a));
    }
    if (crossings.size() < 2) return 0.0;
    return (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
}

}  // namespace plasmon
