#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace plasmon {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t panels = 0;
    std::size_t evaluations = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration of a real function.
///
/// The interval [breaks.front(), breaks.back()] is seeded with the given
/// breakpoints; the panel with the largest error estimate is bisected until the
/// summed estimate falls below max(abs_tol, rel_tol |value|). Throws
/// ConvergenceError when `max_panels` is exceeded.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    std::span<const double> breaks, double rel_tol,
                                    double abs_tol, std::size_t max_panels);

/// Convenience overload for a single interval.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, double abs_tol, std::size_t max_panels);

}  // namespace plasmon
