#pragma once

#include <cstddef>
#include <span>

#include "plasmon/dynamics.hpp"

namespace plasmon {

/// Least-squares slope of -ln |a_i(t)|^2 on [t_begin, t_end] (population decay rate, eV).
double fit_population_decay_rate(const AmplitudeTrajectory& traj, std::size_t i, double t_begin,
                                 double t_end);

/// Mean spacing of upward crossings of the sample mean, with linear
/// interpolation between samples. Returns 0 when fewer than two crossings exist.
double oscillation_period(std::span<const double> times, std::span<const double> values);

}  // namespace plasmon
