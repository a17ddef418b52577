#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "plasmon/spectral_density.hpp"

namespace plasmon {

/// Discrete eigenvalue below the continuum for one channel.
struct BoundState {
    double varpi_b = 0.0;  // eV
    double weight_L = 0.0; // [1 + int A/(w - varpi_b)^2]^-1, in (0, 1]
    std::size_t channel = 0;
};

/// Y_j(varpi) = omega_0 - int A_j(w) / (w - varpi) dw, trapezoid on the table grid.
/// Throws DomainError for varpi >= omega_min of the grid (inside the continuum).
double Y_eval(const SpectralTable& t, std::size_t channel, double omega_0, double varpi);

/// [1 + int A_j(w) / (w - varpi_b)^2 dw]^-1
double residue_weight(const SpectralTable& t, std::size_t channel, double varpi_b);

struct RootOptions {
    double tolerance = 1e-10;     // eV, bisection interval width
    double zero_offset = 1e-9;    // Y(0) is evaluated at varpi = -zero_offset
    int max_doublings = 60;
};

/// Bound state of one channel, if Y_j(0-) < 0.
std::optional<BoundState> find_bound_state(const SpectralTable& t, std::size_t channel,
                                           double omega_0, const RootOptions& opt = {});

/// Bound states of every channel of the table, ordered by channel.
std::vector<BoundState> find_bound_states(const SpectralTable& t, double omega_0,
                                          const RootOptions& opt = {});

/// Long-time amplitude vector Z(t) for the initial state (1, 0, ...).
///
/// N = 1: L e^{-i varpi t}. N = 2: sum over bound channels of
/// (L/2) (1, s_j) e^{-i varpi_j t}, s = +1 for A_+ and -1 for A_-.
std::vector<cplx> asymptotic_Z(const std::vector<BoundState>& states, std::size_t n_emitters,
                               double t);

/// Residue amplitude L_01 of a channel as it enters Z(t) for N emitters.
double residue_amplitude(const BoundState& b, std::size_t n_emitters);

/// `channel,varpi_b_ev,weight_L,exists`, one row per channel.
void write_bound_state_csv(std::ostream& out, std::size_t channel_count,
                           const std::vector<BoundState>& states);

}  // namespace plasmon
