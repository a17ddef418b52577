#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "plasmon/dynamics.hpp"
#include "plasmon/spectrum.hpp"

namespace plasmon {

/// Two-qubit density matrix in the basis {ee, eg, ge, gg}, row-major.
struct TwoQubitState {
    std::array<cplx, 16> rho{};

    cplx operator()(std::size_t r, std::size_t c) const { return rho[r * 4 + c]; }
    cplx& operator()(std::size_t r, std::size_t c) { return rho[r * 4 + c]; }

    /// Hermiticity, unit trace and positivity within `tol`.
    void validate(double tol = 1e-10) const;
};

/// Reduced emitter state of a1|eg,0> + a2|ge,0> + sum_k b_k |gg,1_k>.
TwoQubitState reduced_density(cplx a1, cplx a2);

/// Wootters concurrence from the spectrum of rho (sy x sy) rho* (sy x sy).
double concurrence(const TwoQubitState& rho);

/// Long-time concurrence predicted by the bound states of a two-emitter table.
/// `states` comes from find_bound_states on an N = 2 table.
double steady_concurrence(const std::vector<BoundState>& states, std::size_t n_emitters, double t);

/// `t_hbar_per_ev,concurrence,steady_prediction` every `stride` steps.
void write_concurrence_csv(std::ostream& out, const AmplitudeTrajectory& traj,
                           const std::vector<BoundState>& states, std::size_t stride = 1);

}  // namespace plasmon
