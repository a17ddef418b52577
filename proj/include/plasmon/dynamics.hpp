#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "plasmon/spectral_density.hpp"

namespace plasmon {

/// K_ij(tau) = int J_ij(w) e^{-i w tau} dw sampled on tau_l = l dt.
class MemoryKernel {
public:
    MemoryKernel(double dt, std::size_t n_emitters, std::size_t lags);

    double dt() const { return dt_; }
    std::size_t n_emitters() const { return n_; }
    std::size_t lags() const { return lags_; }

    cplx at(std::size_t lag, std::size_t i, std::size_t j) const;
    void set(std::size_t lag, std::size_t i, std::size_t j, cplx v);

    const std::vector<double>& real_plane(std::size_t i, std::size_t j) const { return re_[i * n_ + j]; }
    const std::vector<double>& imag_plane(std::size_t i, std::size_t j) const { return im_[i * n_ + j]; }

private:
    double dt_;
    std::size_t n_;
    std::size_t lags_;
    std::vector<std::vector<double>> re_;
    std::vector<std::vector<double>> im_;
};

/// Trapezoid Fourier sum of the table on lags 0..ceil(T/dt). Requires dt <= 0.1/omega_max.
MemoryKernel build_kernel(const SpectralTable& t, double T, double dt);

/// Number of steps used for a horizon T at step dt.
std::size_t step_count(double T, double dt);

/// Emitter amplitudes a_i(t_n), t_n = n dt.
class AmplitudeTrajectory {
public:
    AmplitudeTrajectory(double dt, std::size_t n_emitters, std::size_t steps);

    double dt() const { return dt_; }
    std::size_t n_emitters() const { return n_; }
    std::size_t size() const { return steps_; }
    double time(std::size_t step) const { return static_cast<double>(step) * dt_; }

    cplx a(std::size_t step, std::size_t i) const { return amps_[step * n_ + i]; }
    cplx& a(std::size_t step, std::size_t i) { return amps_[step * n_ + i]; }
    double population(std::size_t step, std::size_t i) const { return std::norm(a(step, i)); }
    double norm(std::size_t step) const;
    std::span<const cplx> row(std::size_t step) const { return {amps_.data() + step * n_, n_}; }

private:
    double dt_;
    std::size_t n_;
    std::size_t steps_;
    std::vector<cplx> amps_;
};

struct VolterraOptions {
    double norm_tolerance = 1e-6;  // |a|_2 <= 1 + tolerance at every step
};

/// Solves  a' + i omega_0 a + int_0^t K(t - tau) a(tau) dtau = 0.
///
/// Works in the frame rotating at omega_0, trapezoid quadrature of the memory
/// integral, explicit predictor and one trapezoidal corrector pass per step.
AmplitudeTrajectory solve_volterra(const MemoryKernel& kernel, const EmitterParams& e,
                                   std::span<const cplx> a0, double T,
                                   const VolterraOptions& opt = {});

/// Decay rate gamma = 2 pi J(omega_0) and frequency omega_0 - PV int J/(w - omega_0)
/// of one scalar spectral function.
struct MarkovChannel {
    double gamma = 0.0;
    double omega = 0.0;
};

/// Principal value of int f(w)/(w - w0) dw over the grid by singularity subtraction.
double principal_value(std::span<const double> grid, std::span<const double> f, double w0);

MarkovChannel markov_channel(const SpectralTable& t, std::span<const double> values, double omega_0);

/// a_MA(t) = exp[-(gamma/2 + i omega_bar) t] a(0) for N = 1 or 2.
std::vector<cplx> markov_solution(const SpectralTable& t, const EmitterParams& e,
                                  std::span<const cplx> a0, double time);

struct DecayRateSeries {
    std::vector<double> rates;  // eV, one per step until truncation
    bool truncated = false;
};

/// Gamma_i(t) = -Re[a_i'(t) / a_i(t)] with a central difference for a_i'
/// (one-sided on d ln|a_i|/dt at the first and last step).
/// Stops at the first step where |a_i| < threshold and flags truncation.
DecayRateSeries decay_rate(const AmplitudeTrajectory& traj, std::size_t i, double threshold = 1e-8);

/// `t_hbar_per_ev,re_a1,im_a1[,re_a2,im_a2],pop1[,pop2],gamma1_ev` every `stride` steps;
/// further emitters add re_aN,im_aN and popN columns in the same pattern.
void write_trajectory_csv(std::ostream& out, const AmplitudeTrajectory& traj, std::size_t stride = 1);

/// `t_hbar_per_ev,gamma1_ev[,gamma2_ev]` every `stride` steps.
void write_decay_rate_csv(std::ostream& out, const AmplitudeTrajectory& traj, std::size_t stride = 1);

}  // namespace plasmon
