#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "plasmon/green_function.hpp"

namespace plasmon {

/// Two-level emitters with dipoles along the interface normal.
struct EmitterParams {
    double omega_0 = 2.3;            // eV
    double coupling_alpha = 1650.0;  // eV nm^3, mu^2 / (pi hbar eps0)

    void validate() const;
};

/// J_ij(omega) = alpha (omega/hbar c)^2 Im G_zz(r_i, r_j, omega), in eV.
double spectral_element(const InterfaceModel& m, const Geometry& g, const QuadratureSpec& q,
                        const EmitterParams& e, double omega, std::size_t i, std::size_t j);

/// Free-space spontaneous emission rate alpha (omega_0/hbar c)^3 / 3, in eV.
double gamma0_free(const EmitterParams& e);

/// Frequency grid: `count` uniform nodes on [omega_min, omega_max] merged with
/// `refine_count` uniform nodes on the window refine_center +- refine_halfwidth.
struct GridSpec {
    double omega_min = 0.02;
    double omega_max = 8.0;
    std::size_t count = 4000;
    std::size_t refine_count = 1000;
    double refine_center = 0.0;     // 0: surface-plasmon frequency omega_p / sqrt(1 + eps_d)
    double refine_halfwidth = 0.0;  // 0: 5 gamma_p

    void validate() const;
};

/// Builds the grid, clipped to [domain_lo, domain_hi].
std::vector<double> make_grid(const GridSpec& spec, double domain_lo, double domain_hi);
std::vector<double> make_grid(const GridSpec& spec, const InterfaceModel& m);

/// Trapezoid weights of a sorted grid.
std::vector<double> trapezoid_weights(std::span<const double> grid);

/// Sampled N x N spectral-density matrix with its eigen-channels.
///
/// For N = 2 the channels are A_+ = J_00 + J_01 (index 0) and
/// A_- = J_00 - J_01 (index 1), diagonalized by the constant matrix
/// ((1, 1), (1, -1)) / sqrt(2). N = 1 has the single channel J_00. Larger N
/// carries J only.
class SpectralTable {
public:
    /// `elements[i * n + j]` holds J_ij on the grid.
    SpectralTable(std::vector<double> grid, std::size_t n_emitters,
                  std::vector<std::vector<double>> elements);

    /// Single-emitter table from sampled J_00 values.
    static SpectralTable single(std::vector<double> grid, std::vector<double> j00);

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return grid_.size(); }
    std::size_t n_emitters() const { return n_; }
    double omega_min() const { return grid_.front(); }
    double omega_max() const { return grid_.back(); }

    const std::vector<double>& element(std::size_t i, std::size_t j) const;
    double J(std::size_t node, std::size_t i, std::size_t j) const { return element(i, j)[node]; }

    /// Linear interpolation of J_ij at omega inside the grid.
    double interpolate(std::size_t i, std::size_t j, double omega) const;

    std::size_t channel_count() const { return channels_.size(); }
    const std::vector<double>& channel(std::size_t c) const;
    /// Similarity transform C (row-major n x n) with J = C diag(A) C^-1.
    const std::vector<double>& similarity() const { return similarity_; }

    /// Largest quadrature error estimate met while building (eV).
    double max_error_estimate() const { return max_error_; }
    void set_max_error_estimate(double e) { max_error_ = e; }

private:
    std::vector<double> grid_;
    std::vector<double> weights_;
    std::size_t n_;
    std::vector<std::vector<double>> elements_;
    std::vector<std::vector<double>> channels_;
    std::vector<double> similarity_;
    double max_error_ = 0.0;
};

SpectralTable build_spectral_table(const InterfaceModel& m, const Geometry& g,
                                   const QuadratureSpec& q, const EmitterParams& e,
                                   const GridSpec& grid_spec, unsigned threads = 1);

/// Same, on an explicit grid.
SpectralTable build_spectral_table(const InterfaceModel& m, const Geometry& g,
                                   const QuadratureSpec& q, const EmitterParams& e,
                                   std::vector<double> grid, unsigned threads = 1);

/// Trapezoid integral of J_ij over the grid.
double integrate_element(const SpectralTable& t, std::size_t i, std::size_t j);

struct PeakReport {
    double omega_peak = 0.0;   // eV
    double j_peak = 0.0;       // eV
    double fwhm = 0.0;         // eV, 0 when a half-maximum crossing is missing
    double ratio_to_gamma0 = 0.0;
    std::size_t peak_count = 0;  // local maxima above 1% of the global maximum
};

/// Locates the main resonance of J_00.
PeakReport find_peak(const SpectralTable& t, double gamma0);

/// `omega_ev,J00_ev[,J01_ev,Aplus_ev,Aminus_ev]`
void write_spectral_csv(std::ostream& out, const SpectralTable& t);

}  // namespace plasmon
