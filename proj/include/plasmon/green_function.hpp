#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "plasmon/interface_response.hpp"

namespace plasmon {

/// Emitters at a common height z0 above the interface.
class Geometry {
public:
    Geometry(double z0, std::vector<std::array<double, 2>> emitter_xy);

    /// N emitters on the x axis, spaced by `separation`.
    static Geometry line(double z0, std::size_t n, double separation);

    double z0() const { return z0_; }
    std::size_t size() const { return xy_.size(); }
    const std::array<double, 2>& position(std::size_t i) const { return xy_.at(i); }
    double r_par(std::size_t i, std::size_t j) const;
    double z_plus() const { return 2.0 * z0_; }

private:
    double z0_;
    std::vector<std::array<double, 2>> xy_;
};

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-13;       // nm^-1
    double tail_cut_tol = 1e-14;
    std::size_t max_panels = 20000;

    void validate() const;
};

/// Im G_zz of the homogeneous dielectric between two points at equal height
/// separated by r_par (closed form of the dipole field).
double im_gzz_free(double omega, double r_par, double eps_d);

struct GreenEvaluation {
    double value = 0.0;        // nm^-1
    double error = 0.0;        // estimate, including the truncated tail
    std::size_t evaluations = 0;
};

/// Im G_zz(r_i, r_j, omega) above the interface from the Sommerfeld integral.
///
/// The coincident free-space term comes from im_gzz_free; everything else is
/// integrated along the real ks axis, split at k_d, with panels seeded at the
/// zeros of J0(ks r_par) and near the surface-plasmon pole.
GreenEvaluation im_gzz_detail(const InterfaceModel& m, const Geometry& g, const QuadratureSpec& q,
                              double omega, std::size_t i, std::size_t j);

double im_gzz(const InterfaceModel& m, const Geometry& g, const QuadratureSpec& q, double omega,
              std::size_t i, std::size_t j);

/// Same integral for an explicit in-plane separation (used to share work
/// between emitter pairs with equal separation).
GreenEvaluation im_gzz_separation(const InterfaceModel& m, double z0, double r_par,
                                  const QuadratureSpec& q, double omega);

/// Positive zeros of J0 strictly below x_max, ascending.
std::vector<double> bessel_j0_zeros(double x_max);

}  // namespace plasmon
