#pragma once

#include "plasmon/materials.hpp"
#include "plasmon/units.hpp"

namespace plasmon {

/// Planar interface: lossless dielectric (z > 0) over a Drude metal (z < 0).
struct InterfaceModel {
    double eps_d = 1.0;
    DrudeParams drude{};
    DParamSource dsource = LocalResponse{};
    /// When false the metal is removed: the reflected field vanishes and the
    /// emitters see the homogeneous dielectric only.
    bool reflection_enabled = true;

    void validate() const;
    cplx eps_m(double omega) const { return drude_epsilon(drude, omega); }
};

/// Normal wave-vector component sqrt(eps (omega/hbar c)^2 - ks^2) on the branch Im >= 0
/// (Re > 0 when the radicand is positive real).
cplx kz(double omega, double ks, cplx eps);

/// p-polarized scattering amplitudes of the interface at one (omega, ks).
/// `transmission` is the tangential-E transmission amplitude.
struct ScatteringP {
    cplx reflection;
    cplx transmission;
    cplx kz_d;
    cplx kz_m;
    cplx eps_m;
    DParams d;
};

ScatteringP scattering_p(const InterfaceModel& m, double omega, double ks);

/// r^p at fixed omega as a function of ks, with eps_m and the d-parameters
/// evaluated once. Produces the same values as reflection_p.
class ReflectionAtFrequency {
public:
    ReflectionAtFrequency(const InterfaceModel& m, double omega);
    cplx operator()(double ks) const;

    cplx eps_m() const { return eps_m_; }
    const DParams& dparams() const { return d_; }

private:
    double omega_;
    cplx eps_d_;
    cplx eps_m_;
    DParams d_;
};
cplx reflection_p(const InterfaceModel& m, double omega, double ks);
cplx transmission_p(const InterfaceModel& m, double omega, double ks);

/// Absolute residuals of the two d-parameter boundary conditions, with the
/// magnitude of the largest term of each equation for scaling.
struct BoundaryResiduals {
    double tangential_e = 0.0;
    double tangential_h = 0.0;
    double scale_e = 0.0;
    double scale_h = 0.0;

    double relative_e() const { return scale_e > 0.0 ? tangential_e / scale_e : tangential_e; }
    double relative_h() const { return scale_h > 0.0 ? tangential_h / scale_h : tangential_h; }
    double max_relative() const;
};

/// Substitutes (r, t) into the modified boundary conditions.
/// `t_tangential_e` uses the same normalization as transmission_p.
BoundaryResiduals boundary_residuals(const InterfaceModel& m, double omega, double ks, cplx r,
                                     cplx t_tangential_e);

/// Residuals for the coefficients computed by scattering_p.
BoundaryResiduals check_boundary_conditions(const InterfaceModel& m, double omega, double ks);

}  // namespace plasmon
