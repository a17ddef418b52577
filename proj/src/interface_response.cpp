#include "plasmon/interface_response.hpp"

#include <algorithm>
#include <cmath>

#include "plasmon/errors.hpp"

namespace plasmon {

void InterfaceModel::validate() const {
    if (!(eps_d > 0.0) || !std::isfinite(eps_d))
        throw DomainError("dielectric permittivity must be positive and finite");
    drude.validate();
    if (const auto* s = std::get_if<SurrogateDPerp>(&dsource)) s->validate();
    if (const auto* t = std::get_if<DParamTable>(&dsource)) t->validate();
}

cplx kz(double omega, double ks, cplx eps) {
    const double k0 = vacuum_wavenumber(omega);
    cplx root = std::sqrt(eps * (k0 * k0) - ks * ks);
    if (root.imag() < 0.0 || (root.imag() == 0.0 && root.real() < 0.0)) root = -root;
    // sqrt(-x - 0i) lands on -i sqrt(x); the flip above restores +i sqrt(x).
    return root;
}

namespace {

struct Coefficients {
    cplx r, t;
};

Coefficients p_coefficients(cplx ed, cplx em, cplx kzd, cplx kzm, double ks, const DParams& d) {
    const cplx contrast = em - ed;
    const cplx ks2(ks * ks, 0.0);
    const cplx kk = kzd * kzm;
    const cplx i(0.0, 1.0);
    const cplx num = em * kzd - ed * kzm + i * contrast * (ks2 * d.perp - kk * d.par);
    const cplx den = em * kzd + ed * kzm - i * contrast * (ks2 * d.perp + kk * d.par);
    return {num / den, 2.0 * ed * kzm / den};
}

}  // namespace

ReflectionAtFrequency::ReflectionAtFrequency(const InterfaceModel& m, double omega)
    : omega_(omega), eps_d_(m.eps_d, 0.0) {
    if (!(omega > 0.0)) throw DomainError("reflection: omega must be positive");
    eps_m_ = m.eps_m(omega);
    d_ = eval_dparams(m.dsource, omega);
}

cplx ReflectionAtFrequency::operator()(double ks) const {
    const cplx kzd = kz(omega_, ks, eps_d_);
    const cplx kzm = kz(omega_, ks, eps_m_);
    return p_coefficients(eps_d_, eps_m_, kzd, kzm, ks, d_).r;
}

ScatteringP scattering_p(const InterfaceModel& m, double omega, double ks) {
    if (!(omega > 0.0)) throw DomainError("scattering_p: omega must be positive");
    if (!(ks >= 0.0)) throw DomainError("scattering_p: ks must be non-negative");
    ScatteringP out;
    out.eps_m = m.eps_m(omega);
    out.kz_d = kz(omega, ks, cplx(m.eps_d, 0.0));
    out.kz_m = kz(omega, ks, out.eps_m);
    out.d = eval_dparams(m.dsource, omega);

    const Coefficients c = p_coefficients(cplx(m.eps_d, 0.0), out.eps_m, out.kz_d, out.kz_m, ks, out.d);
    out.reflection = c.r;
    out.transmission = c.t;
    return out;
}

cplx reflection_p(const InterfaceModel& m, double omega, double ks) {
    return scattering_p(m, omega, ks).reflection;
}

cplx transmission_p(const InterfaceModel& m, double omega, double ks) {
    return scattering_p(m, omega, ks).transmission;
}

double BoundaryResiduals::max_relative() const { return std::max(relative_e(), relative_h()); }

BoundaryResiduals boundary_residuals(const InterfaceModel& m, double omega, double ks, cplx r,
                                     cplx t_tangential_e) {
    const cplx ed(m.eps_d, 0.0);
    const cplx em = m.eps_m(omega);
    const cplx kzd = kz(omega, ks, ed);
    const cplx kzm = kz(omega, ks, em);
    const DParams d = eval_dparams(m.dsource, omega);
    const cplx i(0.0, 1.0);

    // The boundary equations are written for the magnetic-field amplitude of the
    // transmitted wave; convert from the tangential-E normalization.
    const cplx t = t_tangential_e * (em * kzd) / (ed * kzm);

    BoundaryResiduals out;
    {
        const cplx a = kzd * (r - 1.0) / ed;
        const cplx b = kzm * t / em;
        const cplx c = i * (ks * ks) * d.perp * ((1.0 + r) / ed - t / em);
        out.tangential_e = std::abs(a + b - c);
        out.scale_e = std::max({std::abs(a), std::abs(b), std::abs(c)});
    }
    {
        const cplx a = d.par * (kzd * (r - 1.0) + kzm * t);
        const cplx b = i * (1.0 + r - t);
        out.tangential_h = std::abs(a - b);
        out.scale_h = std::max({std::abs(a), std::abs(i * (1.0 + r)), std::abs(i * t)});
    }
    return out;
}

BoundaryResiduals check_boundary_conditions(const InterfaceModel& m, double omega, double ks) {
    const ScatteringP s = scattering_p(m, omega, ks);
    return boundary_residuals(m, omega, ks, s.reflection, s.transmission);
}

}  // namespace plasmon
