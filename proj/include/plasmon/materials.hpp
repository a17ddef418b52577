#pragma once

#include <iosfwd>
#include <variant>
#include <vector>

#include "plasmon/units.hpp"

namespace plasmon {

/// Bulk Drude response of the metal half-space.
struct DrudeParams {
    double omega_p = 5.9;  // eV
    double gamma_p = 0.1;  // eV

    void validate() const;
};

/// eps_m(omega) = 1 - omega_p^2 / (omega (omega + i gamma_p)). Throws DomainError for omega <= 0.
cplx drude_epsilon(const DrudeParams& p, double omega);

/// Feibelman surface-response lengths at one frequency (nm).
struct DParams {
    cplx perp{0.0, 0.0};
    cplx par{0.0, 0.0};
};

/// Tabulated d-parameters, linearly interpolated on Re and Im separately.
///
/// Nodes must be strictly increasing and Im d_perp >= 0 everywhere. When the
/// table is charge neutral, d_par is identically zero.
struct DParamTable {
    std::vector<double> omegas;
    std::vector<cplx> d_perp;
    std::vector<cplx> d_par;
    bool charge_neutral = false;

    void validate() const;
    double omega_min() const { return omegas.front(); }
    double omega_max() const { return omegas.back(); }
};

/// Single-pole analytic stand-in for d_perp (d_par = 0):
///   d_perp(omega) = d_inf + amplitude / (pole_omega^2 - omega^2 - i omega pole_width)
struct SurrogateDPerp {
    cplx d_inf{0.05, 0.0};       // nm
    cplx amplitude{2.0, 0.0};    // eV^2 nm
    double pole_omega = 4.6;     // eV
    double pole_width = 1.2;     // eV

    void validate() const;
};

/// No surface correction: local response approximation.
struct LocalResponse {};

using DParamSource = std::variant<LocalResponse, DParamTable, SurrogateDPerp>;

cplx eval_dperp(const DParamTable& table, double omega);
cplx eval_dperp(const SurrogateDPerp& surrogate, double omega);

DParams eval_dparams(const DParamTable& table, double omega);
DParams eval_dparams(const SurrogateDPerp& surrogate, double omega);
DParams eval_dparams(const DParamSource& source, double omega);

/// Parses the d-parameter CSV (header `omega_ev,re_dperp_nm,im_dperp_nm,re_dpar_nm,im_dpar_nm`).
/// Errors carry the offending data row.
DParamTable load_dparam_table(std::istream& in);
DParamTable load_dparam_table_file(const std::string& path);

/// Writes the table with round-trip precision.
void write_dparam_table(std::ostream& out, const DParamTable& table);

/// Lowest/highest frequency at which the source can be evaluated.
/// Unbounded sources report 0 and +inf.
std::pair<double, double> dparam_domain(const DParamSource& source);

}  // namespace plasmon
