#include "plasmon/materials.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "plasmon/errors.hpp"
#include "plasmon/format.hpp"

namespace plasmon {

namespace {

constexpr const char* kDParamHeader = "omega_ev,re_dperp_nm,im_dperp_nm,re_dpar_nm,im_dpar_nm";

std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

double parse_field(const std::string& field, std::size_t row) {
    const std::string f = trim(field);
    double value = 0.0;
    const auto* first = f.data();
    const auto* last = f.data() + f.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || f.empty())
        throw ParseError("cannot parse number '" + f + "'", row);
    if (!std::isfinite(value)) throw ParseError("non-finite value '" + f + "'", row);
    return value;
}

}  // namespace

void DrudeParams::validate() const {
    if (!(omega_p > 0.0)) throw DomainError("Drude plasma frequency must be positive");
    if (!(gamma_p >= 0.0)) throw DomainError("Drude damping must be non-negative");
}

cplx drude_epsilon(const DrudeParams& p, double omega) {
    if (!(omega > 0.0)) throw DomainError("drude_epsilon: omega must be positive");
    return 1.0 - p.omega_p * p.omega_p / (omega * cplx(omega, p.gamma_p));
}

void DParamTable::validate() const {
    if (omegas.size() < 2) throw ParseError("d-parameter table needs at least two nodes", 0);
    if (d_perp.size() != omegas.size() || d_par.size() != omegas.size())
        throw ParseError("d-parameter columns have mismatched lengths", 0);
    for (std::size_t k = 0; k < omegas.size(); ++k) {
        if (k > 0 && !(omegas[k] > omegas[k - 1]))
            throw ParseError("frequencies must be strictly increasing", k + 1);
        if (d_perp[k].imag() < 0.0) throw ParseError("Im d_perp must be non-negative", k + 1);
        if (charge_neutral && d_par[k] != cplx(0.0, 0.0))
            throw ParseError("d_par must vanish on a charge-neutral table", k + 1);
    }
    if (!(omegas.front() > 0.0)) throw ParseError("frequencies must be positive", 1);
}

void SurrogateDPerp::validate() const {
    if (!(pole_width > 0.0)) throw DomainError("surrogate pole width must be positive");
    if (!(pole_omega > 0.0)) throw DomainError("surrogate pole frequency must be positive");
    // Im d >= 0 for every omega > 0 requires Im d_inf >= 0 and a pole term that
    // never contributes negative absorption.
    // Im d >= 0 for all omega > 0 holds iff Im d_inf >= 0 and the pole residue is real, non-negative.
    if (d_inf.imag() < 0.0) throw DomainError("surrogate Im d_inf must be non-negative");
    if (amplitude.imag() != 0.0 || amplitude.real() < 0.0)
        throw DomainError("surrogate amplitude must be real and non-negative");
}

cplx eval_dperp(const DParamTable& table, double omega) {
    return eval_dparams(table, omega).perp;
}

cplx eval_dperp(const SurrogateDPerp& s, double omega) {
    return s.d_inf + s.amplitude / cplx(s.pole_omega * s.pole_omega - omega * omega, -omega * s.pole_width);
}

DParams eval_dparams(const DParamTable& table, double omega) {
    const auto& w = table.omegas;
    if (!(omega >= w.front() && omega <= w.back()))
        throw OutOfRangeError("d-parameter table evaluated at " + format_double(omega) +
                              " eV, outside [" + format_double(w.front()) + ", " +
                              format_double(w.back()) + "]");
    auto it = std::upper_bound(w.begin(), w.end(), omega);
    std::size_t hi = static_cast<std::size_t>(it - w.begin());
    if (hi == w.size()) return {table.d_perp.back(), table.d_par.back()};
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    if (omega == w[lo]) return {table.d_perp[lo], table.d_par[lo]};
    const double s = (omega - w[lo]) / (w[hi] - w[lo]);
    auto lerp = [s](cplx a, cplx b) {
        return cplx(a.real() + s * (b.real() - a.real()), a.imag() + s * (b.imag() - a.imag()));
    };
    return {lerp(table.d_perp[lo], table.d_perp[hi]), lerp(table.d_par[lo], table.d_par[hi])};
}

DParams eval_dparams(const SurrogateDPerp& s, double omega) {
    return {eval_dperp(s, omega), cplx(0.0, 0.0)};
}

DParams eval_dparams(const DParamSource& source, double omega) {
    return std::visit(
        [omega](const auto& src) -> DParams {
            using T = std::decay_t<decltype(src)>;
            if constexpr (std::is_same_v<T, LocalResponse>)
                return {};
            else
                return eval_dparams(src, omega);
        },
        source);
}

std::pair<double, double> dparam_domain(const DParamSource& source) {
    if (const auto* table = std::get_if<DParamTable>(&source))
        return {table->omega_min(), table->omega_max()};
    return {0.0, std::numeric_limits<double>::infinity()};
}

DParamTable load_dparam_table(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty d-parameter file", 0);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (trim(line) != kDParamHeader)
        throw ParseError("expected header '" + std::string(kDParamHeader) + "'", 0);

    DParamTable table;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        ++row;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 5) throw ParseError("expected 5 columns", row);
        double v[5];
        for (int c = 0; c < 5; ++c) v[c] = parse_field(fields[static_cast<std::size_t>(c)], row);
        if (!table.omegas.empty() && !(v[0] > table.omegas.back()))
            throw ParseError("frequencies must be strictly increasing", row);
        if (v[2] < 0.0) throw ParseError("Im d_perp must be non-negative", row);
        table.omegas.push_back(v[0]);
        table.d_perp.emplace_back(v[1], v[2]);
        table.d_par.emplace_back(v[3], v[4]);
    }
    table.charge_neutral = std::all_of(table.d_par.begin(), table.d_par.end(),
                                       [](cplx d) { return d == cplx(0.0, 0.0); });
    table.validate();
    return table;
}

DParamTable load_dparam_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open d-parameter file '" + path + "'");
    return load_dparam_table(in);
}

void write_dparam_table(std::ostream& out, const DParamTable& table) {
    out << kDParamHeader << '\n';
    for (std::size_t k = 0; k < table.omegas.size(); ++k) {
        out << format_double(table.omegas[k]) << ',' << format_double(table.d_perp[k].real()) << ','
            << format_double(table.d_perp[k].imag()) << ',' << format_double(table.d_par[k].real())
            << ',' << format_double(table.d_par[k].imag()) << '\n';
    }
}

}  // namespace plasmon
