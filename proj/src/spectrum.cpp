#include "plasmon/spectrum.hpp"

#include <cmath>
#include <ostream>

#include "plasmon/errors.hpp"
#include "plasmon/format.hpp"
#include "plasmon/simd/kernels.hpp"

namespace plasmon {

namespace {

/// Trapezoid weights folded into the channel samples.
std::vector<double> weighted_channel(const SpectralTable& t, std::size_t channel) {
    const auto& a = t.channel(channel);
    const auto& w = t.weights();
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = w[k] * a[k];
    return out;
}

void require_below_continuum(const SpectralTable& t, double varpi) {
    if (!(varpi < t.omega_min()))
        throw DomainError("Y is ill defined inside the continuum (varpi = " + format_double(varpi) +
                          " eV >= " + format_double(t.omega_min()) + " eV)");
}

}  // namespace

double Y_eval(const SpectralTable& t, std::size_t channel, double omega_0, double varpi) {
    require_below_continuum(t, varpi);
    const auto wa = weighted_channel(t, channel);
    const auto& k = simd::active_kernels();
    return omega_0 - k.resolvent_sum(wa.data(), t.grid().data(), varpi, 1, wa.size());
}

double residue_weight(const SpectralTable& t, std::size_t channel, double varpi_b) {
    require_below_continuum(t, varpi_b);
    const auto wa = weighted_channel(t, channel);
    const auto& k = simd::active_kernels();
    return 1.0 / (1.0 + k.resolvent_sum(wa.data(), t.grid().data(), varpi_b, 2, wa.size()));
}

std::optional<BoundState> find_bound_state(const SpectralTable& t, std::size_t channel,
                                           double omega_0, const RootOptions& opt) {
    const auto wa = weighted_channel(t, channel);
    const auto& kern = simd::active_kernels();
    const double* grid = t.grid().data();
    const std::size_t n = wa.size();
    // g(varpi) = Y(varpi) - varpi is strictly decreasing below the continuum.
    auto g = [&](double varpi) { return omega_0 - kern.resolvent_sum(wa.data(), grid, varpi, 1, n) - varpi; };

    double hi = -opt.zero_offset;
    if (g(hi) >= 0.0) return std::nullopt;

    double lo = -omega_0;
    int doublings = 0;
    while (!(g(lo) > 0.0)) {
        lo *= 2.0;
        if (++doublings > opt.max_doublings)
            throw NumericalError("bound-state bracket not found after " +
                                 std::to_string(opt.max_doublings) + " doublings");
    }
    while (hi - lo > opt.tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    BoundState b;
    b.varpi_b = 0.5 * (lo + hi);
    b.channel = channel;
    b.weight_L = 1.0 / (1.0 + kern.resolvent_sum(wa.data(), grid, b.varpi_b, 2, n));
    return b;
}

std::vector<BoundState> find_bound_states(const SpectralTable& t, double omega_0,
                                          const RootOptions& opt) {
    std::vector<BoundState> out;
    for (std::size_t c = 0; c < t.channel_count(); ++c)
        if (auto b = find_bound_state(t, c, omega_0, opt)) out.push_back(*b);
    return out;
}

double residue_amplitude(const BoundState& b, std::size_t n_emitters) {
    if (n_emitters == 1) return b.weight_L;
    if (n_emitters == 2) return 0.5 * b.weight_L;
    throw UnsupportedError("bound-state residues are available for N = 1 or 2 only");
}

std::vector<cplx> asymptotic_Z(const std::vector<BoundState>& states, std::size_t n_emitters,
                               double t) {
    if (n_emitters == 0 || n_emitters > 2)
        throw UnsupportedError("asymptotic amplitudes are available for N = 1 or 2 only");
    std::vector<cplx> z(n_emitters, cplx(0.0, 0.0));
    for (const auto& b : states) {
        const cplx phase = std::polar(residue_amplitude(b, n_emitters), -b.varpi_b * t);
        z[0] += phase;
        if (n_emitters == 2) z[1] += (b.channel == 0 ? 1.0 : -1.0) * phase;
    }
    return z;
}

void write_bound_state_csv(std::ostream& out, std::size_t channel_count,
                           const std::vector<BoundState>& states) {
    out << "channel,varpi_b_ev,weight_L,exists\n";
    for (std::size_t c = 0; c < channel_count; ++c) {
        const BoundState* found = nullptr;
        for (const auto& b : states)
            if (b.channel == c) found = &b;
        if (found)
            out << c << ',' << format_double(found->varpi_b) << ',' << format_double(found->weight_L)
                << ",1\n";
        else
            out << c << ",nan,nan,0\n";
    }
}

}  // namespace plasmon
