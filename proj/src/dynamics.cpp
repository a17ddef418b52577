#include "plasmon/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "plasmon/errors.hpp"
#include "plasmon/format.hpp"
#include "plasmon/simd/kernels.hpp"

namespace plasmon {

MemoryKernel::MemoryKernel(double dt, std::size_t n_emitters, std::size_t lags)
    : dt_(dt), n_(n_emitters), lags_(lags),
      re_(n_emitters * n_emitters, std::vector<double>(lags, 0.0)),
      im_(n_emitters * n_emitters, std::vector<double>(lags, 0.0)) {}

cplx MemoryKernel::at(std::size_t lag, std::size_t i, std::size_t j) const {
    return {re_[i * n_ + j][lag], im_[i * n_ + j][lag]};
}

void MemoryKernel::set(std::size_t lag, std::size_t i, std::size_t j, cplx v) {
    re_[i * n_ + j][lag] = v.real();
    im_[i * n_ + j][lag] = v.imag();
}

std::size_t step_count(double T, double dt) {
    if (!(dt > 0.0) || !(T >= 0.0)) throw ConfigError("time horizon and step must be positive");
    return static_cast<std::size_t>(std::ceil(T / dt - 1e-9)) + 1;
}

MemoryKernel build_kernel(const SpectralTable& t, double T, double dt) {
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");
    if (dt > 0.1 / t.omega_max() * (1.0 + 1e-12))
        throw ConfigError("time step " + format_double(dt) + " does not resolve omega_max = " +
                          format_double(t.omega_max()) + " eV (need dt <= 0.1/omega_max)");
    const std::size_t lags = step_count(T, dt);
    const std::size_t n = t.n_emitters();
    const std::size_t nodes = t.size();
    MemoryKernel kernel(dt, n, lags);

    // Unique planes (i <= j); J is symmetric.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);

    const auto& grid = t.grid();
    std::vector<double> s_re(nodes), s_im(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        s_re[k] = std::cos(grid[k] * dt);
        s_im[k] = -std::sin(grid[k] * dt);
    }
    const auto& kern = simd::active_kernels();
    constexpr std::size_t kResync = 256;
    std::vector<double> p_re(nodes), p_im(nodes);

    for (std::size_t first = 0; first < pairs.size(); first += simd::kMaxPhasorWeights) {
        const std::size_t count = std::min(simd::kMaxPhasorWeights, pairs.size() - first);
        std::vector<std::vector<double>> weighted(count, std::vector<double>(nodes));
        std::vector<const double*> weight_ptrs;
        for (std::size_t p = 0; p < count; ++p) {
            const auto& v = t.element(pairs[first + p].first, pairs[first + p].second);
            for (std::size_t k = 0; k < nodes; ++k) weighted[p][k] = t.weights()[k] * v[k];
            weight_ptrs.push_back(weighted[p].data());
        }
        std::vector<cplx> acc(count);
        for (std::size_t l = 0; l < lags; ++l) {
            if (l % kResync == 0) {
                // Restart the phasor recurrence from exact values to bound drift.
                const double tau = static_cast<double>(l) * dt;
                for (std::size_t k = 0; k < nodes; ++k) {
                    p_re[k] = std::cos(grid[k] * tau);
                    p_im[k] = -std::sin(grid[k] * tau);
                }
            }
            std::fill(acc.begin(), acc.end(), cplx(0.0, 0.0));
            kern.phasor_accumulate(p_re.data(), p_im.data(), s_re.data(), s_im.data(), weight_ptrs.data(),
                                   count, acc.data(), nodes);
            for (std::size_t p = 0; p < count; ++p) {
                kernel.set(l, pairs[first + p].first, pairs[first + p].second, acc[p]);
                kernel.set(l, pairs[first + p].second, pairs[first + p].first, acc[p]);
            }
        }
    }
    return kernel;
}

AmplitudeTrajectory::AmplitudeTrajectory(double dt, std::size_t n_emitters, std::size_t steps)
    : dt_(dt), n_(n_emitters), steps_(steps), amps_(n_emitters * steps, cplx(0.0, 0.0)) {}

double AmplitudeTrajectory::norm(std::size_t step) const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += population(step, i);
    return std::sqrt(s);
}

AmplitudeTrajectory solve_volterra(const MemoryKernel& kernel, const EmitterParams& e,
                                   std::span<const cplx> a0, double T, const VolterraOptions& opt) {
    const std::size_t n = kernel.n_emitters();
    if (a0.size() != n) throw ConfigError("initial amplitude vector has the wrong length");
    double norm0 = 0.0;
    for (cplx v : a0) norm0 += std::norm(v);
    if (std::sqrt(norm0) > 1.0 + 1e-12) throw DomainError("initial amplitudes must satisfy |a0| <= 1");
    const double dt = kernel.dt();
    const std::size_t steps = step_count(T, dt);
    if (steps > kernel.lags()) throw ConfigError("memory kernel is shorter than the requested horizon");

    // Rotating-frame kernel, stored lag-reversed so the history sum is a
    // contiguous dot product: rev[L-1-l] = K(l dt) e^{i omega_0 l dt}.
    const std::size_t L = steps;
    const std::size_t nn = n * n;
    std::vector<std::vector<double>> rev_re(nn, std::vector<double>(L)), rev_im(nn, std::vector<double>(L));
    std::vector<cplx> k0(nn);
    for (std::size_t p = 0; p < nn; ++p) {
        const auto& kr = kernel.real_plane(p / n, p % n);
        const auto& ki = kernel.imag_plane(p / n, p % n);
        for (std::size_t l = 0; l < L; ++l) {
            const cplx v = cplx(kr[l], ki[l]) * std::polar(1.0, e.omega_0 * dt * static_cast<double>(l));
            rev_re[p][L - 1 - l] = v.real();
            rev_im[p][L - 1 - l] = v.imag();
        }
        k0[p] = cplx(rev_re[p][L - 1], rev_im[p][L - 1]);
    }
    auto k_rot = [&](std::size_t p, std::size_t l) { return cplx(rev_re[p][L - 1 - l], rev_im[p][L - 1 - l]); };

    std::vector<std::vector<double>> hist_re(n, std::vector<double>(L)), hist_im(n, std::vector<double>(L));
    AmplitudeTrajectory traj(dt, n, steps);
    std::vector<cplx> cur(a0.begin(), a0.end());
    for (std::size_t i = 0; i < n; ++i) {
        hist_re[i][0] = cur[i].real();
        hist_im[i][0] = cur[i].imag();
        traj.a(0, i) = cur[i];
    }

    const auto& kern = simd::active_kernels();
    std::vector<cplx> f_cur(n, cplx(0.0, 0.0)), hist(n), pred(n), f_pred(n), next(n);
    const double limit = 1.0 + opt.norm_tolerance;

    for (std::size_t s = 0; s + 1 < steps; ++s) {
        // History part of the memory integral at t_{s+1}: trapezoid over
        // tau_0..tau_s, excluding the unknown endpoint tau_{s+1}.
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc(0.0, 0.0);
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t p = i * n + j;
                if (s >= 1)
                    acc += kern.complex_dot(rev_re[p].data() + (L - 1 - s), rev_im[p].data() + (L - 1 - s),
                                            hist_re[j].data() + 1, hist_im[j].data() + 1, s);
                acc += 0.5 * k_rot(p, s + 1) * cplx(hist_re[j][0], hist_im[j][0]);
            }
            hist[i] = dt * acc;
        }
        for (std::size_t i = 0; i < n; ++i) pred[i] = cur[i] + dt * f_cur[i];
        for (std::size_t i = 0; i < n; ++i) {
            cplx local(0.0, 0.0);
            for (std::size_t j = 0; j < n; ++j) local += k0[i * n + j] * pred[j];
            f_pred[i] = -(0.5 * dt * local + hist[i]);
        }
        for (std::size_t i = 0; i < n; ++i) next[i] = cur[i] + 0.5 * dt * (f_cur[i] + f_pred[i]);
        for (std::size_t i = 0; i < n; ++i) {
            cplx local(0.0, 0.0);
            for (std::size_t j = 0; j < n; ++j) local += k0[i * n + j] * next[j];
            f_cur[i] = -(0.5 * dt * local + hist[i]);
        }

        const double t_next = static_cast<double>(s + 1) * dt;
        const cplx unrotate = std::polar(1.0, -e.omega_0 * t_next);
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cur[i] = next[i];
            hist_re[i][s + 1] = cur[i].real();
            hist_im[i][s + 1] = cur[i].imag();
            traj.a(s + 1, i) = cur[i] * unrotate;
            norm2 += std::norm(cur[i]);
        }
        if (!(std::sqrt(norm2) <= limit))
            throw NumericalError("amplitude norm " + format_double(std::sqrt(norm2)) + " exceeds 1 at t = " +
                                 format_double(t_next) + "; reduce dt");
    }
    return traj;
}

double principal_value(std::span<const double> grid, std::span<const double> f, double w0) {
    const std::size_t n = grid.size();
    if (n < 3 || !(w0 > grid.front() && w0 < grid.back()))
        throw DomainError("principal value needs omega_0 strictly inside the grid");
    auto it = std::upper_bound(grid.begin(), grid.end(), w0);
    const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
    const std::size_t lo = hi - 1;
    const double s = (w0 - grid[lo]) / (grid[hi] - grid[lo]);
    const double f0 = f[lo] + s * (f[hi] - f[lo]);
    // Derivative at w0, used where a node sits on w0: central about that node.
    const double slope = (grid[lo] == w0) ? (f[hi] - f[lo - 1]) / (grid[hi] - grid[lo - 1])
                                          : (f[hi] - f[lo]) / (grid[hi] - grid[lo]);

    const auto w = trapezoid_weights(grid);
    double regular = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = grid[k] - w0;
        regular += w[k] * (d == 0.0 ? slope : (f[k] - f0) / d);
    }
    return regular + f0 * std::log((grid.back() - w0) / (w0 - grid.front()));
}

MarkovChannel markov_channel(const SpectralTable& t, std::span<const double> values, double omega_0) {
    MarkovChannel c;
    const auto& g = t.grid();
    auto it = std::upper_bound(g.begin(), g.end(), omega_0);
    if (it == g.begin() || it == g.end()) throw DomainError("omega_0 must lie inside the grid");
    const std::size_t hi = static_cast<std::size_t>(it - g.begin());
    const double s = (omega_0 - g[hi - 1]) / (g[hi] - g[hi - 1]);
    const double j0 = values[hi - 1] + s * (values[hi] - values[hi - 1]);
    c.gamma = 2.0 * kPi * j0;
    c.omega = omega_0 - principal_value(g, values, omega_0);
    return c;
}

std::vector<cplx> markov_solution(const SpectralTable& t, const EmitterParams& e,
                                  std::span<const cplx> a0, double time) {
    const std::size_t n = t.n_emitters();
    if (a0.size() != n) throw ConfigError("initial amplitude vector has the wrong length");
    auto evolve = [&](const MarkovChannel& c) {
        return std::exp(cplx(-0.5 * c.gamma * time, -c.omega * time));
    };
    if (n == 1) {
        const auto c = markov_channel(t, t.channel(0), e.omega_0);
        return {evolve(c) * a0[0]};
    }
    if (n == 2) {
        // J = C diag(A+, A-) C with C = ((1,1),(1,-1))/sqrt2 orthogonal and symmetric.
        const cplx plus = evolve(markov_channel(t, t.channel(0), e.omega_0));
        const cplx minus = evolve(markov_channel(t, t.channel(1), e.omega_0));
        const cplx u = 0.5 * (a0[0] + a0[1]);
        const cplx v = 0.5 * (a0[0] - a0[1]);
        return {plus * u + minus * v, plus * u - minus * v};
    }
    throw UnsupportedError("Markov solution is available for N = 1 or 2 only");
}

DecayRateSeries decay_rate(const AmplitudeTrajectory& traj, std::size_t i, double threshold) {
    if (i >= traj.n_emitters()) throw DomainError("decay_rate: emitter index out of range");
    DecayRateSeries out;
    const std::size_t n = traj.size();
    const double dt = traj.dt();
    out.rates.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        const cplx a = traj.a(s, i);
        if (std::abs(a) < threshold) {
            out.truncated = true;
            break;
        }
        // Interior: central difference of a. Ends: one-sided second-order
        // difference of ln|a|, which carries the same real part.
        double rate;
        if (n < 2) {
            rate = 0.0;
        } else if (s == 0 || s + 1 == n) {
            const std::size_t s1 = s == 0 ? 1 : s - 1;
            const std::size_t s2 = s == 0 ? std::min<std::size_t>(2, n - 1) : (s >= 2 ? s - 2 : 0);
            const double sign = s == 0 ? 1.0 : -1.0;
            const double l0 = std::log(std::abs(a)), l1 = std::log(std::abs(traj.a(s1, i))),
                         l2 = std::log(std::abs(traj.a(s2, i)));
            rate = -sign * (-3.0 * l0 + 4.0 * l1 - l2) / (2.0 * dt);
        } else {
            const cplx deriv = (traj.a(s + 1, i) - traj.a(s - 1, i)) / (2.0 * dt);
            rate = -(deriv / a).real();
        }
        out.rates.push_back(rate);
    }
    return out;
}

void write_trajectory_csv(std::ostream& out, const AmplitudeTrajectory& traj, std::size_t stride) {
    const std::size_t n = traj.n_emitters();
    stride = std::max<std::size_t>(1, stride);
    out << "t_hbar_per_ev";
    for (std::size_t i = 1; i <= n; ++i) out << ",re_a" << i << ",im_a" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",pop" << i;
    out << ",gamma1_ev\n";
    const DecayRateSeries g = decay_rate(traj, 0);
    for (std::size_t s = 0; s < traj.size(); s += stride) {
        out << format_double(traj.time(s));
        for (std::size_t i = 0; i < n; ++i)
            out << ',' << format_double(traj.a(s, i).real()) << ',' << format_double(traj.a(s, i).imag());
        for (std::size_t i = 0; i < n; ++i) out << ',' << format_double(traj.population(s, i));
        out << ',' << (s < g.rates.size() ? format_double(g.rates[s]) : std::string("nan")) << '\n';
    }
}

void write_decay_rate_csv(std::ostream& out, const AmplitudeTrajectory& traj, std::size_t stride) {
    const std::size_t n = traj.n_emitters();
    stride = std::max<std::size_t>(1, stride);
    out << "t_hbar_per_ev";
    for (std::size_t i = 0; i < n; ++i) out << ",gamma" << (i + 1) << "_ev";
    out << '\n';
    std::vector<DecayRateSeries> g;
    for (std::size_t i = 0; i < n; ++i) g.push_back(decay_rate(traj, i));
    for (std::size_t s = 0; s < traj.size(); s += stride) {
        out << format_double(traj.time(s));
        for (std::size_t i = 0; i < n; ++i)
            out << ',' << (s < g[i].rates.size() ? format_double(g[i].rates[s]) : std::string("nan"));
        out << '\n';
    }
}

}  // namespace plasmon
