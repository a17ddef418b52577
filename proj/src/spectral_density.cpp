#include "plasmon/spectral_density.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "plasmon/errors.hpp"
#include "plasmon/format.hpp"

namespace plasmon {

void EmitterParams::validate() const {
    if (!(omega_0 > 0.0)) throw DomainError("emitter frequency must be positive");
    if (!(coupling_alpha > 0.0)) throw DomainError("coupling alpha must be positive");
}

double spectral_element(const InterfaceModel& m, const Geometry& g, const QuadratureSpec& q,
                        const EmitterParams& e, double omega, std::size_t i, std::size_t j) {
    const double k0 = vacuum_wavenumber(omega);
    return e.coupling_alpha * k0 * k0 * im_gzz(m, g, q, omega, i, j);
}

double gamma0_free(const EmitterParams& e) {
    const double k0 = vacuum_wavenumber(e.omega_0);
    return e.coupling_alpha * k0 * k0 * k0 / 3.0;
}

void GridSpec::validate() const {
    if (!(omega_min > 0.0) || !(omega_max > omega_min))
        throw ConfigError("grid needs 0 < omega_min < omega_max");
    if (count < 2) throw ConfigError("grid needs at least two nodes");
    if (refine_halfwidth < 0.0) throw ConfigError("refine_halfwidth must be non-negative");
}

std::vector<double> make_grid(const GridSpec& spec, double domain_lo, double domain_hi) {
    spec.validate();
    const double lo = std::max(spec.omega_min, domain_lo);
    const double hi = std::min(spec.omega_max, domain_hi);
    if (!(hi > lo)) throw ConfigError("frequency grid is empty after clipping to the d-parameter domain");
    std::vector<double> grid;
    grid.reserve(spec.count + spec.refine_count);
    for (std::size_t k = 0; k < spec.count; ++k)
        grid.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(spec.count - 1));
    grid.back() = hi;
    if (spec.refine_count >= 2 && spec.refine_halfwidth > 0.0) {
        const double a = std::max(lo, spec.refine_center - spec.refine_halfwidth);
        const double b = std::min(hi, spec.refine_center + spec.refine_halfwidth);
        if (b > a) {
            for (std::size_t k = 0; k < spec.refine_count; ++k)
                grid.push_back(a + (b - a) * static_cast<double>(k) /
                                       static_cast<double>(spec.refine_count - 1));
        }
    }
    std::sort(grid.begin(), grid.end());
    // Drop near-duplicates so trapezoid weights stay well conditioned.
    const double min_gap = 1e-9 * (hi - lo);
    std::vector<double> out;
    out.reserve(grid.size());
    for (double w : grid)
        if (out.empty() || w - out.back() > min_gap) out.push_back(w);
    if (out.back() != hi) out.back() = hi;
    return out;
}

std::vector<double> make_grid(const GridSpec& spec, const InterfaceModel& m) {
    GridSpec s = spec;
    if (s.refine_center <= 0.0) s.refine_center = m.drude.omega_p / std::sqrt(1.0 + m.eps_d);
    if (s.refine_halfwidth <= 0.0) s.refine_halfwidth = 5.0 * std::max(m.drude.gamma_p, 0.01);
    const auto [lo, hi] = dparam_domain(m.dsource);
    return make_grid(s, lo, hi);
}

std::vector<double> trapezoid_weights(std::span<const double> grid) {
    const std::size_t n = grid.size();
    std::vector<double> w(n, 0.0);
    if (n < 2) return w;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double h = 0.5 * (grid[k + 1] - grid[k]);
        w[k] += h;
        w[k + 1] += h;
    }
    return w;
}

SpectralTable::SpectralTable(std::vector<double> grid, std::size_t n_emitters,
                             std::vector<std::vector<double>> elements)
    : grid_(std::move(grid)), n_(n_emitters), elements_(std::move(elements)) {
    if (grid_.size() < 2) throw DomainError("spectral table needs at least two nodes");
    if (!(grid_.front() > 0.0)) throw DomainError("spectral grid must start above zero");
    for (std::size_t k = 1; k < grid_.size(); ++k)
        if (!(grid_[k] > grid_[k - 1])) throw DomainError("spectral grid must be strictly increasing");
    if (n_ == 0 || elements_.size() != n_ * n_) throw DomainError("spectral table shape mismatch");
    for (const auto& e : elements_)
        if (e.size() != grid_.size()) throw DomainError("spectral element length mismatch");
    weights_ = trapezoid_weights(grid_);

    if (n_ == 1) {
        channels_ = {elements_[0]};
        similarity_ = {1.0};
    } else if (n_ == 2) {
        std::vector<double> plus(grid_.size()), minus(grid_.size());
        for (std::size_t k = 0; k < grid_.size(); ++k) {
            plus[k] = elements_[0][k] + elements_[1][k];
            minus[k] = elements_[0][k] - elements_[1][k];
        }
        channels_ = {std::move(plus), std::move(minus)};
        const double s = 1.0 / std::sqrt(2.0);
        similarity_ = {s, s, s, -s};
    }
}

SpectralTable SpectralTable::single(std::vector<double> grid, std::vector<double> j00) {
    std::vector<std::vector<double>> el;
    el.push_back(std::move(j00));
    return SpectralTable(std::move(grid), 1, std::move(el));
}

const std::vector<double>& SpectralTable::element(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw DomainError("spectral element index out of range");
    return elements_[i * n_ + j];
}

const std::vector<double>& SpectralTable::channel(std::size_t c) const {
    if (c >= channels_.size())
        throw UnsupportedError("channel " + std::to_string(c) + " not available for N = " +
                               std::to_string(n_));
    return channels_[c];
}

double SpectralTable::interpolate(std::size_t i, std::size_t j, double omega) const {
    if (!(omega >= grid_.front() && omega <= grid_.back()))
        throw OutOfRangeError("spectral density requested outside the grid");
    const auto& v = element(i, j);
    auto it = std::upper_bound(grid_.begin(), grid_.end(), omega);
    std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
    if (hi >= grid_.size()) return v.back();
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double s = (omega - grid_[lo]) / (grid_[hi] - grid_[lo]);
    return v[lo] + s * (v[hi] - v[lo]);
}

SpectralTable build_spectral_table(const InterfaceModel& m, const Geometry& g,
                                   const QuadratureSpec& q, const EmitterParams& e,
                                   const GridSpec& grid_spec, unsigned threads) {
    return build_spectral_table(m, g, q, e, make_grid(grid_spec, m), threads);
}

SpectralTable build_spectral_table(const InterfaceModel& m, const Geometry& g,
                                   const QuadratureSpec& q, const EmitterParams& e,
                                   std::vector<double> grid, unsigned threads) {
    m.validate();
    q.validate();
    e.validate();
    const std::size_t n = g.size();
    const std::size_t nodes = grid.size();

    // Pairs with equal in-plane separation share one Sommerfeld integral.
    std::map<double, std::size_t> separation_index;
    std::vector<std::size_t> pair_slot(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double r = g.r_par(i, j);
            auto [it, inserted] = separation_index.emplace(r, separation_index.size());
            pair_slot[i * n + j] = it->second;
        }
    std::vector<double> separations(separation_index.size());
    for (const auto& [r, idx] : separation_index) separations[idx] = r;

    std::vector<std::vector<double>> values(separations.size(), std::vector<double>(nodes));
    std::vector<double> errors(nodes, 0.0);

    std::mutex failure_mutex;
    std::exception_ptr failure;
    double failure_omega = 0.0;

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const double omega = grid[k];
            try {
                const double k0 = vacuum_wavenumber(omega);
                const double scale = e.coupling_alpha * k0 * k0;
                for (std::size_t s = 0; s < separations.size(); ++s) {
                    const GreenEvaluation ge = im_gzz_separation(m, g.z0(), separations[s], q, omega);
                    values[s][k] = scale * ge.value;
                    errors[k] = std::max(errors[k], scale * ge.error);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure || omega < failure_omega) {
                    failure = std::current_exception();
                    failure_omega = omega;
                }
                return;
            }
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(nodes)));
    if (workers == 1) {
        work(0, nodes);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (nodes + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t b = w * chunk;
            const std::size_t en = std::min(nodes, b + chunk);
            if (b < en) pool.emplace_back(work, b, en);
        }
    }
    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const ConvergenceError& err) {
            throw ConvergenceError("spectral node at " + format_double(failure_omega) +
                                       " eV: " + err.what(),
                                   err.error_estimate());
        } catch (const OutOfRangeError& err) {
            throw OutOfRangeError("spectral node at " + format_double(failure_omega) + " eV: " + err.what());
        } catch (const Error& err) {
            throw NumericalError("spectral node at " + format_double(failure_omega) + " eV: " + err.what());
        }
    }

    std::vector<std::vector<double>> elements(n * n);
    for (std::size_t p = 0; p < n * n; ++p) elements[p] = values[pair_slot[p]];
    SpectralTable table(std::move(grid), n, std::move(elements));
    table.set_max_error_estimate(*std::max_element(errors.begin(), errors.end()));
    return table;
}

double integrate_element(const SpectralTable& t, std::size_t i, std::size_t j) {
    const auto& v = t.element(i, j);
    const auto& w = t.weights();
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) s += w[k] * v[k];
    return s;
}

PeakReport find_peak(const SpectralTable& t, double gamma0) {
    const auto& x = t.grid();
    const auto& y = t.element(0, 0);
    const std::size_t n = y.size();
    const std::size_t k = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    PeakReport r;
    r.omega_peak = x[k];
    r.j_peak = y[k];
    if (k > 0 && k + 1 < n) {
        // Vertex of the parabola through the three nodes around the maximum.
        const double x0 = x[k - 1], x1 = x[k], x2 = x[k + 1];
        const double y0 = y[k - 1], y1 = y[k], y2 = y[k + 1];
        const double d01 = (y1 - y0) / (x1 - x0);
        const double d12 = (y2 - y1) / (x2 - x1);
        const double curv = (d12 - d01) / (x2 - x0);
        if (curv < 0.0) {
            const double xv = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
            if (xv > x0 && xv < x2) {
                r.omega_peak = xv;
                r.j_peak = y1 + d01 * (xv - x1) + curv * (xv - x0) * (xv - x1);
            }
        }
    }
    const double half = 0.5 * r.j_peak;
    double left = 0.0, right = 0.0;
    for (std::size_t i = k; i > 0; --i)
        if (y[i - 1] < half) {
            left = x[i - 1] + (half - y[i - 1]) * (x[i] - x[i - 1]) / (y[i] - y[i - 1]);
            break;
        }
    for (std::size_t i = k; i + 1 < n; ++i)
        if (y[i + 1] < half) {
            right = x[i] + (y[i] - half) * (x[i + 1] - x[i]) / (y[i] - y[i + 1]);
            break;
        }
    r.fwhm = (left > 0.0 && right > 0.0) ? right - left : 0.0;
    r.ratio_to_gamma0 = gamma0 > 0.0 ? r.j_peak / gamma0 : 0.0;
    const double floor = 0.01 * y[k];
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (y[i] > floor && y[i] > y[i - 1] && y[i] >= y[i + 1]) ++r.peak_count;
    if (y[0] > floor && y[0] > y[1]) ++r.peak_count;
    if (y[n - 1] > floor && y[n - 1] > y[n - 2]) ++r.peak_count;
    return r;
}

void write_spectral_csv(std::ostream& out, const SpectralTable& t) {
    const bool pair = t.n_emitters() >= 2;
    out << "omega_ev,J00_ev";
    if (pair) out << ",J01_ev,Aplus_ev,Aminus_ev";
    out << '\n';
    for (std::size_t k = 0; k < t.size(); ++k) {
        out << format_double(t.grid()[k]) << ',' << format_double(t.J(k, 0, 0));
        if (pair) {
            const double j0 = t.J(k, 0, 0);
            const double j1 = t.J(k, 0, 1);
            out << ',' << format_double(j1) << ',' << format_double(j0 + j1) << ','
                << format_double(j0 - j1);
        }
        out << '\n';
    }
}

}  // namespace plasmon
