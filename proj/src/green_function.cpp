#include "plasmon/green_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plasmon/errors.hpp"
#include "plasmon/quadrature.hpp"

namespace plasmon {

Geometry::Geometry(double z0, std::vector<std::array<double, 2>> emitter_xy)
    : z0_(z0), xy_(std::move(emitter_xy)) {
    if (!(z0_ > 0.0)) throw DomainError("emitter height z0 must be positive");
    if (xy_.empty()) throw DomainError("geometry needs at least one emitter");
    for (std::size_t i = 0; i < xy_.size(); ++i)
        for (std::size_t j = i + 1; j < xy_.size(); ++j)
            if (r_par(i, j) == 0.0) throw DomainError("emitters must not coincide");
}

Geometry Geometry::line(double z0, std::size_t n, double separation) {
    std::vector<std::array<double, 2>> xy(n);
    for (std::size_t i = 0; i < n; ++i) xy[i] = {static_cast<double>(i) * separation, 0.0};
    return Geometry(z0, std::move(xy));
}

double Geometry::r_par(std::size_t i, std::size_t j) const {
    const auto& a = xy_.at(i);
    const auto& b = xy_.at(j);
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(tail_cut_tol > 0.0 && tail_cut_tol < 1.0))
        throw ConfigError("quadrature tolerances must be positive (tail_cut_tol < 1)");
    if (max_panels < 1) throw ConfigError("max_panels must be at least 1");
}

double im_gzz_free(double omega, double r_par, double eps_d) {
    const double k = std::sqrt(eps_d) * vacuum_wavenumber(omega);
    const double x = k * r_par;
    if (x < 1e-3) {
        // Series of sin x + (x cos x - sin x)/x^2 over 4 pi r.
        const double x2 = x * x;
        return k / (6.0 * kPi) * (1.0 - x2 / 5.0 + x2 * x2 * 3.0 / 280.0);
    }
    const double s = std::sin(x);
    const double c = std::cos(x);
    return (s + (x * c - s) / (x * x)) / (4.0 * kPi * r_par);
}

std::vector<double> bessel_j0_zeros(double x_max) {
    std::vector<double> zeros;
    for (int n = 1;; ++n) {
        // McMahon expansion, then Newton on J0 with J0' = -J1.
        const double beta = (n - 0.25) * kPi;
        double x = beta + 1.0 / (8.0 * beta) - 31.0 / (384.0 * beta * beta * beta);
        for (int it = 0; it < 6; ++it) {
            const double step = std::cyl_bessel_j(0.0, x) / std::cyl_bessel_j(1.0, x);
            x += step;
            if (std::abs(step) < 1e-15 * x) break;
        }
        if (!(x < x_max)) break;
        zeros.push_back(x);
    }
    return zeros;
}

namespace {

double bessel_j0(double x) { return x == 0.0 ? 1.0 : std::cyl_bessel_j(0.0, x); }

void add_break(std::vector<double>& breaks, double value, double lo, double hi) {
    if (std::isfinite(value) && value > lo && value < hi) breaks.push_back(value);
}

std::vector<double> finalize_breaks(std::vector<double> breaks) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    return breaks;
}

}  // namespace

GreenEvaluation im_gzz_separation(const InterfaceModel& m, double z0, double r_par,
                                  const QuadratureSpec& q, double omega) {
    if (!(omega > 0.0)) throw DomainError("im_gzz: omega must be positive");
    if (!(r_par >= 0.0)) throw DomainError("im_gzz: separation must be non-negative");
    if (!(z0 > 0.0)) throw DomainError("im_gzz: z0 must be positive");

    const double kd = std::sqrt(m.eps_d) * vacuum_wavenumber(omega);
    const double z_plus = 2.0 * z0;
    const double inv4pi = 1.0 / (4.0 * kPi);
    const double half_pi = 0.5 * kPi;
    GreenEvaluation out;

    // Bessel zeros in ks, shared by both regions.
    const double k_max = std::max(4.0 * kd, -std::log(q.tail_cut_tol) / z_plus);
    std::vector<double> ks_zeros;
    if (r_par > 0.0) {
        for (double x : bessel_j0_zeros(k_max * r_par)) ks_zeros.push_back(x / r_par);
    }

    // Propagating region ks = kd sin(theta): only this part of the direct
    // (z^- = 0) term carries an imaginary part.
    std::vector<double> theta_breaks = {0.0, half_pi};
    for (double ks : ks_zeros)
        if (ks < kd) add_break(theta_breaks, std::asin(ks / kd), 0.0, half_pi);
    theta_breaks = finalize_breaks(std::move(theta_breaks));

    if (r_par == 0.0) {
        out.value += im_gzz_free(omega, 0.0, m.eps_d);
    } else {
        auto direct = [&](double theta) {
            const double s = std::sin(theta);
            return inv4pi * kd * s * s * s * bessel_j0(kd * s * r_par);
        };
        const auto res = integrate_adaptive(direct, theta_breaks, q.rel_tol, q.abs_tol, q.max_panels);
        out.value += res.value;
        out.error += res.error;
        out.evaluations += res.evaluations;
    }

    if (!m.reflection_enabled) return out;

    const ReflectionAtFrequency refl(m, omega);

    auto reflected_propagating = [&](double theta) {
        const double s = std::sin(theta);
        const double ks = kd * s;
        const cplx phase = std::polar(1.0, kd * std::cos(theta) * z_plus);
        return inv4pi * kd * s * s * s * bessel_j0(ks * r_par) * (refl(ks) * phase).real();
    };
    {
        const auto res = integrate_adaptive(reflected_propagating, theta_breaks, q.rel_tol, q.abs_tol,
                                            q.max_panels);
        out.value += res.value;
        out.error += res.error;
        out.evaluations += res.evaluations;
    }

    // Evanescent region ks = kd cosh(u); the integrand decays like exp(-ks z^+).
    const double u_max = std::acosh(k_max / kd);
    auto to_u = [kd](double ks) { return std::acosh(ks / kd); };
    std::vector<double> u_breaks = {0.0, u_max};
    for (double ks : ks_zeros)
        if (ks > kd) add_break(u_breaks, to_u(ks), 0.0, u_max);
    {
        // Surface-plasmon pole: retarded local estimate and the quasistatic
        // position shifted by d_perp.
        const cplx em = refl.eps_m();
        const cplx ed(m.eps_d, 0.0);
        const double k0 = vacuum_wavenumber(omega);
        const cplx ks_local = k0 * std::sqrt(ed * em / (ed + em));
        if (ks_local.real() > kd) add_break(u_breaks, to_u(ks_local.real()), 0.0, u_max);
        const cplx dp = refl.dparams().perp;
        if (std::abs(dp) > 0.0) {
            const cplx ks_qse = (em + ed) / ((em - ed) * dp);
            if (ks_qse.real() > kd) add_break(u_breaks, to_u(ks_qse.real()), 0.0, u_max);
        }
        // Seed a few panels across the decay scale so narrow features are seen.
        for (double ks : {0.25 / z_plus, 0.5 / z_plus, 1.0 / z_plus, 2.0 / z_plus, 4.0 / z_plus, 8.0 / z_plus})
            if (ks > kd) add_break(u_breaks, to_u(ks), 0.0, u_max);
    }
    u_breaks = finalize_breaks(std::move(u_breaks));

    auto reflected_evanescent = [&](double u) {
        const double ch = std::cosh(u);
        const double ks = kd * ch;
        const double kappa = kd * std::sinh(u);
        return inv4pi * kd * ch * ch * ch * bessel_j0(ks * r_par) * refl(ks).imag() *
               std::exp(-kappa * z_plus);
    };
    {
        const auto res = integrate_adaptive(reflected_evanescent, u_breaks, q.rel_tol, q.abs_tol,
                                            q.max_panels);
        out.value += res.value;
        out.error += res.error;
        out.evaluations += res.evaluations;
    }

    // Tail beyond k_max: |J0| <= 1 and ks^3/(kd^2 kappa) ~ ks^2/kd^2.
    const double r_tail = std::abs(refl(k_max));
    const double e = std::exp(-k_max * z_plus);
    const double tail = inv4pi * r_tail / (kd * kd) * e *
                        (k_max * k_max / z_plus + 2.0 * k_max / (z_plus * z_plus) +
                         2.0 / (z_plus * z_plus * z_plus));
    out.error += 2.0 * tail;
    return out;
}

GreenEvaluation im_gzz_detail(const InterfaceModel& m, const Geometry& g, const QuadratureSpec& q,
                              double omega, std::size_t i, std::size_t j) {
    if (i >= g.size() || j >= g.size()) throw DomainError("im_gzz: emitter index out of range");
    return im_gzz_separation(m, g.z0(), g.r_par(i, j), q, omega);
}

double im_gzz(const InterfaceModel& m, const Geometry& g, const QuadratureSpec& q, double omega,
              std::size_t i, std::size_t j) {
    return im_gzz_detail(m, g, q, omega, i, j).value;
}

}  // namespace plasmon
