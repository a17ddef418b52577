#include "plasmon/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "plasmon/dynamics.hpp"
#include "plasmon/entanglement.hpp"
#include "plasmon/format.hpp"
#include "plasmon/simd/kernels.hpp"

namespace plasmon {

namespace {

SelfTestResult check(std::string name, double value, double limit) {
    return {std::move(name), value < limit, "max error " + format_double(value) + " (limit " + format_double(limit) + ")"};
}

SelfTestResult lra_recovery() {
    InterfaceModel m;
    double worst = 0.0;
    for (int a = 0; a < 20; ++a) {
        const double w = 0.2 + 0.3 * a;
        const cplx em = m.eps_m(w);
        for (int b = 0; b < 20; ++b) {
            const double ks = 0.5 * vacuum_wavenumber(w) * b + 0.01 * b * b;
            const cplx kd = kz(w, ks, m.eps_d), km = kz(w, ks, em);
            const cplx fresnel = (em * kd - m.eps_d * km) / (em * kd + m.eps_d * km);
            worst = std::max(worst, std::abs(reflection_p(m, w, ks) - fresnel) / std::abs(fresnel));
        }
    }
    return check("local-response reflection equals Fresnel", worst, 1e-12);
}

SelfTestResult free_rate() {
    double worst = 0.0;
    for (double eps : {1.0, 2.25, 4.0}) {
        InterfaceModel m;
        m.eps_d = eps;
        m.reflection_enabled = false;
        EmitterParams e;
        const double j = spectral_element(m, Geometry::line(2.9, 1, 0.0), QuadratureSpec{}, e, e.omega_0, 0, 0);
        worst = std::max(worst, std::abs(2.0 * kPi * j / (std::sqrt(eps) * gamma0_free(e)) - 1.0));
    }
    return check("free-space rate 2 pi J = sqrt(eps_d) Gamma0", worst, 1e-6);
}

SelfTestResult boundary() {
    InterfaceModel m;
    m.dsource = SurrogateDPerp{};
    double worst = 0.0;
    for (int a = 0; a < 20; ++a)
        for (int b = 0; b < 20; ++b) {
            const double w = 0.3 + 0.35 * a;
            worst = std::max(worst, check_boundary_conditions(m, w, 0.05 * b * b + 1e-3).max_relative());
        }
    return check("modified boundary conditions satisfied", worst, 1e-10);
}

SelfTestResult pseudomode() {
    const double g2 = 0.5, wc = 2.5, kappa = 0.2, dt = 0.01, T = 30.0;
    EmitterParams e;
    MemoryKernel k(dt, 1, step_count(T, dt));
    for (std::size_t l = 0; l < k.lags(); ++l)
        k.set(l, 0, 0, g2 * std::exp(cplx(-kappa, -wc) * (static_cast<double>(l) * dt)));
    const std::vector<cplx> a0{1.0};
    const auto traj = solve_volterra(k, e, a0, T);
    // a' = -i w0 a - i g b, b' = -(kappa + i wc) b - i g a, classical RK4 on a finer step.
    const double g = std::sqrt(g2);
    cplx a = 1.0, b = 0.0;
    const int sub = 10;
    const double h = dt / sub;
    auto rhs = [&](cplx x, cplx y, cplx& dx, cplx& dy) {
        dx = cplx(0, -e.omega_0) * x - cplx(0, g) * y;
        dy = -cplx(kappa, wc) * y - cplx(0, g) * x;
    };
    double worst = 0.0;
    for (std::size_t s = 0; s < traj.size(); ++s) {
        worst = std::max(worst, std::abs(traj.a(s, 0) - a));
        for (int q = 0; q < sub; ++q) {
            cplx k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
            rhs(a, b, k1a, k1b);
            rhs(a + 0.5 * h * k1a, b + 0.5 * h * k1b, k2a, k2b);
            rhs(a + 0.5 * h * k2a, b + 0.5 * h * k2b, k3a, k3b);
            rhs(a + h * k3a, b + h * k3b, k4a, k4b);
            a += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
            b += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        }
    }
    return check("Volterra solver matches the pseudomode ODE", worst, 1e-3);
}

SelfTestResult wootters() {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 2000; ++k) {
        cplx a1(u(rng), u(rng)), a2(u(rng), u(rng));
        const double n = std::sqrt(std::norm(a1) + std::norm(a2));
        if (n > 1.0) {
            a1 /= n;
            a2 /= n;
        }
        worst = std::max(worst, std::abs(concurrence(reduced_density(a1, a2)) - 2.0 * std::abs(a1 * std::conj(a2))));
    }
    return check("Wootters concurrence equals 2|a1 a2*|", worst, 1e-9);
}

SelfTestResult simd_equivalence() {
    const simd::Kernels* fast = simd::avx2_kernels();
    if (!fast) return {"SIMD kernels match scalar reference", true, "AVX2 unavailable, scalar only"};
    const auto& ref = simd::scalar_kernels();
    const std::size_t n = 1003;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> ar(n), ai(n), br(n), bi(n);
    for (std::size_t k = 0; k < n; ++k) {
        ar[k] = u(rng);
        ai[k] = u(rng);
        br[k] = u(rng);
        bi[k] = u(rng);
    }
    const cplx x = ref.complex_dot(ar.data(), ai.data(), br.data(), bi.data(), n);
    const cplx y = fast->complex_dot(ar.data(), ai.data(), br.data(), bi.data(), n);
    return check("SIMD kernels match scalar reference", std::abs(x - y) / std::abs(x), 1e-12);
}

}  // namespace

std::vector<SelfTestResult> run_selftest() {
    std::vector<SelfTestResult> out;
    out.push_back(lra_recovery());
    out.push_back(free_rate());
    out.push_back(boundary());
    out.push_back(pseudomode());
    out.push_back(wootters());
    out.push_back(simd_equivalence());
    return out;
}

}  // namespace plasmon
