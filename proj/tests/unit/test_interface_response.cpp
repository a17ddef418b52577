#include <doctest.h>

#include <cmath>

#include "plasmon/errors.hpp"
#include "plasmon/interface_response.hpp"

using namespace plasmon;

namespace {

cplx fresnel_p(cplx em, double ed, double w, double ks) {
    const double k0 = w / kHbarC;
    auto root = [](cplx z) {
        cplx s = std::sqrt(z);
        if (s.imag() < 0.0 || (s.imag() == 0.0 && s.real() < 0.0)) s = -s;
        return s;
    };
    const cplx kd = root(ed * k0 * k0 - ks * ks);
    const cplx km = root(em * k0 * k0 - ks * ks);
    return (em * kd - ed * km) / (em * kd + ed * km);
}

InterfaceModel surrogate_model() {
    InterfaceModel m;
    m.dsource = SurrogateDPerp{};
    return m;
}

}  // namespace

TEST_CASE("kz at normal incidence and on the evanescent branch") {
    const double w = 2.3, k0 = w / kHbarC;
    const cplx a = kz(w, 0.0, 1.0);
    CHECK(a.real() == doctest::Approx(k0).epsilon(1e-15));
    CHECK(a.imag() == 0.0);
    const cplx b = kz(w, 2.0 * k0, 1.0);
    CHECK(std::abs(b.real()) < 1e-18);
    CHECK(b.imag() == doctest::Approx(std::sqrt(3.0) * k0).epsilon(1e-14));
    const cplx c = kz(w, 0.0, drude_epsilon({}, w));
    CHECK(c.imag() > 0.0);
}

TEST_CASE("kz branch keeps Im >= 0 over a lattice") {
    const InterfaceModel m;
    for (int a = 0; a < 100; ++a) {
        const double w = 0.05 + 0.08 * a;
        const cplx em = m.eps_m(w);
        for (int b = 0; b < 100; ++b) {
            const double ks = 0.002 * b * b;
            CHECK(kz(w, ks, em).imag() >= 0.0);
            CHECK(kz(w, ks, 2.25).imag() >= 0.0);
        }
    }
}

TEST_CASE("local response reduces to Fresnel on a 100 x 100 lattice") {
    const InterfaceModel m;
    double worst = 0.0;
    for (int a = 0; a < 100; ++a) {
        const double w = 0.05 + 0.08 * a;
        for (int b = 0; b < 100; ++b) {
            const double ks = 0.002 * b * b;
            const cplx f = fresnel_p(m.eps_m(w), m.eps_d, w, ks);
            worst = std::max(worst, std::abs(reflection_p(m, w, ks) - f) / std::abs(f));
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("homogeneous medium has no interface") {
    // eps_m(2) = 1 - 1/4 without damping; choose eps_d equal to it.
    InterfaceModel m;
    m.drude = {1.0, 0.0};
    m.eps_d = 0.75;
    m.dsource = SurrogateDPerp{};
    for (double ks : {0.0, 0.005, 0.02, 1.0}) {
        CHECK(std::abs(reflection_p(m, 2.0, ks)) < 1e-15);
        m.dsource = LocalResponse{};
        CHECK(std::abs(transmission_p(m, 2.0, ks) - 1.0) < 1e-15);
        m.dsource = SurrogateDPerp{};
    }
}

TEST_CASE("quasistatic limit of r^p") {
    const InterfaceModel m;
    for (double w : {1.0, 3.0, 4.1, 5.0}) {
        const cplx em = m.eps_m(w);
        const cplx limit = (em - m.eps_d) / (em + m.eps_d);
        CHECK(std::abs(reflection_p(m, w, 1e4) - limit) < 1e-6 * std::abs(limit));
    }
}

TEST_CASE("local-response transmission is the classical Fresnel value") {
    const InterfaceModel m;
    for (double w : {0.7, 2.3, 4.5}) {
        for (double ks : {0.0, 0.01, 0.3}) {
            const cplx kd = kz(w, ks, m.eps_d), km = kz(w, ks, m.eps_m(w));
            const cplx expected = 2.0 * m.eps_d * km / (m.eps_m(w) * kd + m.eps_d * km);
            CHECK(std::abs(transmission_p(m, w, ks) - expected) < 1e-14 * std::abs(expected));
        }
    }
}

TEST_CASE("fixed-frequency evaluator agrees with reflection_p") {
    const auto m = surrogate_model();
    const ReflectionAtFrequency r(m, 3.7);
    for (double ks : {0.0, 0.01, 0.2, 3.0}) CHECK(r(ks) == reflection_p(m, 3.7, ks));
}

TEST_CASE("boundary conditions: exact for d = 0, tight for surrogate d") {
    const InterfaceModel lra;
    const auto qse = surrogate_model();
    double worst_lra = 0.0, worst_qse = 0.0;
    for (int a = 0; a < 30; ++a) {
        const double w = 0.2 + 0.25 * a;
        for (int b = 0; b < 30; ++b) {
            const double ks = 0.003 * b * b;
            worst_lra = std::max(worst_lra, check_boundary_conditions(lra, w, ks).max_relative());
            worst_qse = std::max(worst_qse, check_boundary_conditions(qse, w, ks).max_relative());
        }
    }
    CHECK(worst_lra < 1e-12);
    CHECK(worst_qse < 1e-10);
}

TEST_CASE("boundary residual at the surface-plasmon resonance") {
    const auto m = surrogate_model();
    // Near the resonance of r^p the quasistatic pole sits at ks ~ (eps_m + eps_d) / ((eps_m - eps_d) d_perp).
    const double w = 3.98;
    const cplx em = m.eps_m(w);
    const cplx d = eval_dperp(SurrogateDPerp{}, w);
    const double ks_pole = std::abs((em + m.eps_d) / ((em - m.eps_d) * d));
    for (double f : {0.5, 1.0, 2.0}) CHECK(check_boundary_conditions(m, w, f * ks_pole).max_relative() < 1e-10);
}

TEST_CASE("perturbed reflection breaks the boundary conditions") {
    const auto m = surrogate_model();
    const auto s = scattering_p(m, 3.0, 0.05);
    const auto res = boundary_residuals(m, 3.0, 0.05, s.reflection + 1e-3, s.transmission);
    CHECK(res.max_relative() > 1e-4);
}

TEST_CASE("r^p is linear in d at small d") {
    auto scaled = [](double s) {
        InterfaceModel m;
        SurrogateDPerp d{};
        d.d_inf *= s;
        d.amplitude *= s;
        m.dsource = d;
        return m;
    };
    const InterfaceModel lra;
    for (double w : {2.3, 3.9}) {
        for (double ks : {0.01, 0.3}) {
            const cplx r0 = reflection_p(lra, w, ks);
            const cplx s4 = (reflection_p(scaled(1e-4), w, ks) - r0) / 1e-4;
            const cplx s6 = (reflection_p(scaled(1e-6), w, ks) - r0) / 1e-6;
            CHECK(std::abs(s4 - s6) < 1e-4 * std::abs(s6));
        }
    }
}

TEST_CASE("passivity proxy for propagating waves") {
    const auto m = surrogate_model();
    const InterfaceModel lra;
    for (int a = 0; a < 100; ++a) {
        const double w = 0.05 + 0.08 * a;
        const double kd = std::sqrt(m.eps_d) * w / kHbarC;
        for (int b = 0; b < 100; ++b) {
            const double ks = kd * b / 100.0;
            CHECK(std::abs(reflection_p(m, w, ks)) <= 1.0);
            CHECK(std::abs(reflection_p(lra, w, ks)) <= 1.0);
        }
    }
}

TEST_CASE("d-parameter table range errors propagate") {
    InterfaceModel m;
    DParamTable t;
    t.omegas = {1.0, 2.0};
    t.d_perp = {{0.1, 0.0}, {0.1, 0.0}};
    t.d_par = {{0.0, 0.0}, {0.0, 0.0}};
    m.dsource = t;
    CHECK_NOTHROW(reflection_p(m, 1.5, 0.1));
    CHECK_THROWS_AS(reflection_p(m, 2.5, 0.1), OutOfRangeError);
}
