#include <doctest.h>

#include <cmath>
#include <sstream>

#include "plasmon/errors.hpp"
#include "plasmon/materials.hpp"

using namespace plasmon;

TEST_CASE("lossless Drude vanishes at the plasma frequency") {
    const cplx e = drude_epsilon({5.9, 0.0}, 5.9);
    CHECK(std::abs(e) < 1e-15);
}

TEST_CASE("Drude tends to one at high frequency") {
    const DrudeParams p{};
    CHECK(std::abs(drude_epsilon(p, 1e4) - 1.0) < 1e-6);
    CHECK(std::abs(drude_epsilon(p, 1e6) - 1.0) < 1e-10);
}

TEST_CASE("Drude at the emitter frequency") {
    const double w = 2.3, wp = 5.9, g = 0.1;
    const cplx expected = 1.0 - wp * wp / (w * cplx(w, g));
    const cplx e = drude_epsilon({wp, g}, w);
    CHECK(std::abs(e - expected) < 1e-14);
    CHECK(e.real() == doctest::Approx(-5.5679).epsilon(1e-4));
    CHECK(e.imag() == doctest::Approx(0.2856).epsilon(1e-3));
}

TEST_CASE("Drude rejects non-positive frequency and invalid parameters") {
    CHECK_THROWS_AS(drude_epsilon({}, 0.0), DomainError);
    CHECK_THROWS_AS(drude_epsilon({}, -1.0), DomainError);
    CHECK_THROWS_AS((DrudeParams{-1.0, 0.1}.validate()), DomainError);
    CHECK_THROWS_AS((DrudeParams{5.9, -0.1}.validate()), DomainError);
}

TEST_CASE("Drude absorption is non-negative, zero only without damping") {
    for (int k = 1; k <= 400; ++k) {
        const double w = 59.0 * k / 400.0;
        CHECK(drude_epsilon({5.9, 0.1}, w).imag() > 0.0);
        CHECK(drude_epsilon({5.9, 0.0}, w).imag() == 0.0);
    }
}

namespace {

const char* kHeader = "omega_ev,re_dperp_nm,im_dperp_nm,re_dpar_nm,im_dpar_nm\n";

DParamTable sample_table() {
    std::istringstream in(std::string(kHeader) +
                          "1.0,0.1,0.01,0,0\n"
                          "2.0,0.3,0.05,0,0\n"
                          "3.5,-0.2,0.2,0,0\n");
    return load_dparam_table(in);
}

}  // namespace

TEST_CASE("all-zero table evaluates to zero") {
    std::istringstream in(std::string(kHeader) + "1,0,0,0,0\n4,0,0,0,0\n");
    const auto t = load_dparam_table(in);
    for (double w : {1.0, 1.7, 3.2, 4.0}) {
        const auto d = eval_dparams(t, w);
        CHECK(d.perp == cplx(0.0, 0.0));
        CHECK(d.par == cplx(0.0, 0.0));
    }
    CHECK(t.charge_neutral);
}

TEST_CASE("descending frequency pair is rejected with its row") {
    std::istringstream in(std::string(kHeader) + "1,0,0,0,0\n3,0,0,0,0\n2,0,0,0,0\n");
    try {
        load_dparam_table(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.row() == 3);
    }
}

TEST_CASE("malformed rows and negative Im d_perp are rejected") {
    std::istringstream bad_number(std::string(kHeader) + "1,0,0,0,0\n2,abc,0,0,0\n");
    CHECK_THROWS_AS(load_dparam_table(bad_number), ParseError);
    std::istringstream short_row(std::string(kHeader) + "1,0,0,0\n2,0,0,0,0\n");
    CHECK_THROWS_AS(load_dparam_table(short_row), ParseError);
    std::istringstream lossy(std::string(kHeader) + "1,0,0,0,0\n2,0,-0.1,0,0\n");
    try {
        load_dparam_table(lossy);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.row() == 2);
    }
    std::istringstream header("omega,re,im\n1,0,0\n");
    CHECK_THROWS_AS(load_dparam_table(header), ParseError);
}

TEST_CASE("write then load reproduces nodes bit-exactly") {
    DParamTable t;
    t.omegas = {0.1, 0.7000000000000001, 1.0 / 3.0, 2.5};
    t.omegas[2] = 1.3 + 1e-15;
    t.d_perp = {{0.1, 1e-3}, {-0.123456789012345, 0.2}, {1.0 / 7.0, 0.0}, {3e-12, 5.5}};
    t.d_par = {{0.0, 0.0}, {1e-300, -2.0}, {0.5, 0.25}, {0.0, 1.0}};
    std::stringstream buf;
    write_dparam_table(buf, t);
    const auto back = load_dparam_table(buf);
    REQUIRE(back.omegas.size() == t.omegas.size());
    for (std::size_t k = 0; k < t.omegas.size(); ++k) {
        CHECK(back.omegas[k] == t.omegas[k]);
        CHECK(back.d_perp[k] == t.d_perp[k]);
        CHECK(back.d_par[k] == t.d_par[k]);
    }
}

TEST_CASE("table interpolation: nodes, midpoints, range") {
    const auto t = sample_table();
    CHECK(eval_dperp(t, 2.0) == cplx(0.3, 0.05));
    CHECK(eval_dperp(t, 1.0) == cplx(0.1, 0.01));
    CHECK(eval_dperp(t, 3.5) == cplx(-0.2, 0.2));
    const cplx mid = eval_dperp(t, 1.5);
    CHECK(mid.real() == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(mid.imag() == doctest::Approx(0.03).epsilon(1e-14));
    const cplx mid2 = eval_dperp(t, 2.75);
    CHECK(mid2.real() == doctest::Approx(0.05).epsilon(1e-14));
    CHECK_THROWS_AS(eval_dperp(t, 0.99), OutOfRangeError);
    CHECK_THROWS_AS(eval_dperp(t, 3.51), OutOfRangeError);
}

TEST_CASE("table interpolation is continuous") {
    const auto t = sample_table();
    double worst = 0.0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
        const double a = 1.0 + 2.5 * k / n, b = 1.0 + 2.5 * (k + 1) / n;
        worst = std::max(worst, std::abs(eval_dperp(t, a) - eval_dperp(t, b)));
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("surrogate single-pole form") {
    const SurrogateDPerp s{};
    for (double w : {0.5, 2.3, 4.0, 7.0}) {
        const cplx expected = s.d_inf + s.amplitude / (s.pole_omega * s.pole_omega - w * w - cplx(0.0, w * s.pole_width));
        CHECK(std::abs(eval_dperp(s, w) - expected) < 1e-15);
    }
    // At the pole the denominator is purely imaginary: d = d_inf + i A / (w g).
    const cplx at_pole = eval_dperp(s, s.pole_omega);
    const cplx expected = s.d_inf + cplx(0.0, 1.0) * s.amplitude / (s.pole_omega * s.pole_width);
    CHECK(std::abs(at_pole - expected) < 1e-14);
    // Im d is largest near the pole.
    double best_w = 0.0, best = -1.0;
    for (int k = 1; k < 2000; ++k) {
        const double w = 0.005 * k;
        if (eval_dperp(s, w).imag() > best) {
            best = eval_dperp(s, w).imag();
            best_w = w;
        }
    }
    CHECK(std::abs(best_w - s.pole_omega) < 0.3);
}

TEST_CASE("default surrogate is spill-out-like and dissipative") {
    const SurrogateDPerp s{};
    for (int k = 1; k <= 200; ++k) {
        const double w = 0.02 * k;
        if (w < s.pole_omega) CHECK(eval_dperp(s, w).real() > 0.0);
        CHECK(eval_dperp(s, w).imag() >= 0.0);
    }
    CHECK_THROWS_AS((SurrogateDPerp{{0.0, 0.0}, {1.0, 0.0}, 4.0, 0.0}.validate()), DomainError);
    CHECK_THROWS_AS((SurrogateDPerp{{0.0, -0.1}, {1.0, 0.0}, 4.0, 1.0}.validate()), DomainError);
}

TEST_CASE("d-parameter source dispatch") {
    const DParamSource lra = LocalResponse{};
    CHECK(eval_dparams(lra, 3.0).perp == cplx(0.0, 0.0));
    const DParamSource sur = SurrogateDPerp{};
    CHECK(eval_dparams(sur, 3.0).perp == eval_dperp(SurrogateDPerp{}, 3.0));
    CHECK(eval_dparams(sur, 3.0).par == cplx(0.0, 0.0));
    const DParamSource tab = sample_table();
    CHECK(dparam_domain(tab).first == 1.0);
    CHECK(dparam_domain(tab).second == 3.5);
}
