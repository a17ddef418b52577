#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "plasmon/errors.hpp"
#include "plasmon/spectral_density.hpp"

using namespace plasmon;

namespace {

InterfaceModel surrogate_model() {
    InterfaceModel m;
    m.dsource = SurrogateDPerp{};
    return m;
}

GridSpec small_grid() {
    GridSpec g;
    g.count = 600;
    g.refine_count = 200;
    return g;
}

}  // namespace

TEST_CASE("free-space spectral density and rate sum rule") {
    for (double eps : {1.0, 2.25, 4.0}) {
        InterfaceModel m;
        m.eps_d = eps;
        m.reflection_enabled = false;
        const EmitterParams e{};
        const double k0 = e.omega_0 / kHbarC;
        const double j = spectral_element(m, Geometry::line(2.9, 1, 0.0), QuadratureSpec{}, e, e.omega_0, 0, 0);
        CHECK(j == doctest::Approx(std::sqrt(eps) * e.coupling_alpha * k0 * k0 * k0 / (6.0 * kPi)).epsilon(1e-12));
        CHECK(std::abs(2.0 * kPi * j / gamma0_free(e) - std::sqrt(eps)) < 1e-6 * std::sqrt(eps));
    }
}

TEST_CASE("free rate scaling") {
    EmitterParams e{};
    const double g = gamma0_free(e);
    EmitterParams e2 = e;
    e2.coupling_alpha *= 2.0;
    CHECK(gamma0_free(e2) == doctest::Approx(2.0 * g).epsilon(1e-15));
    EmitterParams e3 = e;
    e3.omega_0 *= 2.0;
    CHECK(gamma0_free(e3) == doctest::Approx(8.0 * g).epsilon(1e-15));
}

TEST_CASE("J is linear in the coupling scale") {
    const auto m = surrogate_model();
    const Geometry g = Geometry::line(2.9, 2, 5.0);
    EmitterParams e{};
    EmitterParams e2 = e;
    e2.coupling_alpha *= 2.0;
    for (double w : {1.0, 3.9, 6.0})
        for (std::size_t j : {0u, 1u})
            CHECK(spectral_element(m, g, QuadratureSpec{}, e2, w, 0, j) ==
                  doctest::Approx(2.0 * spectral_element(m, g, QuadratureSpec{}, e, w, 0, j)).epsilon(1e-15));
}

TEST_CASE("plasmon enhancement at 2.9 nm reaches 1e4 or more") {
    const EmitterParams e{};
    for (const auto& m : {InterfaceModel{}, surrogate_model()}) {
        const auto t = build_spectral_table(m, Geometry::line(2.9, 1, 0.0), QuadratureSpec{}, e, GridSpec{});
        const auto p = find_peak(t, gamma0_free(e));
        CHECK(p.ratio_to_gamma0 >= 1e4);
        CHECK(p.ratio_to_gamma0 < 1e6);
        CHECK(p.peak_count == 1);
    }
}

TEST_CASE("surface response red-shifts and broadens the plasmon peak") {
    const EmitterParams e{};
    const auto lra = build_spectral_table(InterfaceModel{}, Geometry::line(2.9, 1, 0.0), QuadratureSpec{}, e, GridSpec{});
    const auto qse = build_spectral_table(surrogate_model(), Geometry::line(2.9, 1, 0.0), QuadratureSpec{}, e, GridSpec{});
    const auto pl = find_peak(lra, gamma0_free(e));
    const auto pq = find_peak(qse, gamma0_free(e));
    CHECK(pq.omega_peak < pl.omega_peak);
    CHECK(pq.fwhm > pl.fwhm);
    CHECK(pl.fwhm > 0.0);
}

TEST_CASE("ratio to the free rate does not depend on the coupling scale") {
    EmitterParams e{};
    EmitterParams e10 = e;
    e10.coupling_alpha *= 10.0;
    const auto m = surrogate_model();
    const auto g = Geometry::line(2.9, 1, 0.0);
    for (double w : {0.5, 2.3, 4.0}) {
        const double a = spectral_element(m, g, QuadratureSpec{}, e, w, 0, 0) / gamma0_free(e);
        const double b = spectral_element(m, g, QuadratureSpec{}, e10, w, 0, 0) / gamma0_free(e10);
        CHECK(std::abs(a - b) <= 4e-16 * std::abs(a));
    }
}

TEST_CASE("grid construction") {
    const GridSpec spec{};
    const InterfaceModel m;
    const auto g = make_grid(spec, m);
    REQUIRE(g.size() >= spec.count);
    CHECK(g.front() == spec.omega_min);
    CHECK(g.back() == spec.omega_max);
    for (std::size_t k = 1; k < g.size(); ++k) CHECK(g[k] > g[k - 1]);
    // Refinement window around omega_p / sqrt(2) holds the extra nodes.
    const double c = 5.9 / std::sqrt(2.0), h = 0.5;
    std::size_t inside = 0;
    for (double w : g) inside += (w >= c - h && w <= c + h);
    CHECK(inside >= spec.refine_count);

    const auto clipped = make_grid(spec, 1.0, 3.0);
    CHECK(clipped.front() == 1.0);
    CHECK(clipped.back() == 3.0);

    GridSpec bad = spec;
    bad.omega_min = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = spec;
    bad.count = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(make_grid(spec, 9.0, 10.0), ConfigError);
}

TEST_CASE("grid clips to the d-parameter table domain") {
    InterfaceModel m;
    DParamTable t;
    t.omegas = {0.5, 6.0};
    t.d_perp = {{0.1, 0.01}, {0.1, 0.01}};
    t.d_par = {{0.0, 0.0}, {0.0, 0.0}};
    m.dsource = t;
    const auto g = make_grid(GridSpec{}, m);
    CHECK(g.front() == 0.5);
    CHECK(g.back() == 6.0);
}

TEST_CASE("trapezoid weights") {
    const std::vector<double> g{0.1, 0.4, 0.5, 1.5};
    const auto w = trapezoid_weights(g);
    double sum = 0.0, lin = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        sum += w[k];
        lin += w[k] * (2.0 * g[k] + 1.0);
    }
    CHECK(sum == doctest::Approx(1.4).epsilon(1e-15));
    CHECK(lin == doctest::Approx(1.5 * 1.5 - 0.1 * 0.1 + 1.4).epsilon(1e-14));
}

TEST_CASE("one emitter: the channel is the diagonal") {
    const auto t = build_spectral_table(surrogate_model(), Geometry::line(2.9, 1, 0.0), QuadratureSpec{}, EmitterParams{},
                                        small_grid());
    REQUIRE(t.channel_count() == 1);
    CHECK(t.channel(0) == t.element(0, 0));
    CHECK(t.similarity() == std::vector<double>{1.0});
}

TEST_CASE("cross density fades with separation") {
    auto ratio = [](double r) {
        const auto t = build_spectral_table(surrogate_model(), Geometry::line(2.9, 2, r), QuadratureSpec{},
                                            EmitterParams{}, small_grid());
        REQUIRE(t.channel_count() == 2);
        double jmax = 0.0, cross = 0.0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            jmax = std::max(jmax, t.J(k, 0, 0));
            cross = std::max(cross, std::abs(t.J(k, 0, 1)));
            CHECK(t.channel(0)[k] == doctest::Approx(t.J(k, 0, 0) + t.J(k, 0, 1)));
            CHECK(t.channel(1)[k] == doctest::Approx(t.J(k, 0, 0) - t.J(k, 0, 1)));
        }
        const double s = 1.0 / std::sqrt(2.0);
        const auto& c = t.similarity();
        CHECK(c[0] == doctest::Approx(s));
        CHECK(c[3] == doctest::Approx(-s));
        return cross / jmax;
    };
    const double near = ratio(40.0);
    const double far = ratio(80.0);
    CHECK(far < 0.5 * near);
    CHECK(far < 5e-3);
}

TEST_CASE("equally spaced emitters share J_|i-j|, channels stay non-negative") {
    const EmitterParams e{};
    const QuadratureSpec q{};
    const auto t = build_spectral_table(surrogate_model(), Geometry::line(2.9, 3, 4.0), q, e, small_grid());
    CHECK(t.channel_count() == 0);
    for (std::size_t k = 0; k < t.size(); ++k) {
        CHECK(t.J(k, 0, 1) == t.J(k, 1, 2));
        CHECK(t.J(k, 0, 1) == t.J(k, 1, 0));
        CHECK(t.J(k, 0, 0) == t.J(k, 2, 2));
    }
    for (double r : {2.0, 6.0, 30.0}) {
        const auto t2 = build_spectral_table(surrogate_model(), Geometry::line(2.9, 2, r), q, e, small_grid());
        for (std::size_t k = 0; k < t2.size(); ++k) {
            const double w = t2.grid()[k];
            const double floor = -e.coupling_alpha * (w / kHbarC) * (w / kHbarC) * q.abs_tol;
            CHECK(t2.channel(0)[k] >= floor);
            CHECK(t2.channel(1)[k] >= floor);
            CHECK(t2.J(k, 0, 0) >= floor);
        }
    }
}

TEST_CASE("doubling grid density barely moves the integrated density") {
    const EmitterParams e{};
    GridSpec g{};
    const auto a = build_spectral_table(surrogate_model(), Geometry::line(2.9, 1, 0.0), QuadratureSpec{}, e, g);
    g.count *= 2;
    g.refine_count *= 2;
    const auto b = build_spectral_table(surrogate_model(), Geometry::line(2.9, 1, 0.0), QuadratureSpec{}, e, g);
    const double ia = integrate_element(a, 0, 0), ib = integrate_element(b, 0, 0);
    CHECK(std::abs(ia - ib) < 5e-3 * ib);
}

TEST_CASE("table build is independent of the thread count") {
    const auto a = build_spectral_table(surrogate_model(), Geometry::line(2.9, 2, 4.0), QuadratureSpec{},
                                        EmitterParams{}, small_grid(), 1);
    const auto b = build_spectral_table(surrogate_model(), Geometry::line(2.9, 2, 4.0), QuadratureSpec{},
                                        EmitterParams{}, small_grid(), 3);
    CHECK(a.element(0, 0) == b.element(0, 0));
    CHECK(a.element(0, 1) == b.element(0, 1));
}

TEST_CASE("a failing node reports its frequency") {
    QuadratureSpec q{};
    q.max_panels = 1;
    q.rel_tol = 1e-14;
    try {
        build_spectral_table(surrogate_model(), Geometry::line(2.9, 1, 0.0), q, EmitterParams{}, small_grid());
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& err) {
        CHECK(std::string(err.what()).find("spectral node at ") != std::string::npos);
        CHECK(std::string(err.what()).find(" eV") != std::string::npos);
    }
}

TEST_CASE("table construction rejects malformed input") {
    CHECK_THROWS_AS(SpectralTable({1.0, 0.5}, 1, {{0.0, 0.0}}), DomainError);
    CHECK_THROWS_AS(SpectralTable({0.0, 0.5}, 1, {{0.0, 0.0}}), DomainError);
    CHECK_THROWS_AS(SpectralTable({0.1, 0.5}, 2, {{0.0, 0.0}}), DomainError);
    CHECK_THROWS_AS(EmitterParams({-1.0, 1.0}).validate(), DomainError);
}

TEST_CASE("interpolation and peak report on an analytic table") {
    std::vector<double> g, j;
    for (int k = 0; k <= 4000; ++k) {
        const double w = 0.01 + 0.002 * k;
        g.push_back(w);
        j.push_back(0.05 * 0.05 / ((w - 4.0) * (w - 4.0) + 0.05 * 0.05));
    }
    const auto t = SpectralTable::single(g, j);
    CHECK(t.interpolate(0, 0, 4.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(t.interpolate(0, 0, 9.0), OutOfRangeError);
    const auto p = find_peak(t, 0.01);
    CHECK(p.omega_peak == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(p.fwhm == doctest::Approx(0.1).epsilon(1e-3));
    CHECK(p.ratio_to_gamma0 == doctest::Approx(100.0).epsilon(1e-6));
    CHECK(p.peak_count == 1);
}

TEST_CASE("spectral CSV schema") {
    const auto one = SpectralTable::single({0.5, 1.0}, {0.1, 0.2});
    std::ostringstream a;
    write_spectral_csv(a, one);
    CHECK(a.str().rfind("omega_ev,J00_ev\n", 0) == 0);
    const SpectralTable two({0.5, 1.0}, 2, {{0.3, 0.4}, {0.1, 0.2}, {0.1, 0.2}, {0.3, 0.4}});
    std::ostringstream b;
    write_spectral_csv(b, two);
    CHECK(b.str() == "omega_ev,J00_ev,J01_ev,Aplus_ev,Aminus_ev\n0.5,0.3,0.1,0.4,0.19999999999999998\n"
                     "1,0.4,0.2,0.6000000000000001,0.2\n");
}
