#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "plasmon/entanglement.hpp"
#include "plasmon/errors.hpp"

using namespace plasmon;

namespace {

TwoQubitState from_matrix(const Eigen::Matrix4cd& m) {
    TwoQubitState s;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) s(r, c) = m(static_cast<int>(r), static_cast<int>(c));
    return s;
}

// Literal Wootters recipe: square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
double wootters_eigen(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix4cd f = Eigen::Matrix4cd::Zero();
    f(0, 3) = -1.0;
    f(1, 2) = 1.0;
    f(2, 1) = 1.0;
    f(3, 0) = -1.0;
    const Eigen::Matrix4cd r = rho * f * rho.conjugate() * f;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r);
    std::array<double, 4> l{};
    for (int k = 0; k < 4; ++k) l[static_cast<std::size_t>(k)] = std::sqrt(std::max(es.eigenvalues()(k).real(), 0.0));
    std::sort(l.begin(), l.end(), std::greater<>());
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

Eigen::Matrix4cd projector(const Eigen::Vector4cd& v) { return v * v.adjoint() / v.squaredNorm(); }

}  // namespace

TEST_CASE("reduced density of basic amplitude pairs") {
    const auto eg = reduced_density(1.0, 0.0);
    CHECK(eg(1, 1) == cplx(1.0));
    for (std::size_t k = 0; k < 16; ++k)
        if (k != 5) CHECK(eg.rho[k] == cplx(0.0));
    CHECK(concurrence(eg) == doctest::Approx(0.0).epsilon(1e-15));

    const auto gg = reduced_density(0.0, 0.0);
    CHECK(gg(3, 3) == cplx(1.0));
    CHECK(concurrence(gg) == 0.0);

    const double s = 1.0 / std::sqrt(2.0);
    const auto bell = reduced_density(s, s);
    CHECK(bell(1, 2).real() == doctest::Approx(0.5));
    CHECK(std::abs(bell(3, 3)) < 1e-15);
    CHECK(concurrence(bell) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_NOTHROW(bell.validate());

    const auto mixed = reduced_density(cplx(0.3, 0.4), cplx(0.0, -0.2));
    CHECK(mixed(0, 0) == cplx(0.0));
    CHECK(mixed(1, 2) == cplx(0.3, 0.4) * std::conj(cplx(0.0, -0.2)));
    CHECK(mixed(2, 1) == std::conj(mixed(1, 2)));
    CHECK(mixed(3, 3).real() == doctest::Approx(1.0 - 0.25 - 0.04));
    CHECK_NOTHROW(mixed.validate());

    CHECK_THROWS_AS(reduced_density(0.9, 0.5), DomainError);
}

TEST_CASE("concurrence matches 2|a1 a2*| for random single-excitation pairs") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        cplx a1(u(rng), u(rng)), a2(u(rng), u(rng));
        const double n = std::sqrt(std::norm(a1) + std::norm(a2));
        if (n > 1.0) {
            a1 /= n;
            a2 /= n;
        }
        const double c = concurrence(reduced_density(a1, a2));
        worst = std::max(worst, std::abs(c - 2.0 * std::abs(a1 * std::conj(a2))));
        CHECK(c <= 2.0 * std::sqrt(std::norm(a1) * std::norm(a2)) + 1e-12);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0 + 1e-12);
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("concurrence of general states against the literal eigenvalue recipe") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
        Eigen::Matrix4cd w;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) w(r, c) = cplx(nd(rng), nd(rng));
        // Rank 1 to 4 states.
        const int rank = 1 + k % 4;
        w.rightCols(4 - rank).setZero();
        Eigen::Matrix4cd rho = w * w.adjoint();
        rho /= rho.trace();
        worst = std::max(worst, std::abs(concurrence(from_matrix(rho)) - wootters_eigen(rho)));
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("Bell, product and Werner states") {
    const double s = 1.0 / std::sqrt(2.0);
    // Basis order {ee, eg, ge, gg}.
    const Eigen::Vector4cd phi(s, 0, 0, s), psi(0, s, -s, 0), prod(0.6, 0.8, 0, 0);
    CHECK(concurrence(from_matrix(projector(phi))) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(concurrence(from_matrix(projector(psi))) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(concurrence(from_matrix(projector(prod))) < 1e-12);
    // Werner: p |phi><phi| + (1 - p) I/4 has C = max(0, (3p - 1)/2).
    for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0}) {
        const Eigen::Matrix4cd rho = p * projector(phi) + (1.0 - p) * Eigen::Matrix4cd::Identity() / 4.0;
        CHECK(concurrence(from_matrix(rho)) == doctest::Approx(std::max(0.0, 1.5 * p - 0.5)).epsilon(1e-10));
    }
}

TEST_CASE("state validation") {
    TwoQubitState s = reduced_density(0.5, 0.5);
    CHECK_NOTHROW(s.validate());
    TwoQubitState bad = s;
    bad(1, 2) += cplx(0.0, 0.1);
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = s;
    bad(3, 3) += 0.1;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    // Coherence larger than the populations allow.
    bad = s;
    bad(1, 2) = bad(2, 1) = 0.4;
    bad(1, 1) = bad(2, 2) = 0.1;
    bad(3, 3) = 0.8;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("steady concurrence branches") {
    const BoundState b1{-0.13, 0.7, 0};
    const BoundState b2{-0.09, 0.5, 1};
    const double l1 = residue_amplitude(b1, 2), l2 = residue_amplitude(b2, 2);

    for (double t : {0.0, 10.0, 500.0}) CHECK(steady_concurrence({}, 2, t) == 0.0);

    for (double t : {0.0, 3.0, 900.0}) {
        CHECK(steady_concurrence({b1}, 2, t) == doctest::Approx(2.0 * l1 * l1).epsilon(1e-14));
        const auto z = asymptotic_Z({b1}, 2, t);
        CHECK(std::abs(concurrence(reduced_density(z[0], z[1])) - steady_concurrence({b1}, 2, t)) < 1e-10);
    }

    const double dw = b1.varpi_b - b2.varpi_b;
    const double t_zero = kPi / std::abs(dw);
    const double t_peak = 0.5 * kPi / std::abs(dw);
    CHECK(steady_concurrence({b1, b2}, 2, t_zero) == doctest::Approx(2.0 * std::abs(l1 * l1 - l2 * l2)).epsilon(1e-10));
    CHECK(steady_concurrence({b1, b2}, 2, t_peak) == doctest::Approx(2.0 * (l1 * l1 + l2 * l2)).epsilon(1e-10));
    // With both channels bound the prediction equals the concurrence of the asymptotic amplitudes.
    for (double t : {1.0, 37.0, 412.5}) {
        const auto z = asymptotic_Z({b1, b2}, 2, t);
        CHECK(std::abs(concurrence(reduced_density(z[0], z[1])) - steady_concurrence({b1, b2}, 2, t)) < 1e-10);
    }

    CHECK_THROWS_AS(steady_concurrence({b1}, 1, 0.0), UnsupportedError);
    CHECK_THROWS_AS(steady_concurrence({b1}, 3, 0.0), UnsupportedError);
}

TEST_CASE("concurrence CSV") {
    AmplitudeTrajectory traj(0.5, 2, 3);
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t k = 0; k < 3; ++k) {
        traj.a(k, 0) = s;
        traj.a(k, 1) = s;
    }
    std::ostringstream os;
    write_concurrence_csv(os, traj, {}, 2);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t_hbar_per_ev,concurrence,steady_prediction");
    std::getline(in, line);
    CHECK(line.rfind("0,", 0) == 0);
    CHECK(line.substr(line.size() - 2) == ",0");
    std::getline(in, line);
    CHECK(line.rfind("1,", 0) == 0);
    CHECK_FALSE(std::getline(in, line));

    AmplitudeTrajectory one(0.5, 1, 2);
    std::ostringstream bad;
    CHECK_THROWS_AS(write_concurrence_csv(bad, one, {}), UnsupportedError);
}
