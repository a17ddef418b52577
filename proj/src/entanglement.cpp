#include "plasmon/entanglement.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <ostream>

#include "plasmon/errors.hpp"
#include "plasmon/format.hpp"

namespace plasmon {

namespace {

using Mat4 = Eigen::Matrix<cplx, 4, 4>;

Mat4 to_eigen(const TwoQubitState& s) {
    Mat4 m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = s(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    return m;
}

}  // namespace

void TwoQubitState::validate(double tol) const {
    const Mat4 m = to_eigen(*this);
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) throw DomainError("density matrix is not Hermitian");
    if (std::abs(m.trace() - cplx(1.0, 0.0)) > tol) throw DomainError("density matrix trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Mat4> es(m);
    if (es.eigenvalues().minCoeff() < -tol) throw DomainError("density matrix is not positive semidefinite");
}

TwoQubitState reduced_density(cplx a1, cplx a2) {
    const double p1 = std::norm(a1);
    const double p2 = std::norm(a2);
    if (p1 + p2 > 1.0 + 1e-9) throw DomainError("|a1|^2 + |a2|^2 exceeds 1");
    TwoQubitState s;
    s(1, 1) = p1;
    s(2, 2) = p2;
    s(1, 2) = a1 * std::conj(a2);
    s(2, 1) = std::conj(s(1, 2));
    s(3, 3) = std::max(0.0, 1.0 - p1 - p2);
    return s;
}

double concurrence(const TwoQubitState& state) {
    const Mat4 rho = to_eigen(state);
    // sy x sy in {ee, eg, ge, gg} is the anti-diagonal (-1, 1, 1, -1).
    Mat4 flip = Mat4::Zero();
    flip(0, 3) = -1.0;
    flip(1, 2) = 1.0;
    flip(2, 1) = 1.0;
    flip(3, 0) = -1.0;
    // With rho = W W^dagger, the square roots of the eigenvalues of
    // rho flip rho* flip are the singular values of W^T flip W. Taking them
    // directly avoids square roots of eigenvalues that sit at round-off level.
    Eigen::SelfAdjointEigenSolver<Mat4> es(rho);
    Mat4 w = es.eigenvectors();
    for (int c = 0; c < 4; ++c) w.col(c) *= std::sqrt(std::max(es.eigenvalues()(c), 0.0));
    const Mat4 tau = w.transpose() * flip * w;
    Eigen::JacobiSVD<Mat4> svd(tau);
    const auto s = svd.singularValues();  // descending
    return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

double steady_concurrence(const std::vector<BoundState>& states, std::size_t n_emitters, double t) {
    if (n_emitters != 2) throw UnsupportedError("steady concurrence is defined for two emitters");
    if (states.empty()) return 0.0;
    if (states.size() == 1) {
        const double l = residue_amplitude(states[0], 2);
        return 2.0 * l * l;
    }
    const double l1 = residue_amplitude(states[0], 2);
    const double l2 = residue_amplitude(states[1], 2);
    const double s = std::sin((states[0].varpi_b - states[1].varpi_b) * t);
    return 2.0 * std::abs(cplx(l1 * l1 - l2 * l2, 2.0 * l1 * l2 * s));
}

void write_concurrence_csv(std::ostream& out, const AmplitudeTrajectory& traj,
                           const std::vector<BoundState>& states, std::size_t stride) {
    if (traj.n_emitters() != 2) throw UnsupportedError("concurrence CSV needs two emitters");
    stride = std::max<std::size_t>(1, stride);
    out << "t_hbar_per_ev,concurrence,steady_prediction\n";
    for (std::size_t s = 0; s < traj.size(); s += stride) {
        const double t = traj.time(s);
        out << format_double(t) << ',' << format_double(concurrence(reduced_density(traj.a(s, 0), traj.a(s, 1))))
            << ',' << format_double(steady_concurrence(states, 2, t)) << '\n';
    }
}

}  // namespace plasmon
