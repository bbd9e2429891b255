#ifndef LINESPEC_ESPRIT_HPP
#define LINESPEC_ESPRIT_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "linespec/von_mises.hpp"

namespace linespec {

struct CovarianceEstimate {
    Eigen::MatrixXcd R;        // p x p Hermitian
    Eigen::Index p = 0;        // window length
    Eigen::Index snapshots = 0;
};

/// Forward sample covariance over sliding length-p windows of y, averaged
/// with its reversed-conjugate counterpart J R* J (forward-backward).
inline CovarianceEstimate forward_backward_covariance(
    const Eigen::VectorXcd& y, Eigen::Index p) {
    const Eigen::Index m = y.size();
    if (p < 1 || p > m)
        throw std::domain_error("forward_backward_covariance: require 1 <= p <= m");
    const Eigen::Index n = m - p + 1;
    Eigen::MatrixXcd Rf = Eigen::MatrixXcd::Zero(p, p);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto x = y.segment(k, p);
        Rf.noalias() += x * x.adjoint();
    }
    Rf /= static_cast<double>(n);
    // J M* J reverses both index directions.
    const Eigen::MatrixXcd Rb = Rf.conjugate().reverse();
    Eigen::MatrixXcd R = 0.5 * (Rf + Rb);
    R = 0.5 * (R + R.adjoint().eval()); // enforce exact Hermitian symmetry
    return CovarianceEstimate{std::move(R), p, n};
}

struct EspritResult {
    Eigen::VectorXd omegas;  // unordered, wrapped to [-pi, pi)
    bool low_rank = false;   // fewer than d significant eigenvalues
};

/// LS-ESPRIT on the forward-backward covariance: signal subspace from the d
/// principal eigenvectors, rotation Psi from the shift-invariance equations,
/// frequencies from the eigenvalue angles.
inline EspritResult esprit(const Eigen::VectorXcd& y, Eigen::Index d,
                           Eigen::Index p) {
    const Eigen::Index m = y.size();
    if (d < 1 || p < d + 1 || m - p + 1 < d)
        throw std::domain_error(
            "esprit: require d >= 1, p >= d+1 and m - p + 1 >= d");
    const CovarianceEstimate cov = forward_backward_covariance(y, p);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(cov.R);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("esprit: eigendecomposition failed");

    // Eigenvalues ascending; principal subspace is the trailing d columns.
    Eigen::MatrixXcd Es(p, d);
    for (Eigen::Index i = 0; i < d; ++i)
        Es.col(i) = eig.eigenvectors().col(p - 1 - i);

    const double lambda_max = std::abs(eig.eigenvalues()(p - 1));
    bool low_rank = false;
    for (Eigen::Index i = 0; i < d; ++i)
        if (std::abs(eig.eigenvalues()(p - 1 - i)) <=
            1e-12 * std::max(lambda_max, 1e-300))
            low_rank = true;

    const Eigen::MatrixXcd E1 = Es.topRows(p - 1);
    const Eigen::MatrixXcd E2 = Es.bottomRows(p - 1);
    const Eigen::MatrixXcd Psi = E1.colPivHouseholderQr().solve(E2);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> rot(Psi, false);
    if (rot.info() != Eigen::Success)
        throw std::runtime_error("esprit: rotation eigenvalues failed");

    Eigen::VectorXd omegas(d);
    for (Eigen::Index i = 0; i < d; ++i)
        omegas(i) = wrap_to_pi(std::arg(rot.eigenvalues()(i)));
    return EspritResult{std::move(omegas), low_rank};
}

} // namespace linespec

#endif
