#ifndef LINESPEC_BOUNDS_HPP
#define LINESPEC_BOUNDS_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "linespec/projections.hpp"
#include "linespec/signal_model.hpp"

namespace linespec {

/// d a(omega)/d omega: entry t = j t e^{j omega t}.
inline Eigen::VectorXcd steering_derivative(double omega, Eigen::Index m) {
    if (m < 1)
        throw std::domain_error("steering_derivative: m must be >= 1");
    Eigen::VectorXcd d(m);
    for (Eigen::Index t = 0; t < m; ++t)
        d(t) = std::complex<double>(0.0, static_cast<double>(t)) *
               std::polar(1.0, omega * static_cast<double>(t));
    return d;
}

namespace detail {

inline Eigen::MatrixXd fisher_matrix(const Eigen::VectorXd& omegas,
                                     const Eigen::VectorXcd& s, double sigma2,
                                     Eigen::Index m) {
    const Eigen::Index d = omegas.size();
    if (s.size() != d)
        throw std::domain_error("fisher_matrix: omegas/s length mismatch");
    if (!(sigma2 > 0.0))
        throw std::domain_error("fisher_matrix: sigma2 must be > 0");
    const Eigen::MatrixXcd A = vandermonde(omegas, m);
    const Eigen::MatrixXcd Q = orthonormal_basis(A);
    Eigen::MatrixXcd D(m, d);
    for (Eigen::Index i = 0; i < d; ++i)
        D.col(i) = steering_derivative(omegas(i), m);
    const Eigen::MatrixXcd DS = D * s.asDiagonal();
    const Eigen::MatrixXcd P_DS = DS - Q * (Q.adjoint() * DS);
    return (2.0 / sigma2) * (DS.adjoint() * P_DS).real();
}

inline Eigen::MatrixXd invert_fisher(const Eigen::MatrixXd& F,
                                     const char* who) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(F);
    if (!lu.isInvertible())
        throw std::runtime_error(
            std::string(who) +
            ": singular Fisher matrix (near-collinear frequencies or zero "
            "amplitudes)");
    Eigen::MatrixXd C = lu.inverse();
    return 0.5 * (C + C.transpose().eval());
}

} // namespace detail

/// Deterministic CRB: C = ((2/sigma2) Re{S* D* Pi_A^perp D S})^{-1}.
/// Diagonal c_ii lower-bounds the variance of conditionally unbiased
/// frequency estimators.
inline Eigen::MatrixXd crb(const Eigen::VectorXd& omegas,
                           const Eigen::VectorXcd& s, double sigma2,
                           Eigen::Index m) {
    return detail::invert_fisher(
        detail::fisher_matrix(omegas, s, sigma2, m), "crb");
}

/// Approximate hybrid CRB: Fisher term evaluated at the mean frequencies,
/// plus diag(lambda) with lambda_i = kappa_i (stochastic) or 0
/// (deterministic). Valid approximation for large kappa.
inline Eigen::MatrixXd acrb(const Eigen::VectorXd& mean_omegas,
                            const Eigen::VectorXcd& s, double sigma2,
                            Eigen::Index m, const Eigen::VectorXd& lambda) {
    if (lambda.size() != mean_omegas.size())
        throw std::domain_error("acrb: lambda length mismatch");
    if ((lambda.array() < 0.0).any())
        throw std::domain_error("acrb: lambda must be >= 0 elementwise");
    Eigen::MatrixXd F = detail::fisher_matrix(mean_omegas, s, sigma2, m);
    F += Eigen::MatrixXd(lambda.asDiagonal());
    return detail::invert_fisher(F, "acrb");
}

} // namespace linespec

#endif
