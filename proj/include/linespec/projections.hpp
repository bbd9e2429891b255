#ifndef LINESPEC_PROJECTIONS_HPP
#define LINESPEC_PROJECTIONS_HPP

#include <algorithm>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace linespec {

inline void require_finite(const Eigen::MatrixXcd& A, const char* who) {
    if (!A.allFinite())
        throw std::domain_error(std::string(who) + ": non-finite entries");
}

/// Rank-revealing orthonormal basis of the column space of A.
/// Columns of the result are orthonormal and span range(A).
inline Eigen::MatrixXcd orthonormal_basis(const Eigen::MatrixXcd& A) {
    require_finite(A, "orthonormal_basis");
    if (A.cols() == 0) return Eigen::MatrixXcd(A.rows(), 0);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
    const Eigen::Index r = qr.rank();
    Eigen::MatrixXcd Q = qr.householderQ() *
                         Eigen::MatrixXcd::Identity(A.rows(), r);
    return Q;
}

/// Moore-Penrose pseudo-inverse via SVD with threshold
/// tau = max(m,d) * eps * sigma_max.
inline Eigen::MatrixXcd pseudo_inverse(const Eigen::MatrixXcd& A) {
    require_finite(A, "pseudo_inverse");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
        A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double tau = static_cast<double>(std::max(A.rows(), A.cols())) *
                       std::numeric_limits<double>::epsilon() *
                       (sv.size() > 0 ? sv(0) : 0.0);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tau) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

struct Projector {
    Eigen::MatrixXcd matrix;
    Eigen::Index source_rank = 0;
};

/// Pi_A = Q Q^* onto range(A).
inline Projector range_projector(const Eigen::MatrixXcd& A) {
    const Eigen::MatrixXcd Q = orthonormal_basis(A);
    return Projector{Q * Q.adjoint(), Q.cols()};
}

/// Pi_A^perp = I - Q Q^*; Pi^perp A = 0 to working precision.
inline Projector complement_projector(const Eigen::MatrixXcd& A) {
    if (A.rows() <= A.cols())
        throw std::domain_error("complement_projector: require m > d");
    const Eigen::MatrixXcd Q = orthonormal_basis(A);
    Eigen::MatrixXcd P =
        Eigen::MatrixXcd::Identity(A.rows(), A.rows()) - Q * Q.adjoint();
    return Projector{std::move(P), Q.cols()};
}

struct ResidualComponents {
    double r0 = 0.0;            // y* Pi^perp_{A_i} y
    std::complex<double> num;   // y* Pi^perp_{A_i} a
    double den = 0.0;           // || Pi^perp_{A_i} a ||^2
    bool degenerate = false;    // a nearly collinear with range(A_i)
};

/// Terms of the per-frequency cost bracket r0 - |num|^2/den, computed from a
/// precomputed orthonormal basis Q of range(A_i) and z = Q^* y.
/// This is the grid-search fast path: O(m * rank) per candidate.
inline ResidualComponents residual_components(const Eigen::MatrixXcd& Q,
                                              const Eigen::VectorXcd& z,
                                              double y_norm2,
                                              const Eigen::VectorXcd& a,
                                              const Eigen::VectorXcd& y) {
    ResidualComponents rc;
    rc.r0 = y_norm2 - z.squaredNorm();
    if (rc.r0 < 0.0) rc.r0 = 0.0;
    const Eigen::VectorXcd w = Q.adjoint() * a;
    rc.num = (y.adjoint() * a).value() - (z.adjoint() * w).value();
    rc.den = a.squaredNorm() - w.squaredNorm();
    if (rc.den < 0.0) rc.den = 0.0;
    rc.degenerate = rc.den < 1e-12 * static_cast<double>(a.size());
    return rc;
}

/// Convenience overload forming the basis from A_i directly.
inline ResidualComponents residual_components(const Eigen::MatrixXcd& A_i,
                                              const Eigen::VectorXcd& a,
                                              const Eigen::VectorXcd& y) {
    const Eigen::MatrixXcd Q = orthonormal_basis(A_i);
    return residual_components(Q, Q.adjoint() * y, y.squaredNorm(), a, y);
}

} // namespace linespec

#endif
