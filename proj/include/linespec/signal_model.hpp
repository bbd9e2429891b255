#ifndef LINESPEC_SIGNAL_MODEL_HPP
#define LINESPEC_SIGNAL_MODEL_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "linespec/random.hpp"

namespace linespec {

using Complex = std::complex<double>;

/// a(omega) = [1, e^{j omega}, ..., e^{j(m-1) omega}]^T.
inline Eigen::VectorXcd steering_vector(double omega, Eigen::Index m) {
    if (m < 1)
        throw std::domain_error("steering_vector: m must be >= 1");
    Eigen::VectorXcd a(m);
    for (Eigen::Index t = 0; t < m; ++t)
        a(t) = std::polar(1.0, omega * static_cast<double>(t));
    return a;
}

/// m x d matrix whose i-th column is a(omega_i).
inline Eigen::MatrixXcd vandermonde(const Eigen::VectorXd& omegas,
                                    Eigen::Index m) {
    const Eigen::Index d = omegas.size();
    if (d < 1 || m <= d)
        throw std::domain_error("vandermonde: require m > d >= 1");
    Eigen::MatrixXcd A(m, d);
    for (Eigen::Index i = 0; i < d; ++i)
        A.col(i) = steering_vector(omegas(i), m);
    return A;
}

/// True when two frequencies coincide within tol modulo 2 pi; such a matrix
/// is (near) rank deficient and downstream code must use rank-aware handling.
inline bool has_near_duplicate_frequencies(const Eigen::VectorXd& omegas,
                                           double tol = 1e-12) {
    const double two_pi = 2.0 * std::numbers::pi;
    for (Eigen::Index i = 0; i < omegas.size(); ++i)
        for (Eigen::Index k = i + 1; k < omegas.size(); ++k) {
            double diff = std::remainder(omegas(i) - omegas(k), two_pi);
            if (std::abs(diff) < tol) return true;
        }
    return false;
}

struct SignalDraw {
    Eigen::VectorXd omegas;   // true frequencies, radians
    Eigen::VectorXcd s;       // complex amplitudes s_i = alpha_i e^{j phi_i}
    double sigma2 = 0.0;      // noise variance E[|n(t)|^2]
    Eigen::Index m = 0;
};

struct SignalInstance {
    Eigen::VectorXcd y;
    Eigen::VectorXd true_omegas;
    Eigen::VectorXcd true_s;
    double sigma2 = 0.0;
};

/// y = A(omega) s + n, with n circularly-symmetric complex Gaussian:
/// real and imaginary parts i.i.d. N(0, sigma2/2).
inline SignalInstance synthesize(const SignalDraw& draw, Rng& rng) {
    if (draw.m <= draw.omegas.size())
        throw std::domain_error("synthesize: require m > d");
    if (draw.sigma2 < 0.0)
        throw std::domain_error("synthesize: sigma2 must be >= 0");
    SignalInstance out;
    out.true_omegas = draw.omegas;
    out.true_s = draw.s;
    out.sigma2 = draw.sigma2;
    out.y = vandermonde(draw.omegas, draw.m) * draw.s;
    if (draw.sigma2 > 0.0) {
        const double scale = std::sqrt(draw.sigma2 / 2.0);
        for (Eigen::Index t = 0; t < draw.m; ++t)
            out.y(t) += Complex(scale * standard_normal(rng),
                                scale * standard_normal(rng));
    }
    return out;
}

} // namespace linespec

#endif
