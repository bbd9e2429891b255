// Independent test oracles. These deliberately avoid the library's own
// evaluation paths: brute-force series, quadrature and direct linear-algebra
// reductions only.
#ifndef LINESPEC_TESTS_ORACLES_HPP
#define LINESPEC_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

// Power-series sum for I_nu(x) in extended precision, summed to convergence.
inline long double bessel_i_series(int order, long double x) {
    const long double half = 0.5L * x;
    long double term = (order == 0) ? 1.0L : half;
    long double sum = term;
    const long double q = half * half;
    for (int k = 1; k < 5000; ++k) {
        term *= q / (static_cast<long double>(k) * (k + order));
        sum += term;
        if (term < sum * 1e-22L) break;
    }
    return sum;
}

inline long double bessel_i_scaled_series(int order, long double x) {
    return bessel_i_series(order, x) * std::exp(-x);
}

// Composite Simpson quadrature of f over [a, b] with n (even) panels.
template <typename F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Residual y* Pi^perp_A y via a direct Gram-matrix least squares solve,
// independent of the library's QR-based projectors.
inline double residual_gram(const Eigen::MatrixXcd& A,
                            const Eigen::VectorXcd& y) {
    if (A.cols() == 0) return y.squaredNorm();
    const Eigen::MatrixXcd G = A.adjoint() * A;
    const Eigen::VectorXcd c = A.adjoint() * y;
    const Eigen::VectorXcd x = G.ldlt().solve(c);
    double r = y.squaredNorm() - c.dot(x).real();
    return r < 0.0 ? 0.0 : r;
}

// Concentrated MAP cost evaluated from first principles for the oracle grid
// searches: residual via the Gram solve, prior factor written out directly.
inline double map_cost_direct(const Eigen::VectorXcd& y,
                              const std::vector<double>& omegas,
                              const std::vector<double>& mus,
                              const std::vector<double>& kappas) {
    const Eigen::Index m = y.size();
    const Eigen::Index d = static_cast<Eigen::Index>(omegas.size());
    Eigen::MatrixXcd A(m, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index t = 0; t < m; ++t)
            A(t, i) = std::polar(1.0, omegas[static_cast<std::size_t>(i)] *
                                          static_cast<double>(t));
    double phi = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
        phi -= kappas[static_cast<std::size_t>(i)] *
               std::cos(omegas[static_cast<std::size_t>(i)] -
                        mus[static_cast<std::size_t>(i)]) /
               static_cast<double>(m + 1);
    return residual_gram(A, y) * std::exp(phi);
}

} // namespace oracles

#endif
