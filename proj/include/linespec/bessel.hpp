#ifndef LINESPEC_BESSEL_HPP
#define LINESPEC_BESSEL_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace linespec {

namespace detail {

// Power series I_nu(x) = sum_k (x/2)^{2k+nu} / (k! (k+nu)!), nu in {0,1}.
// Converges quickly for moderate x; used below the asymptotic crossover.
inline double bessel_i_series(int order, double x) {
    const double half = 0.5 * x;
    double term = (order == 0) ? 1.0 : half;
    double sum = term;
    const double q = half * half;
    for (int k = 1; k < 1000; ++k) {
        term *= q / (static_cast<double>(k) * (k + order));
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum;
}

// Asymptotic expansion of e^{-x} I_nu(x) for large x:
//   e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(nu) / x^k,
//   a_k(nu) = prod_{j=1..k} (4 nu^2 - (2j-1)^2) / (k! 8^k).
// Truncated at the smallest term; below 1e-15 relative for x >= 18.
inline double bessel_ie_asymptotic(int order, double x) {
    const double mu = 4.0 * order * order;
    double term = 1.0;
    double sum = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (8.0 * x * k);
        if (std::abs(term) >= std::abs(prev)) break; // divergent tail
        sum += term;
        prev = term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

constexpr double kBesselCrossover = 20.0;

inline void check_bessel_arg(int order, double x) {
    if (order != 0 && order != 1)
        throw std::domain_error("bessel_i: order must be 0 or 1");
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::domain_error("bessel_i: argument must be finite and >= 0");
}

} // namespace detail

/// Modified Bessel function I_0(x) or I_1(x), x >= 0.
inline double bessel_i(int order, double x) {
    detail::check_bessel_arg(order, x);
    if (x < detail::kBesselCrossover)
        return detail::bessel_i_series(order, x);
    return detail::bessel_ie_asymptotic(order, x) * std::exp(x);
}

/// Exponentially scaled e^{-x} I_order(x); finite for all finite x >= 0.
inline double bessel_i_scaled(int order, double x) {
    detail::check_bessel_arg(order, x);
    if (x < detail::kBesselCrossover)
        return detail::bessel_i_series(order, x) * std::exp(-x);
    return detail::bessel_ie_asymptotic(order, x);
}

/// ln I_0(x), evaluated in scaled form so it never overflows.
inline double log_bessel_i0(double x) {
    return x + std::log(bessel_i_scaled(0, x));
}

} // namespace linespec

#endif
