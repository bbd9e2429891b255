#ifndef LINESPEC_VON_MISES_HPP
#define LINESPEC_VON_MISES_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "linespec/bessel.hpp"
#include "linespec/random.hpp"

namespace linespec {

/// Wrap an angle into [-pi, pi).
inline double wrap_to_pi(double x) {
    const double two_pi = 2.0 * std::numbers::pi;
    double w = x - two_pi * std::floor((x + std::numbers::pi) / two_pi);
    // floor rounding can land exactly on +pi
    if (w >= std::numbers::pi) w -= two_pi;
    return w;
}

/// Von Mises prior over a frequency: circular mean mu, concentration kappa.
/// kappa = 0 is the uniform distribution on the circle.
class VonMisesPrior {
public:
    VonMisesPrior(double mu, double kappa) : mu_(wrap_to_pi(mu)), kappa_(kappa) {
        if (!std::isfinite(mu))
            throw std::domain_error("VonMisesPrior: mu must be finite");
        if (!(kappa >= 0.0) || !std::isfinite(kappa))
            throw std::domain_error("VonMisesPrior: kappa must be finite and >= 0");
    }

    double mu() const { return mu_; }
    double kappa() const { return kappa_; }

    /// kappa * cos(omega - mu) - ln(2 pi I0(kappa)), scaled-Bessel evaluation.
    double log_pdf(double omega) const {
        if (!std::isfinite(omega))
            throw std::domain_error("VonMisesPrior::log_pdf: omega must be finite");
        return kappa_ * std::cos(omega - mu_) -
               std::log(2.0 * std::numbers::pi) - log_bessel_i0(kappa_);
    }

    double pdf(double omega) const { return std::exp(log_pdf(omega)); }

    /// 1 - I1(kappa)/I0(kappa); 1 at kappa = 0, -> 0 as kappa -> inf.
    double circular_variance() const {
        return 1.0 - mean_resultant_length();
    }

    /// First trigonometric moment magnitude rho = I1(kappa)/I0(kappa).
    double mean_resultant_length() const {
        return bessel_i_scaled(1, kappa_) / bessel_i_scaled(0, kappa_);
    }

    /// Best-Fisher rejection sampler; uniform fallback for tiny kappa.
    double sample(Rng& rng) const {
        if (kappa_ < 1e-6)
            return uniform(rng, -std::numbers::pi, std::numbers::pi);
        const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa_ * kappa_);
        const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa_);
        const double r = (1.0 + rho * rho) / (2.0 * rho);
        for (;;) {
            const double u1 = uniform01(rng);
            const double u2 = uniform01_open(rng);
            const double z = std::cos(std::numbers::pi * u1);
            const double f = (1.0 + r * z) / (r + z);
            const double c = kappa_ * (r - f);
            if (c * (2.0 - c) - u2 > 0.0 ||
                std::log(c / u2) + 1.0 - c >= 0.0) {
                const double u3 = uniform01(rng);
                const double theta = (u3 < 0.5 ? -1.0 : 1.0) *
                                     std::acos(std::clamp(f, -1.0, 1.0));
                return wrap_to_pi(mu_ + theta);
            }
        }
    }

private:
    double mu_;
    double kappa_;
};

} // namespace linespec

#endif
