#ifndef LINESPEC_MAP_ESTIMATOR_HPP
#define LINESPEC_MAP_ESTIMATOR_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "linespec/projections.hpp"
#include "linespec/signal_model.hpp"
#include "linespec/von_mises.hpp"

namespace linespec {

/// beta_i = -kappa_i e^{-j mu_i} / (m+1); |beta_i| quantifies prior certainty.
inline Eigen::VectorXcd prior_weights(const std::vector<VonMisesPrior>& priors,
                                      Eigen::Index m) {
    Eigen::VectorXcd beta(static_cast<Eigen::Index>(priors.size()));
    for (Eigen::Index i = 0; i < beta.size(); ++i)
        beta(i) = -priors[static_cast<std::size_t>(i)].kappa() *
                  std::polar(1.0, -priors[static_cast<std::size_t>(i)].mu()) /
                  static_cast<double>(m + 1);
    return beta;
}

/// phi(omega) = sum_i Re{ beta_i e^{j omega_i} }
///            = -sum_i kappa_i cos(omega_i - mu_i) / (m+1).
inline double phi(const Eigen::VectorXd& omegas, const Eigen::VectorXcd& beta) {
    if (omegas.size() != beta.size())
        throw std::domain_error("phi: length mismatch");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < omegas.size(); ++i)
        acc += (beta(i) * std::polar(1.0, omegas(i))).real();
    return acc;
}

/// Single-frequency prior term phi_i(omega) = Re{ beta_i e^{j omega} }.
inline double phi_single(double omega, std::complex<double> beta_i) {
    return (beta_i * std::polar(1.0, omega)).real();
}

/// Concentrated MAP cost (y* Pi_A^perp y) e^{phi(omega)}.
/// Degenerate frequency sets are handled rank-aware by the projector.
inline double map_cost(const Eigen::VectorXcd& y, const Eigen::VectorXd& omegas,
                       const std::vector<VonMisesPrior>& priors) {
    const Eigen::Index m = y.size();
    const Eigen::MatrixXcd A = vandermonde(omegas, m);
    const Eigen::MatrixXcd Q = orthonormal_basis(A);
    double resid = y.squaredNorm() - (Q.adjoint() * y).squaredNorm();
    if (resid < 0.0) resid = 0.0;
    return resid * std::exp(phi(omegas, prior_weights(priors, m)));
}

/// log map_cost; safe for very large kappa where e^{phi} over/underflows.
/// Returns -inf when the residual is (numerically) zero.
inline double log_map_cost(const Eigen::VectorXcd& y,
                           const Eigen::VectorXd& omegas,
                           const std::vector<VonMisesPrior>& priors) {
    const Eigen::Index m = y.size();
    const Eigen::MatrixXcd A = vandermonde(omegas, m);
    const Eigen::MatrixXcd Q = orthonormal_basis(A);
    double resid = y.squaredNorm() - (Q.adjoint() * y).squaredNorm();
    if (resid < 0.0) resid = 0.0;
    return std::log(resid) + phi(omegas, prior_weights(priors, m));
}

/// Per-frequency cost V(omega_i; others) of the alternating search:
/// (y* Pi^perp_{A_i} y - |y* Pi^perp_{A_i} a|^2 / ||Pi^perp_{A_i} a||^2)
///   * e^{phi_i(omega_i)}.
inline double per_frequency_cost(const Eigen::VectorXcd& y, double omega_i,
                                 const Eigen::VectorXd& others,
                                 const VonMisesPrior& prior_i) {
    const Eigen::Index m = y.size();
    Eigen::MatrixXcd A_i(m, others.size());
    for (Eigen::Index k = 0; k < others.size(); ++k)
        A_i.col(k) = steering_vector(others(k), m);
    const ResidualComponents rc =
        residual_components(A_i, steering_vector(omega_i, m), y);
    if (rc.degenerate)
        throw std::domain_error("per_frequency_cost: degenerate candidate");
    double bracket = rc.r0 - std::norm(rc.num) / rc.den;
    if (bracket < 0.0) bracket = 0.0;
    const std::complex<double> beta_i =
        -prior_i.kappa() * std::polar(1.0, -prior_i.mu()) /
        static_cast<double>(m + 1);
    return bracket * std::exp(phi_single(omega_i, beta_i));
}

struct SolverConfig {
    int grid_points = 500;        // g
    int levels = 10;              // L
    double eps_grid_points = 2.0; // convergence threshold, in grid spacings
    int max_sweeps_per_level = 50;

    void validate() const {
        if (grid_points < 8)
            throw std::domain_error("SolverConfig: grid_points must be >= 8");
        if (levels < 1)
            throw std::domain_error("SolverConfig: levels must be >= 1");
        if (max_sweeps_per_level < 1 || eps_grid_points <= 0.0)
            throw std::domain_error("SolverConfig: caps must be positive");
    }

    /// Final grid resolution pi / (2^{L-1} g) reached after all refinements.
    double final_resolution() const {
        return std::numbers::pi /
               (std::ldexp(1.0, levels - 1) * static_cast<double>(grid_points));
    }
};

struct EstimateResult {
    Eigen::VectorXd omegas;   // keyed to prior index
    Eigen::VectorXcd s_hat;
    double sigma2_hat = 0.0;
    std::vector<int> sweeps_per_level;
    bool converged = true;
};

namespace detail {

// One 1-D grid search of the per-frequency cost, fast path: the complement
// basis of the fixed frequencies is formed once, grid points cost O(m*rank).
// Comparisons run on log-cost, which shares the argmin and never overflows.
// Ties and degenerate candidates: lowest-index grid point wins; degenerate
// points (candidate collinear with the fixed set) are skipped.
inline double grid_search_1d(const Eigen::VectorXcd& y,
                             const std::vector<double>& fixed,
                             std::complex<double> beta_i,
                             const std::vector<double>& grid) {
    const Eigen::Index m = y.size();
    Eigen::MatrixXcd A_i(m, static_cast<Eigen::Index>(fixed.size()));
    for (std::size_t k = 0; k < fixed.size(); ++k)
        A_i.col(static_cast<Eigen::Index>(k)) = steering_vector(fixed[k], m);
    const Eigen::MatrixXcd Q = orthonormal_basis(A_i);
    const Eigen::VectorXcd z = Q.adjoint() * y;
    const double yn2 = y.squaredNorm();

    double best_cost = std::numeric_limits<double>::infinity();
    double best_omega = std::numeric_limits<double>::quiet_NaN();
    for (double cand : grid) {
        const double omega = wrap_to_pi(cand);
        const Eigen::VectorXcd a = steering_vector(omega, m);
        const ResidualComponents rc = residual_components(Q, z, yn2, a, y);
        if (rc.degenerate) continue;
        double bracket = rc.r0 - std::norm(rc.num) / rc.den;
        if (bracket < 0.0) bracket = 0.0;
        const double log_cost =
            std::log(bracket) + phi_single(omega, beta_i);
        if (log_cost < best_cost) {
            best_cost = log_cost;
            best_omega = omega;
        }
    }
    if (std::isnan(best_omega))
        throw std::runtime_error("grid_search_1d: all grid points degenerate");
    return best_omega;
}

inline std::vector<double> level_grid(double center, double width, int g) {
    std::vector<double> grid(static_cast<std::size_t>(g));
    for (int k = 0; k < g; ++k)
        grid[static_cast<std::size_t>(k)] =
            center - width / 2.0 + width * static_cast<double>(k) /
                                       static_cast<double>(g);
    return grid;
}

} // namespace detail

/// Alternating-projections MAP line spectrum estimator.
///
/// Initialization processes frequencies in descending |beta_i| (ties by
/// ascending prior index), each found by a 1-D grid search against the
/// already-initialized set. Each refinement level then sweeps i = 1..d in
/// original index order until every wrapped frequency change is below
/// eps (2 grid spacings) or the sweep cap is hit; the next level halves the
/// search interval around the current estimates.
inline EstimateResult estimate(const Eigen::VectorXcd& y,
                               const std::vector<VonMisesPrior>& priors,
                               const SolverConfig& config = {}) {
    config.validate();
    const Eigen::Index m = y.size();
    const Eigen::Index d = static_cast<Eigen::Index>(priors.size());
    if (d < 1 || m <= d)
        throw std::domain_error("estimate: require m > d >= 1");
    if (!y.allFinite())
        throw std::domain_error("estimate: y has non-finite entries");

    const Eigen::VectorXcd beta = prior_weights(priors, m);
    const int g = config.grid_points;
    const double two_pi = 2.0 * std::numbers::pi;

    // Level-1 grid: g points on [-pi, pi), endpoint excluded.
    std::vector<double> base_grid(static_cast<std::size_t>(g));
    for (int k = 0; k < g; ++k)
        base_grid[static_cast<std::size_t>(k)] =
            -std::numbers::pi + two_pi * static_cast<double>(k) /
                                    static_cast<double>(g);

    // Initialization order: descending prior certainty |beta_i|.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) {
                         return std::abs(beta(a)) > std::abs(beta(b));
                     });

    std::vector<double> omega(static_cast<std::size_t>(d), 0.0);
    std::vector<double> active;
    for (Eigen::Index idx : order) {
        const double w = detail::grid_search_1d(
            y, active, beta(idx), base_grid);
        omega[static_cast<std::size_t>(idx)] = w;
        active.push_back(w);
    }

    EstimateResult result;
    result.converged = true;
    double width = two_pi;
    for (int level = 0; level < config.levels; ++level) {
        const double spacing = width / static_cast<double>(g);
        const double eps = config.eps_grid_points * spacing;
        bool level_converged = false;
        int sweeps = 0;
        while (sweeps < config.max_sweeps_per_level && !level_converged) {
            ++sweeps;
            double max_delta = 0.0;
            for (Eigen::Index i = 0; i < d; ++i) {
                std::vector<double> others;
                others.reserve(static_cast<std::size_t>(d - 1));
                for (Eigen::Index k = 0; k < d; ++k)
                    if (k != i) others.push_back(omega[static_cast<std::size_t>(k)]);
                const std::vector<double> grid =
                    level == 0 ? base_grid
                               : detail::level_grid(
                                     omega[static_cast<std::size_t>(i)], width, g);
                const double updated =
                    detail::grid_search_1d(y, others, beta(i), grid);
                const double delta = std::abs(wrap_to_pi(
                    updated - omega[static_cast<std::size_t>(i)]));
                max_delta = std::max(max_delta, delta);
                omega[static_cast<std::size_t>(i)] = updated;
            }
            level_converged = max_delta < eps;
        }
        result.sweeps_per_level.push_back(sweeps);
        if (!level_converged) result.converged = false;
        width /= 2.0;
    }

    result.omegas = Eigen::Map<const Eigen::VectorXd>(
        omega.data(), static_cast<Eigen::Index>(omega.size()));
    for (Eigen::Index i = 0; i < d; ++i)
        result.omegas(i) = wrap_to_pi(result.omegas(i));

    const Eigen::MatrixXcd A = vandermonde(result.omegas, m);
    result.s_hat = pseudo_inverse(A) * y;
    const Eigen::MatrixXcd Q = orthonormal_basis(A);
    double resid = y.squaredNorm() - (Q.adjoint() * y).squaredNorm();
    if (resid < 0.0) resid = 0.0;
    result.sigma2_hat = resid / static_cast<double>(m + 1);
    return result;
}

} // namespace linespec

#endif
