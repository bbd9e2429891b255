#ifndef LINESPEC_BENCH_HPP
#define LINESPEC_BENCH_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <complex>
#include <limits>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "linespec/bounds.hpp"
#include "linespec/esprit.hpp"
#include "linespec/map_estimator.hpp"
#include "linespec/random.hpp"
#include "linespec/signal_model.hpp"
#include "linespec/von_mises.hpp"

namespace linespec {

/// Wrapped (modulo-2pi) estimation error: representative of est - truth
/// closest to zero, in [-pi, pi).
inline double wrap_error(double truth, double est) {
    return wrap_to_pi(est - truth);
}

/// Pairing of unordered estimates to true frequencies. keyed = true returns
/// the identity (prior-indexed estimates); otherwise the permutation
/// minimizing total wrapped absolute error, exhaustively over d! (d <= 6).
/// Result perm satisfies: estimate perm[i] is paired with truth i.
inline std::vector<int> match_frequencies(const Eigen::VectorXd& truth,
                                          const Eigen::VectorXd& estimates,
                                          bool keyed) {
    const int d = static_cast<int>(truth.size());
    if (estimates.size() != truth.size())
        throw std::domain_error("match_frequencies: length mismatch");
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    if (keyed) return perm;
    if (d > 6)
        throw std::domain_error("match_frequencies: d > 6 unsupported");
    std::vector<int> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (int i = 0; i < d; ++i)
            cost += std::abs(wrap_error(
                truth(i), estimates(perm[static_cast<std::size_t>(i)])));
        if (cost < best_cost) {
            best_cost = cost;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

struct ScenarioPrior {
    double mu = 0.0;
    double kappa = 0.0;
    bool fixed = false;       // deterministic frequency override
    double fixed_omega = 0.0; // radians, used when fixed
};

enum class SweepType { Snr, Samples };

struct Scenario {
    int d = 0;
    SweepType sweep = SweepType::Snr;
    std::vector<int> m_values;          // length > 1 only for samples sweeps
    std::vector<double> snr_db_values;  // length > 1 only for snr sweeps
    std::vector<ScenarioPrior> priors;  // length d
    std::vector<double> alpha;          // length d
    bool random_phase = true;
    std::vector<double> fixed_phases;   // length d when !random_phase
    int trials = 500;
    std::uint64_t seed = 1;
    bool run_map = true;
    bool run_esprit = true;
    SolverConfig solver;

    void validate() const {
        if (d < 1) throw std::domain_error("scenario: d must be >= 1");
        if (priors.size() != static_cast<std::size_t>(d))
            throw std::domain_error("scenario: priors must have length d");
        if (alpha.size() != static_cast<std::size_t>(d))
            throw std::domain_error("scenario: alpha must have length d");
        if (trials < 1) throw std::domain_error("scenario: trials must be >= 1");
        if (m_values.empty() || snr_db_values.empty())
            throw std::domain_error("scenario: missing m or snr values");
        if (m_values.size() > 1 && snr_db_values.size() > 1)
            throw std::domain_error(
                "scenario: only one of m/snr may be swept at a time");
        if (sweep == SweepType::Snr && m_values.size() != 1)
            throw std::domain_error("scenario: snr sweep requires a single m");
        if (sweep == SweepType::Samples && snr_db_values.size() != 1)
            throw std::domain_error(
                "scenario: samples sweep requires a single snr");
        if (!random_phase && fixed_phases.size() != static_cast<std::size_t>(d))
            throw std::domain_error(
                "scenario: fixed phases must have length d");
        for (const auto& p : priors)
            if (!(p.kappa >= 0.0))
                throw std::domain_error("scenario: kappa must be >= 0");
        for (int m : m_values)
            if (m <= d)
                throw std::domain_error("scenario: require m > d");
        if (!run_map && !run_esprit)
            throw std::domain_error("scenario: no estimators selected");
        solver.validate();
    }

    std::vector<VonMisesPrior> map_priors() const {
        std::vector<VonMisesPrior> out;
        out.reserve(priors.size());
        for (const auto& p : priors) out.emplace_back(p.mu, p.kappa);
        return out;
    }

    /// Prior means with deterministic overrides applied; the evaluation
    /// point of the ACRB.
    Eigen::VectorXd mean_omegas() const {
        Eigen::VectorXd mu(d);
        for (int i = 0; i < d; ++i) {
            const auto& p = priors[static_cast<std::size_t>(i)];
            mu(i) = p.fixed ? p.fixed_omega : p.mu;
        }
        return mu;
    }

    Eigen::VectorXd acrb_lambda() const {
        Eigen::VectorXd lam(d);
        for (int i = 0; i < d; ++i) {
            const auto& p = priors[static_cast<std::size_t>(i)];
            lam(i) = p.fixed ? 0.0 : p.kappa;
        }
        return lam;
    }
};

struct TrialRecord {
    int trial = 0;
    Eigen::VectorXd true_omegas;
    std::optional<Eigen::VectorXd> map_errors;
    std::optional<Eigen::VectorXd> esprit_errors;
    bool map_converged = true;
    bool map_failed = false;
    bool esprit_failed = false;
    double map_ms = 0.0;
    double esprit_ms = 0.0;
    std::vector<double> crb_diag;  // empty when the bound was singular
};

struct EstimatorCurve {
    std::string name;
    std::vector<double> rmse;  // per frequency index
    int failures = 0;
    double mean_ms = 0.0;
};

struct SweepPointResult {
    std::string sweep_var;  // "snr" or "samples"
    double sweep_value = 0.0;
    int m = 0;
    double snr_db = 0.0;
    double sigma2 = 0.0;
    std::vector<EstimatorCurve> estimators;
    std::vector<double> crb_sqrt;        // sqrt(mean c_ii) over trial draws
    std::vector<double> crb_mean_sqrt;   // mean sqrt(c_ii), for comparison
    std::vector<double> acrb_sqrt;
    std::vector<double> acrb_mean_sqrt;
    int trials = 0;
    std::vector<TrialRecord> records;
};

struct AggregateReport {
    std::uint64_t seed = 0;
    std::vector<SweepPointResult> points;
};

namespace detail {

struct TrialTask {
    const Scenario* scenario;
    int m;
    double sigma2;
    std::size_t sweep_index;
};

inline TrialRecord run_trial(const TrialTask& task, int trial) {
    const Scenario& sc = *task.scenario;
    Rng rng(child_seed(sc.seed, task.sweep_index,
                       static_cast<std::uint64_t>(trial)));

    TrialRecord rec;
    rec.trial = trial;

    // Frequency draw order fixed by index so seeds reproduce.
    Eigen::VectorXd omegas(sc.d);
    for (int i = 0; i < sc.d; ++i) {
        const auto& p = sc.priors[static_cast<std::size_t>(i)];
        omegas(i) = p.fixed ? wrap_to_pi(p.fixed_omega)
                            : VonMisesPrior(p.mu, p.kappa).sample(rng);
    }
    Eigen::VectorXcd s(sc.d);
    for (int i = 0; i < sc.d; ++i) {
        const double phase =
            sc.random_phase
                ? uniform(rng, 0.0, 2.0 * std::numbers::pi)
                : sc.fixed_phases[static_cast<std::size_t>(i)];
        s(i) = std::polar(sc.alpha[static_cast<std::size_t>(i)], phase);
    }
    rec.true_omegas = omegas;

    SignalDraw draw{omegas, s, task.sigma2, task.m};
    const SignalInstance sig = synthesize(draw, rng);

    using Clock = std::chrono::steady_clock;
    if (sc.run_map) {
        try {
            const auto t0 = Clock::now();
            const EstimateResult est =
                estimate(sig.y, sc.map_priors(), sc.solver);
            rec.map_ms = std::chrono::duration<double, std::milli>(
                             Clock::now() - t0)
                             .count();
            rec.map_converged = est.converged;
            Eigen::VectorXd err(sc.d);
            for (int i = 0; i < sc.d; ++i)
                err(i) = wrap_error(omegas(i), est.omegas(i));
            rec.map_errors = std::move(err);
        } catch (const std::exception&) {
            rec.map_failed = true;
        }
    }
    if (sc.run_esprit) {
        try {
            const auto t0 = Clock::now();
            const EspritResult est = esprit(sig.y, sc.d, task.m / 2);
            rec.esprit_ms = std::chrono::duration<double, std::milli>(
                                Clock::now() - t0)
                                .count();
            const std::vector<int> perm =
                match_frequencies(omegas, est.omegas, false);
            Eigen::VectorXd err(sc.d);
            for (int i = 0; i < sc.d; ++i)
                err(i) = wrap_error(
                    omegas(i), est.omegas(perm[static_cast<std::size_t>(i)]));
            rec.esprit_errors = std::move(err);
        } catch (const std::exception&) {
            rec.esprit_failed = true;
        }
    }

    try {
        const Eigen::MatrixXd C = crb(omegas, s, task.sigma2, task.m);
        rec.crb_diag.resize(static_cast<std::size_t>(sc.d));
        for (int i = 0; i < sc.d; ++i)
            rec.crb_diag[static_cast<std::size_t>(i)] = C(i, i);
    } catch (const std::exception&) {
        rec.crb_diag.clear();
    }
    return rec;
}

} // namespace detail

/// Run all sweep points of a scenario. Trials execute in parallel across up
/// to `threads` workers; aggregation is a fixed-order sequential reduction,
/// so results are identical for any thread count.
inline AggregateReport run_scenario(const Scenario& scenario, int threads = 1,
                                    bool keep_records = false) {
    scenario.validate();
    AggregateReport report;
    report.seed = scenario.seed;

    const bool snr_sweep = scenario.sweep == SweepType::Snr;
    const std::size_t n_points = snr_sweep ? scenario.snr_db_values.size()
                                           : scenario.m_values.size();

    for (std::size_t sp = 0; sp < n_points; ++sp) {
        SweepPointResult point;
        point.sweep_var = snr_sweep ? "snr" : "samples";
        point.m = snr_sweep ? scenario.m_values[0]
                            : scenario.m_values[sp];
        point.snr_db = snr_sweep ? scenario.snr_db_values[sp]
                                 : scenario.snr_db_values[0];
        point.sweep_value = snr_sweep ? point.snr_db
                                      : static_cast<double>(point.m);
        point.sigma2 = std::pow(10.0, -point.snr_db / 10.0);
        point.trials = scenario.trials;

        const detail::TrialTask task{&scenario, point.m, point.sigma2, sp};
        std::vector<TrialRecord> records(
            static_cast<std::size_t>(scenario.trials));

        const int nthreads =
            std::max(1, std::min<int>(threads, scenario.trials));
        if (nthreads == 1) {
            for (int t = 0; t < scenario.trials; ++t)
                records[static_cast<std::size_t>(t)] =
                    detail::run_trial(task, t);
        } else {
            std::vector<std::thread> pool;
            std::atomic<int> next{0};
            for (int w = 0; w < nthreads; ++w)
                pool.emplace_back([&]() {
                    for (;;) {
                        const int t = next.fetch_add(1);
                        if (t >= scenario.trials) return;
                        records[static_cast<std::size_t>(t)] =
                            detail::run_trial(task, t);
                    }
                });
            for (auto& th : pool) th.join();
        }

        const std::size_t dd = static_cast<std::size_t>(scenario.d);
        auto aggregate = [&](auto errors_of, const char* name,
                             auto failed_of, auto ms_of) {
            EstimatorCurve curve;
            curve.name = name;
            curve.rmse.assign(dd, 0.0);
            std::vector<double> sq(dd, 0.0);
            int ok = 0;
            double ms = 0.0;
            for (const TrialRecord& r : records) {
                if (failed_of(r) || !errors_of(r)->has_value()) {
                    ++curve.failures;
                    continue;
                }
                const Eigen::VectorXd& e = errors_of(r)->value();
                for (std::size_t i = 0; i < dd; ++i)
                    sq[i] += e(static_cast<Eigen::Index>(i)) *
                             e(static_cast<Eigen::Index>(i));
                ms += ms_of(r);
                ++ok;
            }
            for (std::size_t i = 0; i < dd; ++i)
                curve.rmse[i] = ok > 0 ? std::sqrt(sq[i] / ok) : 0.0;
            curve.mean_ms = ok > 0 ? ms / ok : 0.0;
            return curve;
        };

        if (scenario.run_map)
            point.estimators.push_back(aggregate(
                [](const TrialRecord& r) { return &r.map_errors; }, "map",
                [](const TrialRecord& r) { return r.map_failed; },
                [](const TrialRecord& r) { return r.map_ms; }));
        if (scenario.run_esprit)
            point.estimators.push_back(aggregate(
                [](const TrialRecord& r) { return &r.esprit_errors; },
                "esprit",
                [](const TrialRecord& r) { return r.esprit_failed; },
                [](const TrialRecord& r) { return r.esprit_ms; }));

        // CRB averaged over the same frequency/amplitude draws.
        point.crb_sqrt.assign(dd, std::numeric_limits<double>::quiet_NaN());
        point.crb_mean_sqrt = point.crb_sqrt;
        {
            std::vector<double> mean_c(dd, 0.0), mean_sqrt(dd, 0.0);
            int ok = 0;
            for (const TrialRecord& r : records) {
                if (r.crb_diag.size() != dd) continue;
                for (std::size_t i = 0; i < dd; ++i) {
                    mean_c[i] += r.crb_diag[i];
                    mean_sqrt[i] += std::sqrt(r.crb_diag[i]);
                }
                ++ok;
            }
            if (ok > 0)
                for (std::size_t i = 0; i < dd; ++i) {
                    point.crb_sqrt[i] = std::sqrt(mean_c[i] / ok);
                    point.crb_mean_sqrt[i] = mean_sqrt[i] / ok;
                }
        }

        // ACRB at the mean frequencies; with |alpha_i| fixed it does not
        // depend on the drawn phases, so one evaluation suffices.
        point.acrb_sqrt.assign(dd, std::numeric_limits<double>::quiet_NaN());
        point.acrb_mean_sqrt = point.acrb_sqrt;
        try {
            Eigen::VectorXcd s_mean(scenario.d);
            for (int i = 0; i < scenario.d; ++i)
                s_mean(i) = scenario.alpha[static_cast<std::size_t>(i)];
            const Eigen::MatrixXd C =
                acrb(scenario.mean_omegas(), s_mean, point.sigma2, point.m,
                     scenario.acrb_lambda());
            for (std::size_t i = 0; i < dd; ++i) {
                point.acrb_sqrt[i] =
                    std::sqrt(C(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(i)));
                point.acrb_mean_sqrt[i] = point.acrb_sqrt[i];
            }
        } catch (const std::exception&) {
            // NaN markers remain
        }

        if (keep_records) point.records = std::move(records);
        report.points.push_back(std::move(point));
    }
    return report;
}

} // namespace linespec

#endif
