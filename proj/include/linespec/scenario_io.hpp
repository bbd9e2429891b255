#ifndef LINESPEC_SCENARIO_IO_HPP
#define LINESPEC_SCENARIO_IO_HPP

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "linespec/bench.hpp"

namespace linespec {

/// Scenario file or input validation failure; message names the field.
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj,
                                std::initializer_list<const char*> allowed,
                                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        if (!known)
            throw ScenarioError("scenario: unknown key '" + where + key + "'");
    }
}

template <typename T>
inline T require_field(const nlohmann::json& obj, const char* key,
                       const std::string& where) {
    if (!obj.contains(key))
        throw ScenarioError("scenario: missing field '" + where + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ScenarioError("scenario: bad value for field '" + where + key +
                            "'");
    }
}

} // namespace detail

/// Parse a scenario document. Strict: unknown keys are rejected and every
/// invariant is checked, each with a field-specific message.
inline Scenario parse_scenario(const nlohmann::json& doc) {
    using nlohmann::json;
    if (!doc.is_object()) throw ScenarioError("scenario: root must be an object");
    detail::reject_unknown_keys(
        doc, {"model", "priors", "signal", "sweep", "mc", "solver",
              "estimators"},
        "");

    Scenario sc;

    const json& model = doc.contains("model") ? doc.at("model") : json::object();
    detail::reject_unknown_keys(model, {"d", "m", "snr_db"}, "model.");
    sc.d = detail::require_field<int>(model, "d", "model.");

    const json& sweep = doc.contains("sweep") ? doc.at("sweep") : json::object();
    detail::reject_unknown_keys(sweep, {"type", "values"}, "sweep.");
    const std::string type =
        detail::require_field<std::string>(sweep, "type", "sweep.");
    if (type == "snr") {
        sc.sweep = SweepType::Snr;
        sc.snr_db_values =
            detail::require_field<std::vector<double>>(sweep, "values",
                                                       "sweep.");
        sc.m_values = {detail::require_field<int>(model, "m", "model.")};
    } else if (type == "samples") {
        sc.sweep = SweepType::Samples;
        sc.m_values =
            detail::require_field<std::vector<int>>(sweep, "values", "sweep.");
        sc.snr_db_values = {
            detail::require_field<double>(model, "snr_db", "model.")};
    } else {
        throw ScenarioError(
            "scenario: sweep.type must be \"snr\" or \"samples\"");
    }

    if (!doc.contains("priors") || !doc.at("priors").is_array())
        throw ScenarioError("scenario: 'priors' must be a list");
    for (const json& entry : doc.at("priors")) {
        ScenarioPrior p;
        if (entry.contains("fixed_over_pi")) {
            detail::reject_unknown_keys(entry, {"fixed_over_pi"}, "priors[].");
            p.fixed = true;
            p.fixed_omega =
                detail::require_field<double>(entry, "fixed_over_pi",
                                              "priors[].") *
                std::numbers::pi;
        } else {
            detail::reject_unknown_keys(entry, {"mu_over_pi", "kappa"},
                                        "priors[].");
            p.mu = detail::require_field<double>(entry, "mu_over_pi",
                                                 "priors[].") *
                   std::numbers::pi;
            p.kappa =
                detail::require_field<double>(entry, "kappa", "priors[].");
            if (!(p.kappa >= 0.0) || !std::isfinite(p.kappa))
                throw ScenarioError(
                    "scenario: priors[].kappa must be finite and >= 0");
        }
        sc.priors.push_back(p);
    }
    if (sc.priors.size() != static_cast<std::size_t>(sc.d))
        throw ScenarioError("scenario: 'priors' length must equal model.d");

    const json& signal =
        doc.contains("signal") ? doc.at("signal") : json::object();
    detail::reject_unknown_keys(signal, {"alpha", "phase"}, "signal.");
    if (signal.contains("alpha"))
        sc.alpha = detail::require_field<std::vector<double>>(signal, "alpha",
                                                              "signal.");
    else
        sc.alpha.assign(static_cast<std::size_t>(sc.d), 1.0);
    if (sc.alpha.size() != static_cast<std::size_t>(sc.d))
        throw ScenarioError("scenario: signal.alpha length must equal model.d");
    if (signal.contains("phase")) {
        const json& ph = signal.at("phase");
        if (ph.is_string() && ph.get<std::string>() == "uniform") {
            sc.random_phase = true;
        } else if (ph.is_array()) {
            sc.random_phase = false;
            sc.fixed_phases = ph.get<std::vector<double>>();
            if (sc.fixed_phases.size() != static_cast<std::size_t>(sc.d))
                throw ScenarioError(
                    "scenario: signal.phase list length must equal model.d");
        } else {
            throw ScenarioError(
                "scenario: signal.phase must be \"uniform\" or a list");
        }
    }

    const json& mc = doc.contains("mc") ? doc.at("mc") : json::object();
    detail::reject_unknown_keys(mc, {"trials", "seed"}, "mc.");
    sc.trials = mc.contains("trials")
                    ? detail::require_field<int>(mc, "trials", "mc.")
                    : 500;
    sc.seed = mc.contains("seed")
                  ? detail::require_field<std::uint64_t>(mc, "seed", "mc.")
                  : 1;

    const json& solver =
        doc.contains("solver") ? doc.at("solver") : json::object();
    detail::reject_unknown_keys(solver, {"g", "L", "max_sweeps"}, "solver.");
    if (solver.contains("g"))
        sc.solver.grid_points = detail::require_field<int>(solver, "g",
                                                           "solver.");
    if (solver.contains("L"))
        sc.solver.levels = detail::require_field<int>(solver, "L", "solver.");
    if (solver.contains("max_sweeps"))
        sc.solver.max_sweeps_per_level =
            detail::require_field<int>(solver, "max_sweeps", "solver.");

    if (doc.contains("estimators")) {
        const auto names =
            detail::require_field<std::vector<std::string>>(doc, "estimators",
                                                            "");
        sc.run_map = false;
        sc.run_esprit = false;
        for (const std::string& n : names) {
            if (n == "map")
                sc.run_map = true;
            else if (n == "esprit")
                sc.run_esprit = true;
            else
                throw ScenarioError("scenario: unknown estimator '" + n + "'");
        }
    }

    try {
        sc.validate();
    } catch (const std::domain_error& e) {
        throw ScenarioError(e.what());
    }
    return sc;
}

inline Scenario parse_scenario_string(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioError(std::string("scenario: JSON parse error: ") +
                            e.what());
    }
    return parse_scenario(doc);
}

/// Locale-independent shortest round-trip formatting ('.' decimal point).
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// rmse.csv: one row per (estimator, frequency index, sweep point).
inline std::string rmse_csv(const AggregateReport& report) {
    std::string out =
        "sweep_var,sweep_value,estimator,freq_index,rmse_rad,"
        "crb_sqrt_rad,acrb_sqrt_rad,trials,failures\n";
    for (const SweepPointResult& pt : report.points) {
        for (const EstimatorCurve& est : pt.estimators) {
            for (std::size_t i = 0; i < est.rmse.size(); ++i) {
                out += pt.sweep_var;
                out += ',';
                out += format_number(pt.sweep_value);
                out += ',';
                out += est.name;
                out += ',';
                out += std::to_string(i + 1);
                out += ',';
                out += format_number(est.rmse[i]);
                out += ',';
                out += format_number(pt.crb_sqrt[i]);
                out += ',';
                out += format_number(pt.acrb_sqrt[i]);
                out += ',';
                out += std::to_string(pt.trials - est.failures);
                out += ',';
                out += std::to_string(est.failures);
                out += '\n';
            }
        }
    }
    return out;
}

/// bounds.csv: sqrt CRB/ACRB diagonals at the mean frequencies, no trials.
inline std::string bounds_csv(const Scenario& scenario) {
    std::string out =
        "sweep_var,sweep_value,freq_index,crb_sqrt_rad,acrb_sqrt_rad\n";
    const bool snr_sweep = scenario.sweep == SweepType::Snr;
    const std::size_t n_points = snr_sweep ? scenario.snr_db_values.size()
                                           : scenario.m_values.size();
    Eigen::VectorXcd s_mean(scenario.d);
    for (int i = 0; i < scenario.d; ++i)
        s_mean(i) = scenario.alpha[static_cast<std::size_t>(i)];
    for (std::size_t sp = 0; sp < n_points; ++sp) {
        const int m = snr_sweep ? scenario.m_values[0] : scenario.m_values[sp];
        const double snr_db = snr_sweep ? scenario.snr_db_values[sp]
                                        : scenario.snr_db_values[0];
        const double sigma2 = std::pow(10.0, -snr_db / 10.0);
        const double sweep_value =
            snr_sweep ? snr_db : static_cast<double>(m);
        Eigen::VectorXd crb_diag =
            Eigen::VectorXd::Constant(scenario.d,
                                      std::numeric_limits<double>::quiet_NaN());
        Eigen::VectorXd acrb_diag = crb_diag;
        try {
            const Eigen::MatrixXd C =
                crb(scenario.mean_omegas(), s_mean, sigma2, m);
            crb_diag = C.diagonal();
        } catch (const std::exception&) {
        }
        try {
            const Eigen::MatrixXd C =
                acrb(scenario.mean_omegas(), s_mean, sigma2, m,
                     scenario.acrb_lambda());
            acrb_diag = C.diagonal();
        } catch (const std::exception&) {
        }
        for (int i = 0; i < scenario.d; ++i) {
            out += snr_sweep ? "snr" : "samples";
            out += ',';
            out += format_number(sweep_value);
            out += ',';
            out += std::to_string(i + 1);
            out += ',';
            out += format_number(std::sqrt(crb_diag(i)));
            out += ',';
            out += format_number(std::sqrt(acrb_diag(i)));
            out += '\n';
        }
    }
    return out;
}

/// report.json: full config echo, seeds, bound curves and per-call timings.
inline nlohmann::json report_json(const Scenario& scenario,
                                  const AggregateReport& report,
                                  int threads) {
    nlohmann::json cfg;
    cfg["d"] = scenario.d;
    cfg["sweep_type"] =
        scenario.sweep == SweepType::Snr ? "snr" : "samples";
    cfg["m_values"] = scenario.m_values;
    cfg["snr_db_values"] = scenario.snr_db_values;
    cfg["trials"] = scenario.trials;
    cfg["seed"] = scenario.seed;
    cfg["solver"] = {{"g", scenario.solver.grid_points},
                     {"L", scenario.solver.levels},
                     {"max_sweeps", scenario.solver.max_sweeps_per_level}};
    nlohmann::json priors = nlohmann::json::array();
    for (const ScenarioPrior& p : scenario.priors) {
        if (p.fixed)
            priors.push_back(
                {{"fixed_over_pi", p.fixed_omega / std::numbers::pi}});
        else
            priors.push_back({{"mu_over_pi", p.mu / std::numbers::pi},
                              {"kappa", p.kappa}});
    }
    cfg["priors"] = priors;
    cfg["alpha"] = scenario.alpha;
    cfg["estimators"] = [&] {
        std::vector<std::string> names;
        if (scenario.run_map) names.push_back("map");
        if (scenario.run_esprit) names.push_back("esprit");
        return names;
    }();

    nlohmann::json points = nlohmann::json::array();
    for (const SweepPointResult& pt : report.points) {
        nlohmann::json jp;
        jp["sweep_var"] = pt.sweep_var;
        jp["sweep_value"] = pt.sweep_value;
        jp["m"] = pt.m;
        jp["snr_db"] = pt.snr_db;
        jp["sigma2"] = pt.sigma2;
        jp["trials"] = pt.trials;
        jp["crb_sqrt_of_mean"] = pt.crb_sqrt;
        jp["crb_mean_of_sqrt"] = pt.crb_mean_sqrt;
        jp["acrb_sqrt_of_mean"] = pt.acrb_sqrt;
        jp["acrb_mean_of_sqrt"] = pt.acrb_mean_sqrt;
        nlohmann::json ests = nlohmann::json::array();
        for (const EstimatorCurve& e : pt.estimators)
            ests.push_back({{"name", e.name},
                            {"rmse_rad", e.rmse},
                            {"failures", e.failures},
                            {"mean_call_ms", e.mean_ms}});
        jp["estimators"] = ests;
        points.push_back(jp);
    }

    nlohmann::json out;
    out["config"] = cfg;
    out["threads"] = threads;
    out["points"] = points;
    // ACRB is a large-kappa approximation; see the bound definitions.
    out["notes"] = {
        {"acrb", "approximation valid for large concentration parameters"},
        {"crb_averaging",
         "crb_sqrt_rad is sqrt of the mean CRB diagonal over trial draws; "
         "the mean-of-sqrt curve is reported here for comparison"}};
    return out;
}

} // namespace linespec

#endif
