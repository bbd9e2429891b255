// Command-line frontend for the line spectrum estimation toolkit.
//
// Subcommands:
//   estimate   run the MAP estimator on a sample file
//   benchmark  run a Monte Carlo scenario, writing rmse.csv and report.json
//   bounds     emit CRB/ACRB curves for a scenario, no Monte Carlo
//
// Exit codes: 0 success, 2 configuration error, 3 runtime/numerical error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "linespec/linespec.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Samples are CSV with one "re,im" pair per line; a non-numeric first line
// is treated as a header.
Eigen::VectorXcd read_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sample file '" + path + "'");
    std::vector<std::complex<double>> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::istringstream ss(line);
        double re = 0.0, im = 0.0;
        char comma = 0;
        if (!(ss >> re >> comma >> im) || comma != ',') {
            if (lineno == 1 && values.empty()) continue; // header
            throw ConfigError("sample file '" + path + "' line " +
                              std::to_string(lineno) +
                              ": expected 're,im'");
        }
        values.emplace_back(re, im);
    }
    if (values.empty())
        throw ConfigError("sample file '" + path + "' holds no samples");
    return Eigen::Map<const Eigen::VectorXcd>(
        values.data(), static_cast<Eigen::Index>(values.size()));
}

std::vector<linespec::VonMisesPrior> parse_priors(
    const std::vector<std::string>& specs) {
    std::vector<linespec::VonMisesPrior> priors;
    for (const std::string& s : specs) {
        const auto comma = s.find(',');
        if (comma == std::string::npos)
            throw ConfigError("--prior expects 'MU_OVER_PI,KAPPA', got '" + s +
                              "'");
        try {
            const double mu = std::stod(s.substr(0, comma)) * std::numbers::pi;
            const double kappa = std::stod(s.substr(comma + 1));
            priors.emplace_back(mu, kappa);
        } catch (const std::domain_error& e) {
            throw ConfigError(std::string("--prior: ") + e.what());
        } catch (const std::exception&) {
            throw ConfigError("--prior: cannot parse '" + s + "'");
        }
    }
    if (priors.empty()) throw ConfigError("at least one --prior is required");
    return priors;
}

linespec::Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return linespec::parse_scenario_string(buf.str());
    } catch (const linespec::ScenarioError& e) {
        throw ConfigError(e.what());
    }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << text;
}

int cmd_estimate(const std::string& input,
                 const std::vector<std::string>& prior_specs,
                 const linespec::SolverConfig& solver,
                 const std::string& json_out) {
    const Eigen::VectorXcd y = read_samples(input);
    const auto priors = parse_priors(prior_specs);
    if (y.size() <= static_cast<Eigen::Index>(priors.size()))
        throw ConfigError("need more samples than priors (m > d)");

    const linespec::EstimateResult res =
        linespec::estimate(y, priors, solver);

    std::cout << "m = " << y.size() << ", d = " << priors.size() << "\n";
    for (Eigen::Index i = 0; i < res.omegas.size(); ++i) {
        const double w = res.omegas(i);
        std::cout << "omega_" << (i + 1) << " = " << w << " rad  ("
                  << w / std::numbers::pi << " pi)\n";
        const std::complex<double> s = res.s_hat(i);
        std::cout << "s_" << (i + 1) << "     = " << s.real() << " + "
                  << s.imag() << "j  (|s| = " << std::abs(s)
                  << ", arg = " << std::arg(s) << ")\n";
    }
    std::cout << "sigma2 = " << res.sigma2_hat << "\n";
    int total_sweeps = 0;
    for (int sw : res.sweeps_per_level) total_sweeps += sw;
    std::cout << "converged = " << (res.converged ? "true" : "false")
              << ", sweeps = " << total_sweeps << "\n";

    if (!json_out.empty()) {
        nlohmann::json j;
        j["m"] = y.size();
        j["d"] = priors.size();
        std::vector<double> omegas_rad, omegas_over_pi;
        std::vector<std::vector<double>> s_hat;
        for (Eigen::Index i = 0; i < res.omegas.size(); ++i) {
            omegas_rad.push_back(res.omegas(i));
            omegas_over_pi.push_back(res.omegas(i) / std::numbers::pi);
            s_hat.push_back({res.s_hat(i).real(), res.s_hat(i).imag()});
        }
        j["omegas_rad"] = omegas_rad;
        j["omegas_over_pi"] = omegas_over_pi;
        j["s_hat_re_im"] = s_hat;
        j["sigma2_hat"] = res.sigma2_hat;
        j["converged"] = res.converged;
        j["sweeps_per_level"] = res.sweeps_per_level;
        write_file(json_out, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_benchmark(const std::string& scenario_path, const std::string& out_dir,
                  int threads, int trials_override, long long seed_override) {
    linespec::Scenario sc = load_scenario(scenario_path);
    if (trials_override > 0) sc.trials = trials_override;
    if (seed_override >= 0) sc.seed = static_cast<std::uint64_t>(seed_override);

    const std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!std::filesystem::is_directory(dir))
        throw ConfigError("output directory '" + out_dir + "' is not usable");

    const linespec::AggregateReport report =
        linespec::run_scenario(sc, threads);
    write_file(dir / "rmse.csv", linespec::rmse_csv(report));
    write_file(dir / "report.json",
               linespec::report_json(sc, report, threads).dump(2) + "\n");
    std::cout << "wrote " << (dir / "rmse.csv").string() << " and "
              << (dir / "report.json").string() << "\n";
    return 0;
}

int cmd_bounds(const std::string& scenario_path, const std::string& out_dir) {
    const linespec::Scenario sc = load_scenario(scenario_path);
    const std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!std::filesystem::is_directory(dir))
        throw ConfigError("output directory '" + out_dir + "' is not usable");
    const std::string csv = linespec::bounds_csv(sc);
    if (csv.find("nan") != std::string::npos)
        std::cerr << "warning: singular Fisher matrix at some sweep points; "
                     "rows carry nan markers\n";
    write_file(dir / "bounds.csv", csv);
    std::cout << "wrote " << (dir / "bounds.csv").string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Line spectrum estimation toolkit"};
    app.require_subcommand(1);

    // estimate
    auto* est = app.add_subcommand(
        "estimate", "MAP frequency estimate from a sample file");
    std::string input, json_out;
    std::vector<std::string> prior_specs;
    linespec::SolverConfig solver;
    est->add_option("--input", input, "CSV sample file, one re,im per line")
        ->required();
    est->add_option("--prior", prior_specs,
                    "Frequency prior as MU_OVER_PI,KAPPA (repeat per cisoid)")
        ->required();
    est->add_option("--grid", solver.grid_points, "Grid points per sweep");
    est->add_option("--levels", solver.levels, "Refinement levels");
    est->add_option("--max-sweeps", solver.max_sweeps_per_level,
                    "Sweep cap per level");
    est->add_option("--json", json_out, "Also write the result as JSON");

    // benchmark
    auto* bench = app.add_subcommand(
        "benchmark", "Monte Carlo benchmark from a scenario file");
    std::string scenario_path, out_dir = ".";
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    int trials_override = 0;
    long long seed_override = -1;
    bench->add_option("--scenario", scenario_path, "Scenario JSON file")
        ->required();
    bench->add_option("--out", out_dir, "Output directory");
    bench->add_option("--threads", threads, "Worker threads");
    bench->add_option("--trials", trials_override, "Override trial count");
    bench->add_option("--seed", seed_override, "Override master seed");

    // bounds
    auto* bounds = app.add_subcommand(
        "bounds", "CRB/ACRB curves at the mean frequencies");
    std::string b_scenario, b_out = ".";
    bounds->add_option("--scenario", b_scenario, "Scenario JSON file")
        ->required();
    bounds->add_option("--out", b_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (est->parsed())
            return cmd_estimate(input, prior_specs, solver, json_out);
        if (bench->parsed())
            return cmd_benchmark(scenario_path, out_dir, threads,
                                 trials_override, seed_override);
        if (bounds->parsed()) return cmd_bounds(b_scenario, b_out);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
