// bincrb: posterior CRB and MCMC verification for binary plume sensor networks.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bincrb/error.hpp"
#include "bincrb/harness.hpp"
#include "bincrb/scenario_config.hpp"
#include "bincrb/validation.hpp"

namespace {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kRuntimeError = 3,
    kValidationFailed = 4,
};

struct Options {
    std::string config_path;
    std::string output_path;
    std::uint64_t seed = 1;
    std::size_t runs = 200;
    std::optional<double> tau_min;
    std::optional<double> tau_max;
    std::size_t points = 0;
    std::vector<std::string> overrides;
    unsigned threads = 0;
    std::string fault = "none";
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bincrb::Scenario load_scenario(const Options& o, bincrb::McmcConfig* mcmc = nullptr) {
    auto cfg = bincrb::KeyValueConfig::load(o.config_path);
    for (const auto& kv : o.overrides) cfg.set(std::string_view(kv));
    if (mcmc) *mcmc = bincrb::build_mcmc_config(cfg);
    return bincrb::build_scenario(cfg);
}

// Runs `write` against --output, or standard output when none was given.
template <class Fn>
void emit(const Options& o, Fn&& write) {
    if (o.output_path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(o.output_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + o.output_path);
    write(out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + o.output_path);
}

int cmd_crb(const Options& o) {
    const auto s = load_scenario(o);
    const auto jp = bincrb::prior_information(s.prior);
    const auto crb = bincrb::posterior_crb(bincrb::data_information_matrix(s.network(), s.theta_true), jp);
    std::cout << "sensors          " << s.sensors.size() << "\n"
              << "tau              " << fmt(s.tau.value()) << "\n"
              << "sigma_crb        " << fmt(bincrb::localization_sigma(crb)) << " m\n"
              << "sigma_crb_analog " << fmt(bincrb::analog_localization_sigma(s)) << " m\n"
              << "sigma_prior      " << fmt(bincrb::prior_localization_sigma(s)) << " m\n"
              << "crb              [[" << fmt(crb(0, 0)) << ", " << fmt(crb(0, 1)) << "], ["
              << fmt(crb(1, 0)) << ", " << fmt(crb(1, 1)) << "]]\n";
    return kOk;
}

std::vector<double> sweep_grid(const Options& o) {
    if (!o.tau_min && !o.tau_max && o.points == 0) return bincrb::default_sweep_thresholds();
    if (!o.tau_min || !o.tau_max || o.points == 0) {
        throw bincrb::ConfigError("--tau-min/--tau-max/--points", "give all three or none");
    }
    if (!(*o.tau_min < *o.tau_max)) throw bincrb::ConfigError("--tau-min", "must be < --tau-max");
    if (o.points < 2) throw bincrb::ConfigError("--points", "must be >= 2");
    if (*o.tau_min > 0.0) {
        std::vector<double> taus;
        for (double e : bincrb::linspace(std::log10(*o.tau_min), std::log10(*o.tau_max), o.points)) {
            taus.push_back(std::pow(10.0, e));
        }
        taus.front() = *o.tau_min;
        taus.back() = *o.tau_max;
        return taus;
    }
    return bincrb::linspace(*o.tau_min, *o.tau_max, o.points);
}

int cmd_sweep(const Options& o) {
    const auto s = load_scenario(o);
    const auto rows = bincrb::threshold_sweep(s, sweep_grid(o), o.threads);
    emit(o, [&](std::ostream& out) { bincrb::write_sweep_csv(out, rows); });
    if (!o.output_path.empty()) {
        std::cout << "wrote " << rows.size() << " thresholds to " << o.output_path << "\n";
    }
    return kOk;
}

int cmd_mcmc(const Options& o) {
    bincrb::McmcConfig cfg;
    const auto s = load_scenario(o, &cfg);
    cfg.rng_seed = o.seed;
    const auto net = s.network();
    const auto b = bincrb::simulate(net, s.theta_true, o.seed);
    std::size_t ones = 0;
    for (auto bit : b.bits()) ones += bit;
    const auto res = bincrb::estimate_source(net, s.prior, b, cfg);
    const double err = std::hypot(res.estimate[0] - s.theta_true[0], res.estimate[1] - s.theta_true[1]);
    std::cout << "bits set        " << ones << " of " << b.size() << "\n"
              << "estimate        (" << fmt(res.estimate[0]) << ", " << fmt(res.estimate[1]) << ")\n"
              << "error           " << fmt(err) << " m\n"
              << "acceptance_rate " << fmt(res.acceptance_rate) << "\n";
    return kOk;
}

int cmd_montecarlo(const Options& o) {
    bincrb::McmcConfig cfg;
    const auto s = load_scenario(o, &cfg);
    if (o.runs < 1) throw bincrb::ConfigError("--runs", "must be >= 1");
    const auto mc = bincrb::monte_carlo_rms(s, cfg, o.runs, o.seed, o.threads);
    emit(o, [&](std::ostream& out) { bincrb::write_runs_csv(out, mc.records); });
    std::cout << "rms_error " << fmt(mc.rms) << " m over " << (o.runs - mc.n_failed) << " runs";
    if (mc.n_failed) std::cout << " (WARNING: " << mc.n_failed << " runs failed to initialize)";
    std::cout << "\nsigma_crb " << fmt(bincrb::binary_localization_sigma(s)) << " m\n";
    return kOk;
}

int cmd_table1(const Options& o) {
    if (o.runs < 1) throw bincrb::ConfigError("--runs", "must be >= 1");
    const auto rows = bincrb::reproduce_table1(o.seed, o.runs, o.threads);
    emit(o, [&](std::ostream& out) { bincrb::write_table1_csv(out, rows); });
    if (!o.output_path.empty()) bincrb::write_table1_csv(std::cout, rows);
    return kOk;
}

int cmd_validate(const Options& o) {
    bincrb::InjectedFault fault = bincrb::InjectedFault::None;
    if (o.fault == "flip-crosswind-gradient") {
        fault = bincrb::InjectedFault::FlipCrosswindGradient;
    } else if (o.fault != "none") {
        throw bincrb::ConfigError("--inject-fault", "unknown fault '" + o.fault + "'");
    }
    const auto checks = bincrb::run_validation(fault);
    bincrb::print_validation_report(std::cout, checks);
    const bool ok = bincrb::all_passed(checks);
    std::cout << (ok ? "all checks passed" : "VALIDATION FAILED") << "\n";
    return ok ? kOk : kValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Posterior Cramer-Rao bounds for binary sensor networks observing a Gaussian plume"};
    app.require_subcommand(1);
    Options o;

    const auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "Scenario config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--set", o.overrides, "Override a config entry, KEY=VALUE (repeatable)");
    };
    const auto add_threads = [&](CLI::App* sub) {
        sub->add_option("--threads", o.threads, "Worker threads (default: all cores)");
    };

    auto* crb = app.add_subcommand("crb", "Print the posterior CRB for a scenario");
    add_config(crb);

    auto* sweep = app.add_subcommand("sweep", "Localization bound as a function of threshold (CSV)");
    add_config(sweep);
    add_threads(sweep);
    sweep->add_option("--output", o.output_path, "CSV output path (default: stdout)");
    sweep->add_option("--tau-min", o.tau_min, "Smallest threshold");
    sweep->add_option("--tau-max", o.tau_max, "Largest threshold");
    sweep->add_option("--points", o.points, "Number of thresholds (log-spaced when tau-min > 0)");

    auto* mcmc = app.add_subcommand("mcmc", "Simulate one measurement vector and estimate the source");
    add_config(mcmc);
    mcmc->add_option("--seed", o.seed, "Random seed");

    auto* mc = app.add_subcommand("montecarlo", "RMS localization error over repeated MCMC runs");
    add_config(mc);
    add_threads(mc);
    mc->add_option("--seed", o.seed, "Base seed; run l uses seed + l");
    mc->add_option("--runs", o.runs, "Number of Monte Carlo runs");
    mc->add_option("--output", o.output_path, "Per-run CSV output path (default: stdout)");

    auto* table = app.add_subcommand("table1", "Bound and MCMC RMS for the three reference placements");
    add_threads(table);
    table->add_option("--seed", o.seed, "Base seed");
    table->add_option("--runs", o.runs, "Monte Carlo runs per placement");
    table->add_option("--output", o.output_path, "CSV output path (default: stdout)");

    auto* validate = app.add_subcommand("validate", "Run the built-in oracle checks");
    validate->add_option("--inject-fault", o.fault, "Test fixture: none | flip-crosswind-gradient")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        if (*crb) return cmd_crb(o);
        if (*sweep) return cmd_sweep(o);
        if (*mcmc) return cmd_mcmc(o);
        if (*mc) return cmd_montecarlo(o);
        if (*table) return cmd_table1(o);
        if (*validate) return cmd_validate(o);
    } catch (const bincrb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const bincrb::InvalidInput& e) {
        std::cerr << "invalid scenario: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return kRuntimeError;
}
