#include "bincrb/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

namespace bincrb {

namespace {

// Calls fn(i) for i in [0, n) on up to `threads` workers. Rethrows the first exception.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = default_thread_count();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < threads; ++t) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                        next = n;
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double sigma_for(const Scenario& s, const InfoMatrix& jd) {
    return localization_sigma(posterior_crb(jd, prior_information(s.prior)));
}

}  // namespace

unsigned default_thread_count() { return std::max(1U, std::thread::hardware_concurrency()); }

double binary_localization_sigma(const Scenario& s) {
    return sigma_for(s, data_information_matrix(s.network(), s.theta_true));
}

double analog_localization_sigma(const Scenario& s) {
    return sigma_for(s, analog_information_matrix(s.network(), s.theta_true));
}

double prior_localization_sigma(const Scenario& s) { return std::sqrt(s.prior.variances().sum()); }

std::vector<double> default_sweep_thresholds() {
    std::vector<double> taus{-1e6};
    for (double e : linspace(-6.0, -1.0, 200)) taus.push_back(std::pow(10.0, e));
    taus.push_back(1e6);
    return taus;
}

std::vector<SweepRecord> threshold_sweep(const Scenario& s, const std::vector<double>& taus,
                                         unsigned threads) {
    const double analog = analog_localization_sigma(s);
    const double prior = prior_localization_sigma(s);
    std::vector<SweepRecord> rows(taus.size());
    parallel_for(taus.size(), threads, [&](std::size_t i) {
        const BinaryNetwork net = s.network(Threshold(taus[i]));
        rows[i] = {taus[i], sigma_for(s, data_information_matrix(net, s.theta_true)), analog, prior};
    });
    return rows;
}

MonteCarloResult monte_carlo_rms(const Scenario& s, const McmcConfig& config, std::size_t n_runs,
                                 std::uint64_t base_seed, unsigned threads) {
    config.validate();
    const BinaryNetwork net = s.network();
    std::vector<RunRecord> records(n_runs);
    parallel_for(n_runs, threads, [&](std::size_t run) {
        const std::uint64_t seed = base_seed + run;
        const BinaryMeasurements b = simulate(net, s.theta_true, seed);
        McmcConfig chain = config;
        chain.rng_seed = seed;
        RunRecord& r = records[run];
        r.run_index = run;
        r.seed = seed;
        try {
            const ChainResult res = estimate_source(net, s.prior, b, chain);
            r.estimate_x = res.estimate[0];
            r.estimate_y = res.estimate[1];
            r.error = std::hypot(r.estimate_x - s.theta_true[0], r.estimate_y - s.theta_true[1]);
            r.acceptance_rate = res.acceptance_rate;
        } catch (const InitializationFailure&) {
            const double nan = std::nan("");
            r.estimate_x = r.estimate_y = r.error = r.acceptance_rate = nan;
            r.failed = true;
        }
    });

    MonteCarloResult out{0.0, 0, std::move(records)};
    double sum_sq = 0.0;
    std::size_t used = 0;
    for (const auto& r : out.records) {
        if (r.failed) {
            ++out.n_failed;
            continue;
        }
        sum_sq += r.error * r.error;
        ++used;
    }
    out.rms = used ? std::sqrt(sum_sq / static_cast<double>(used)) : std::nan("");
    return out;
}

std::vector<Table1Row> reproduce_table1(std::uint64_t base_seed, std::size_t n_runs,
                                        unsigned threads, const McmcConfig& config) {
    std::vector<Table1Row> rows;
    for (int p = 1; p <= 3; ++p) {
        const Scenario s = reference::scenario(grid_placement(reference::table_placement(p)),
                                               reference::kTableThreshold);
        const MonteCarloResult mc = monte_carlo_rms(s, config, n_runs, base_seed, threads);
        rows.push_back({p, s.sensors.size(), binary_localization_sigma(s), mc.rms, n_runs - mc.n_failed});
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& rows) {
    out << "tau,sigma_crb_binary,sigma_crb_analog,sigma_prior\n";
    for (const auto& r : rows) {
        out << fmt(r.tau) << ',' << fmt(r.sigma_crb_binary) << ',' << fmt(r.sigma_crb_analog) << ','
            << fmt(r.sigma_prior) << '\n';
    }
}

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& rows) {
    out << "run,seed,est_x,est_y,error,acceptance_rate\n";
    for (const auto& r : rows) {
        out << r.run_index << ',' << r.seed << ',' << fmt(r.estimate_x) << ',' << fmt(r.estimate_y)
            << ',' << fmt(r.error) << ',' << fmt(r.acceptance_rate) << '\n';
    }
}

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows) {
    out << "placement,S,sigma_crb,rms_error,n_runs\n";
    for (const auto& r : rows) {
        out << r.placement << ',' << r.n_sensors << ',' << fmt(r.sigma_crb) << ',' << fmt(r.rms_error)
            << ',' << r.n_runs << '\n';
    }
}

}  // namespace bincrb
