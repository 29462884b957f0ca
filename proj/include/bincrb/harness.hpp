#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bincrb/mcmc.hpp"
#include "bincrb/scenario.hpp"

namespace bincrb {

struct SweepRecord {
    double tau;
    double sigma_crb_binary;
    double sigma_crb_analog;
    double sigma_prior;
};

struct RunRecord {
    std::size_t run_index;
    std::uint64_t seed;
    double estimate_x;
    double estimate_y;
    double error;
    double acceptance_rate;
    bool failed = false;  // initialization failed; excluded from the RMS
};

struct MonteCarloResult {
    double rms;
    std::size_t n_failed;
    std::vector<RunRecord> records;
};

struct Table1Row {
    int placement;
    std::size_t n_sensors;
    double sigma_crb;
    double rms_error;
    std::size_t n_runs;
};

/// Worker count used when a caller passes 0.
unsigned default_thread_count();

/// sqrt(tr((J^d + J^p)^-1)) for the scenario at its own threshold.
double binary_localization_sigma(const Scenario& scenario);

/// Same bound with unquantized readings.
double analog_localization_sigma(const Scenario& scenario);

/// sqrt(tr(Sigma)).
double prior_localization_sigma(const Scenario& scenario);

/// 200 log-spaced thresholds over [1e-6, 1e-1] plus -1e6 and 1e6, ascending.
std::vector<double> default_sweep_thresholds();

/// One record per threshold, in input order.
std::vector<SweepRecord> threshold_sweep(const Scenario& scenario, const std::vector<double>& taus,
                                         unsigned threads = 0);

/// Run `n_runs` independent simulate-and-estimate trials. Run l simulates with
/// seed base_seed + l and seeds its chain from the same value, so the result
/// depends only on base_seed regardless of thread count.
MonteCarloResult monte_carlo_rms(const Scenario& scenario, const McmcConfig& config,
                                 std::size_t n_runs, std::uint64_t base_seed, unsigned threads = 0);

/// Theoretical bound and MCMC RMS for the three reference placements at the table threshold.
std::vector<Table1Row> reproduce_table1(std::uint64_t base_seed, std::size_t n_runs = 200,
                                        unsigned threads = 0, const McmcConfig& config = {});

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& rows);
void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& rows);
void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows);

}  // namespace bincrb
