#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "bincrb/information.hpp"
#include "bincrb/observation.hpp"

namespace bincrb {

struct McmcConfig {
    std::size_t n_init = 10;        // accepted prior draws during initialization
    std::size_t n_kept = 10'000;    // tail samples averaged into the estimate
    std::size_t n_total = 20'000;   // chain length including burn-in
    std::optional<Eigen::MatrixXd> proposal_cov;  // unset: default_proposal_covariance
    std::uint64_t rng_seed = 0;
    std::size_t init_draw_budget = 1'000'000;
    /// A prior draw qualifies during initialization when its log-likelihood exceeds this.
    double init_log_likelihood_floor = -69.07755278982137;  // log(1e-30)

    void validate() const;
};

struct ChainResult {
    ThetaVector estimate;
    std::size_t samples_kept;
    double acceptance_rate;
    Eigen::MatrixXd kept_covariance;  // sample covariance of the kept tail
};

/// Thrown when initialization cannot find enough prior draws consistent with the data.
class InitializationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Posterior CRB at the prior mean, or 0.01 * prior covariance when the data
/// carry no usable information (all bits equal, zero or singular J^d).
Eigen::MatrixXd default_proposal_covariance(const BinaryNetwork& net, const GaussianPrior& prior,
                                            const BinaryMeasurements& b);

/// Draw from the prior until `n_init` candidates clear the likelihood floor and
/// return the most likely one.
ThetaVector initialize(const BinaryNetwork& net, const GaussianPrior& prior,
                       const BinaryMeasurements& b, const McmcConfig& config);

/// Random-walk Metropolis-Hastings on likelihood x prior from `start`.
ChainResult run_chain(const BinaryNetwork& net, const GaussianPrior& prior,
                      const BinaryMeasurements& b, const McmcConfig& config,
                      const ThetaVector& start);

/// initialize + run_chain.
ChainResult estimate_source(const BinaryNetwork& net, const GaussianPrior& prior,
                            const BinaryMeasurements& b, const McmcConfig& config);

}  // namespace bincrb
