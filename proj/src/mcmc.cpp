#include "bincrb/mcmc.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "bincrb/error.hpp"

namespace bincrb {

namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

// Symmetric square root; tolerates singular (even zero) covariances.
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& cov) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) throw NumericalError("proposal covariance decomposition failed");
    return eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

Eigen::VectorXd standard_normal(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
    return z;
}

}  // namespace

void McmcConfig::validate() const {
    if (n_init < 1) throw InvalidInput("mcmc: n_s must be >= 1");
    if (n_kept < 1) throw InvalidInput("mcmc: n_m must be >= 1");
    if (n_total < n_kept) throw InvalidInput("mcmc: total chain length must be >= n_m");
    if (proposal_cov && (proposal_cov->rows() != proposal_cov->cols() || !proposal_cov->allFinite())) {
        throw InvalidInput("mcmc: proposal covariance must be a finite square matrix");
    }
}

Eigen::MatrixXd default_proposal_covariance(const BinaryNetwork& net, const GaussianPrior& prior,
                                            const BinaryMeasurements& b) {
    const Eigen::MatrixXd fallback = 0.01 * prior.covariance();
    if (b.all_equal()) return fallback;
    try {
        const InfoMatrix jd = data_information_matrix(net, prior.mean());
        if (jd.matrix().isZero(0.0)) return fallback;
        return posterior_crb(jd, prior_information(prior));
    } catch (const NumericalError&) {
        return fallback;
    }
}

ThetaVector initialize(const BinaryNetwork& net, const GaussianPrior& prior,
                       const BinaryMeasurements& b, const McmcConfig& config) {
    config.validate();
    auto rng = make_rng(config.rng_seed, 0);
    const Eigen::VectorXd sd = prior.variances().cwiseSqrt();
    std::optional<ThetaVector> best;
    double best_ll = -std::numeric_limits<double>::infinity();
    std::size_t found = 0;
    for (std::size_t draw = 0; draw < config.init_draw_budget && found < config.n_init; ++draw) {
        const Eigen::VectorXd z = standard_normal(rng, sd.size());
        ThetaVector candidate(prior.mean().values() + sd.cwiseProduct(z));
        const double ll = log_likelihood(b, net, candidate);
        if (!(ll > config.init_log_likelihood_floor)) continue;
        ++found;
        if (ll > best_ll) {
            best_ll = ll;
            best = std::move(candidate);
        }
    }
    if (found < config.n_init) {
        throw InitializationFailure("mcmc initialization found " + std::to_string(found) + " of " +
                                    std::to_string(config.n_init) +
                                    " qualifying prior draws within the draw budget");
    }
    return *best;
}

ChainResult run_chain(const BinaryNetwork& net, const GaussianPrior& prior,
                      const BinaryMeasurements& b, const McmcConfig& config,
                      const ThetaVector& start) {
    config.validate();
    net.model.check_theta(start);
    const Eigen::MatrixXd cov =
        config.proposal_cov ? *config.proposal_cov : default_proposal_covariance(net, prior, b);
    if (cov.rows() != start.dim()) throw InvalidInput("mcmc: proposal covariance dimension mismatch");
    const Eigen::MatrixXd factor = covariance_factor(cov);

    auto rng = make_rng(config.rng_seed, 1);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const auto log_target = [&](const ThetaVector& t) {
        return log_likelihood(b, net, t) + prior.log_density(t);
    };

    ThetaVector current = start;
    double current_lp = log_target(current);
    std::size_t accepted = 0;
    const std::size_t keep_from = config.n_total - config.n_kept;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(start.dim());
    Eigen::MatrixXd sum_outer = Eigen::MatrixXd::Zero(start.dim(), start.dim());

    for (std::size_t step = 0; step < config.n_total; ++step) {
        ThetaVector proposal(current.values() + factor * standard_normal(rng, start.dim()));
        const double proposal_lp = log_target(proposal);
        if (std::log(uniform(rng)) < proposal_lp - current_lp) {
            current = std::move(proposal);
            current_lp = proposal_lp;
            ++accepted;
        }
        if (step >= keep_from) {
            sum += current.values();
            sum_outer.noalias() += current.values() * current.values().transpose();
        }
    }

    const double n = static_cast<double>(config.n_kept);
    Eigen::VectorXd mean = sum / n;
    Eigen::MatrixXd kept_cov = sum_outer / n - mean * mean.transpose();
    return {ThetaVector(std::move(mean)), config.n_kept,
            static_cast<double>(accepted) / static_cast<double>(config.n_total), kept_cov};
}

ChainResult estimate_source(const BinaryNetwork& net, const GaussianPrior& prior,
                            const BinaryMeasurements& b, const McmcConfig& config) {
    return run_chain(net, prior, b, config, initialize(net, prior, b, config));
}

}  // namespace bincrb
