#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "bincrb/dispersion.hpp"
#include "bincrb/observation.hpp"

namespace bincrb {

/// Symmetric positive-semidefinite M x M information matrix.
/// Construction checks both properties and throws InvalidInput on violation.
class InfoMatrix {
public:
    explicit InfoMatrix(Eigen::MatrixXd entries);
    static InfoMatrix zero(Eigen::Index dim);

    Eigen::Index dim() const noexcept { return entries_.rows(); }
    const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
    double operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }

    InfoMatrix operator+(const InfoMatrix& other) const;

private:
    Eigen::MatrixXd entries_;
};

/// True when `a` is symmetric and its smallest eigenvalue is >= -tol * ||a||.
bool is_positive_semidefinite(const Eigen::MatrixXd& a, double tol = 1e-10);

/// N(mean, diag(variances)).
class GaussianPrior {
public:
    GaussianPrior(ThetaVector mean, Eigen::VectorXd variances);

    const ThetaVector& mean() const noexcept { return mean_; }
    const Eigen::VectorXd& variances() const noexcept { return variances_; }
    Eigen::MatrixXd covariance() const { return variances_.asDiagonal(); }
    double log_density(const ThetaVector& theta) const;  // up to an additive constant

private:
    ThetaVector mean_;
    Eigen::VectorXd variances_;
};

/// Expected information from the binary data at theta:
/// sum_i rho(tau - C_i) grad C_i grad C_i^T.
InfoMatrix data_information_matrix(const BinaryNetwork& net, const ThetaVector& theta);

/// Same sum with rho replaced by 1/sigma^2, i.e. unquantized readings. Ignores the threshold.
InfoMatrix analog_information_matrix(const BinaryNetwork& net, const ThetaVector& theta);

InfoMatrix prior_information(const GaussianPrior& prior);

/// (jd + jp)^-1. Throws NumericalError when the sum is singular.
Eigen::MatrixXd posterior_crb(const InfoMatrix& jd, const InfoMatrix& jp);

/// sqrt(trace(crb)), the bound on the RMS parameter error.
double localization_sigma(const Eigen::MatrixXd& crb);

enum class ExpectationMode {
    Exact,     // weighted sum over all 2^S outcomes
    Sampling,  // Monte Carlo average over simulated outcomes
};

struct EmpiricalInformation {
    InfoMatrix mean;
    Eigen::MatrixXd standard_error;  // zero in exact mode
    std::size_t outcomes;            // outcomes enumerated or samples drawn
};

inline constexpr std::size_t kMaxExactSensors = 20;
inline constexpr std::size_t kMinEmpiricalSamples = 10'000;

/// E_b[score score^T] at theta_true, as a reference value for
/// data_information_matrix. Exact mode requires S <= kMaxExactSensors;
/// sampling mode requires n_samples >= kMinEmpiricalSamples.
EmpiricalInformation empirical_information_matrix(const BinaryNetwork& net,
                                                  const ThetaVector& theta_true,
                                                  ExpectationMode mode,
                                                  std::size_t n_samples = 0,
                                                  std::uint64_t seed = 0);

}  // namespace bincrb
