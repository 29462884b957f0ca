#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bincrb/dispersion.hpp"

namespace bincrb {

/// Additive zero-mean white Gaussian noise on each analog reading.
class NoiseModel {
public:
    explicit NoiseModel(double sigma);
    double sigma() const noexcept { return sigma_; }

private:
    double sigma_;
};

/// Binary decision threshold, in signal units.
class Threshold {
public:
    explicit Threshold(double tau);
    double value() const noexcept { return tau_; }

private:
    double tau_;
};

/// One bit per sensor: 1 iff the noisy reading exceeded the threshold.
class BinaryMeasurements {
public:
    explicit BinaryMeasurements(std::vector<std::uint8_t> bits);

    std::size_t size() const noexcept { return bits_.size(); }
    std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    bool all_equal() const noexcept;

    bool operator==(const BinaryMeasurements&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Everything needed to turn a parameter vector into bit probabilities.
struct BinaryNetwork {
    MeasurementModel model;
    std::vector<SensorLocation> sensors;
    NoiseModel noise;
    Threshold tau;
};

/// Floor applied to q_i and 1 - q_i before taking logarithms.
inline constexpr double kProbabilityFloor = 1e-300;

double gauss_pdf(const NoiseModel& noise, double x);

/// Upper-tail probability P(w > x), evaluated through erfc so that tails
/// far below machine epsilon keep full relative accuracy.
double comp_cdf(const NoiseModel& noise, double x);

/// f(u) / F(u), finite for every u (asymptotic expansion once F underflows).
double upper_hazard(const NoiseModel& noise, double u);

/// Per-sensor information weight f^2(u) / (F(u) (1 - F(u))). Tends to 0 as |u| grows.
double rho(const NoiseModel& noise, double u);

/// q_i = P(b_i = 1 | theta) = F(tau - C_i(theta)).
double detection_probability(const MeasurementModel& model, const ThetaVector& theta,
                             const SensorLocation& sensor, const NoiseModel& noise,
                             const Threshold& tau);

/// Draw one measurement vector at `theta_true`. Equal seeds give equal bits.
BinaryMeasurements simulate(const BinaryNetwork& net, const ThetaVector& theta_true,
                            std::uint64_t seed);

/// Bernoulli log-likelihood with q_i and 1 - q_i floored at kProbabilityFloor.
double log_likelihood(const BinaryMeasurements& b, const BinaryNetwork& net,
                      const ThetaVector& theta);

/// Gradient of `log_likelihood` with respect to theta.
Eigen::VectorXd score(const BinaryMeasurements& b, const BinaryNetwork& net,
                      const ThetaVector& theta);

}  // namespace bincrb
