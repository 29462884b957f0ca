#include "bincrb/observation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "bincrb/error.hpp"

namespace bincrb {

namespace {

// Beyond this many standard deviations the direct ratio loses precision to
// underflow in F; switch to the continued fraction for the Mills ratio.
constexpr double kHazardAsymptoticStart = 25.0;

// Standard normal hazard x + 1/(x + 2/(x + 3/(x + ...))), valid for large x.
double standard_hazard_continued_fraction(double x) {
    double tail = x;
    for (int k = 60; k >= 2; --k) tail = x + k / tail;
    return x + 1.0 / tail;
}

void require_same_size(const BinaryMeasurements& b, const BinaryNetwork& net) {
    if (b.size() != net.sensors.size()) {
        throw InvalidInput("measurement vector has " + std::to_string(b.size()) +
                           " bits but the network has " + std::to_string(net.sensors.size()) +
                           " sensors");
    }
}

}  // namespace

NoiseModel::NoiseModel(double sigma) : sigma_(sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("noise sigma must be > 0");
}

Threshold::Threshold(double tau) : tau_(tau) {
    if (!std::isfinite(tau)) throw InvalidInput("threshold must be finite");
}

BinaryMeasurements::BinaryMeasurements(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw InvalidInput("measurement vector must hold at least one bit");
    for (auto v : bits_) {
        if (v > 1) throw InvalidInput("measurement bits must be 0 or 1");
    }
}

bool BinaryMeasurements::all_equal() const noexcept {
    return std::adjacent_find(bits_.begin(), bits_.end(), std::not_equal_to<>()) == bits_.end();
}

double gauss_pdf(const NoiseModel& noise, double x) {
    const double s = noise.sigma();
    const double r = x / s;
    return std::exp(-0.5 * r * r) / (std::sqrt(2.0 * std::numbers::pi) * s);
}

double comp_cdf(const NoiseModel& noise, double x) {
    return 0.5 * std::erfc(x / (noise.sigma() * std::numbers::sqrt2));
}

double upper_hazard(const NoiseModel& noise, double u) {
    const double x = u / noise.sigma();
    if (x < kHazardAsymptoticStart) return gauss_pdf(noise, u) / comp_cdf(noise, u);
    return standard_hazard_continued_fraction(x) / noise.sigma();
}

double rho(const NoiseModel& noise, double u) {
    // f^2 / (F (1 - F)) = [f / F(u)] * [f / F(-u)], with 1 - F(u) = F(-u).
    const double value = upper_hazard(noise, u) * upper_hazard(noise, -u);
    return std::isfinite(value) ? value : 0.0;
}

double detection_probability(const MeasurementModel& model, const ThetaVector& theta,
                             const SensorLocation& sensor, const NoiseModel& noise,
                             const Threshold& tau) {
    return comp_cdf(noise, tau.value() - concentration(model, theta, sensor));
}

BinaryMeasurements simulate(const BinaryNetwork& net, const ThetaVector& theta_true,
                            std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, net.noise.sigma());
    std::vector<std::uint8_t> bits;
    bits.reserve(net.sensors.size());
    for (const auto& s : net.sensors) {
        const double z = concentration(net.model, theta_true, s) + noise(rng);
        bits.push_back(z > net.tau.value() ? 1 : 0);
    }
    return BinaryMeasurements(std::move(bits));
}

double log_likelihood(const BinaryMeasurements& b, const BinaryNetwork& net,
                      const ThetaVector& theta) {
    require_same_size(b, net);
    double total = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double u = net.tau.value() - concentration(net.model, theta, net.sensors[i]);
        // q = F(u), 1 - q = F(-u); both computed directly for tail accuracy.
        const double p = b[i] ? comp_cdf(net.noise, u) : comp_cdf(net.noise, -u);
        total += std::log(std::max(p, kProbabilityFloor));
    }
    return total;
}

Eigen::VectorXd score(const BinaryMeasurements& b, const BinaryNetwork& net,
                      const ThetaVector& theta) {
    require_same_size(b, net);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(theta.dim());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const auto& sensor = net.sensors[i];
        const double u = net.tau.value() - concentration(net.model, theta, sensor);
        const double sign = b[i] ? 1.0 : -1.0;
        const double v = sign * u;
        // Floored probabilities are locally constant in theta.
        if (comp_cdf(net.noise, v) < kProbabilityFloor) continue;
        // d/dtheta log F(tau - C) = +h(u) dC,  d/dtheta log F(C - tau) = -h(-u) dC
        s += sign * upper_hazard(net.noise, v) * gradient(net.model, theta, sensor);
    }
    return s;
}

}  // namespace bincrb
