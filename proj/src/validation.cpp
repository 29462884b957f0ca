#include "bincrb/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>

#include "bincrb/dispersion.hpp"
#include "bincrb/information.hpp"
#include "bincrb/observation.hpp"

namespace bincrb {

namespace {

using GradientFn = std::function<Eigen::VectorXd(const MeasurementModel&, const ThetaVector&,
                                                 const SensorLocation&)>;

struct PlumeCase {
    MeasurementModel model;
    ThetaVector theta;
    SensorLocation sensor;
};

// Downwind sensor inside the visible plume of a randomized environment.
PlumeCase random_plume_case(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const auto in = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };
    PlumeEnvironment env{.z0 = in(0.0, 8.0), .Q0 = in(1.0, 10.0), .U = in(1.0, 6.0),
                         .sigma_v = in(0.2, 1.0), .sigma_w = in(0.15, 0.5)};
    const ThetaVector theta{in(-50.0, 50.0), in(-50.0, 50.0)};
    const double downwind = in(20.0, 250.0);
    const double sigma_y = env.sigma_v * downwind / env.U;
    const SensorLocation sensor{theta[0] + downwind, theta[1] + sigma_y * in(-2.5, 2.5), 0.0};
    return {MeasurementModel(GaussianPlume{env}), theta, sensor};
}

double relative_error(const Eigen::VectorXd& value, const Eigen::VectorXd& reference) {
    const double scale = reference.cwiseAbs().maxCoeff();
    return (value - reference).cwiseAbs().maxCoeff() / (scale > 0.0 ? scale : 1.0);
}

// Plume network whose bit probabilities are far from 0 and 1.
BinaryNetwork moderate_network(std::mt19937_64& rng, std::size_t n_sensors) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const PlumeEnvironment env{.z0 = 5.0, .Q0 = 5.0, .U = 3.5, .sigma_v = 0.5, .sigma_w = 0.2};
    const MeasurementModel model(GaussianPlume{env});
    const ThetaVector theta{10.0, 15.0};
    std::vector<SensorLocation> sensors;
    std::vector<double> levels;
    for (std::size_t i = 0; i < n_sensors; ++i) {
        const double x = 60.0 + 160.0 * u01(rng);
        const double y = 15.0 + (x - 10.0) * (u01(rng) - 0.5) * 0.2;
        sensors.push_back({x, y, 0.0});
        levels.push_back(concentration(model, theta, sensors.back()));
    }
    std::nth_element(levels.begin(), levels.begin() + levels.size() / 2, levels.end());
    const double median = levels[levels.size() / 2];
    return {model, std::move(sensors), NoiseModel(0.5 * median), Threshold(median)};
}

ValidationCheck make_check(std::string name, double max_error, double tolerance) {
    return {std::move(name), max_error, tolerance, max_error < tolerance};
}

}  // namespace

std::vector<ValidationCheck> run_validation(InjectedFault fault) {
    GradientFn grad = [](const MeasurementModel& m, const ThetaVector& t, const SensorLocation& s) {
        return gradient(m, t, s);
    };
    if (fault == InjectedFault::FlipCrosswindGradient) {
        grad = [](const MeasurementModel& m, const ThetaVector& t, const SensorLocation& s) {
            Eigen::VectorXd g = gradient(m, t, s);
            if (std::holds_alternative<GaussianPlume>(m.variant())) g[1] = -g[1];
            return g;
        };
    }

    std::vector<ValidationCheck> checks;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    {
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const PlumeCase c = random_plume_case(rng);
            worst = std::max(worst, relative_error(grad(c.model, c.theta, c.sensor),
                                                   finite_difference_gradient(c.model, c.theta, c.sensor)));
        }
        checks.push_back(make_check("plume gradient vs central differences (100 cases)", worst, 1e-6));
    }
    {
        const MeasurementModel rss(RssModel{1.0});
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const ThetaVector theta{200.0 * u01(rng) - 100.0, 200.0 * u01(rng) - 100.0, 60.0 * u01(rng)};
            const double r = 5.0 + 100.0 * u01(rng);
            const double phi = 2.0 * std::numbers::pi * u01(rng);
            const SensorLocation s{theta[0] + r * std::cos(phi), theta[1] + r * std::sin(phi), 0.0};
            worst = std::max(worst, relative_error(grad(rss, theta, s),
                                                   finite_difference_gradient(rss, theta, s)));
        }
        checks.push_back(make_check("RSS gradient vs central differences (100 cases)", worst, 1e-6));
    }
    {
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            const BinaryNetwork net = moderate_network(rng, 6);
            const ThetaVector theta{10.0 + 2.0 * (u01(rng) - 0.5), 15.0 + 2.0 * (u01(rng) - 0.5)};
            const BinaryMeasurements b = simulate(net, theta, 1000 + static_cast<std::uint64_t>(k));
            const double h = 1e-4;
            Eigen::VectorXd fd(2);
            for (Eigen::Index m = 0; m < 2; ++m) {
                fd[m] = (log_likelihood(b, net, theta.shifted(m, h)) -
                         log_likelihood(b, net, theta.shifted(m, -h))) / (2.0 * h);
            }
            worst = std::max(worst, relative_error(score(b, net, theta), fd));
        }
        checks.push_back(make_check("score vs finite-difference log-likelihood (20 cases)", worst, 1e-5));
    }
    {
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            const BinaryNetwork net = moderate_network(rng, 10);
            const ThetaVector theta{10.0, 15.0};
            double total = 0.0;
            for (unsigned mask = 0; mask < (1U << 10); ++mask) {
                std::vector<std::uint8_t> bits(10);
                for (unsigned i = 0; i < 10; ++i) bits[i] = (mask >> i) & 1U;
                total += std::exp(log_likelihood(BinaryMeasurements(bits), net, theta));
            }
            worst = std::max(worst, std::abs(total - 1.0));
        }
        checks.push_back(make_check("likelihood sums to one over all 2^10 outcomes", worst, 1e-10));
    }
    {
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            const BinaryNetwork net = moderate_network(rng, 8);
            const ThetaVector theta{10.0, 15.0};
            const Eigen::MatrixXd closed = data_information_matrix(net, theta).matrix();
            const Eigen::MatrixXd exact =
                empirical_information_matrix(net, theta, ExpectationMode::Exact).mean.matrix();
            const double scale = std::max(1.0, closed.cwiseAbs().maxCoeff());
            worst = std::max(worst, (closed - exact).cwiseAbs().maxCoeff() / scale);
        }
        checks.push_back(make_check("closed-form information vs exact E[score score^T] (S=8)", worst, 1e-10));
    }
    {
        const NoiseModel unit(1.0);
        const double peak_error = std::abs(rho(unit, 0.0) - 2.0 / std::numbers::pi);
        checks.push_back(make_check("rho(0) = 2/pi", peak_error, 1e-10));
        double worst_ratio = 0.0;
        for (int k = 0; k < 10'000; ++k) {
            const double sigma = std::pow(10.0, 8.0 * u01(rng) - 6.0);
            const NoiseModel n(sigma);
            const double u = sigma * (40.0 * u01(rng) - 20.0);
            worst_ratio = std::max(worst_ratio, rho(n, u) * sigma * sigma);
        }
        checks.push_back(make_check("rho(u) sigma^2 < 1 (10^4 samples)", worst_ratio, 1.0));
        const double tail = std::max(rho(unit, 10.0), rho(unit, -10.0));
        checks.push_back(make_check("rho(+-10 sigma) vanishes", tail, 1e-15));
    }
    return checks;
}

bool all_passed(const std::vector<ValidationCheck>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

void print_validation_report(std::ostream& out, const std::vector<ValidationCheck>& checks) {
    char line[256];
    for (const auto& c : checks) {
        std::snprintf(line, sizeof line, "[%s] %-58s max error %.3e (tolerance %.1e)\n",
                      c.passed ? "PASS" : "FAIL", c.name.c_str(), c.max_error, c.tolerance);
        out << line;
    }
}

}  // namespace bincrb
