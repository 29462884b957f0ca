#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bincrb/error.hpp"
#include "bincrb/observation.hpp"
#include "bincrb/scenario.hpp"

using namespace bincrb;

namespace {

const NoiseModel kUnit(1.0);

BinaryNetwork constant_network(std::size_t n, double sigma, double tau) {
    return {MeasurementModel(ConstantModel{}), std::vector<SensorLocation>(n), NoiseModel(sigma), Threshold(tau)};
}

BinaryMeasurements bits_of(unsigned mask, std::size_t n) {
    std::vector<std::uint8_t> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = (mask >> i) & 1U;
    return BinaryMeasurements(b);
}

// Plume network with moderate bit probabilities; sensors scattered downwind.
BinaryNetwork moderate_plume_network(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const MeasurementModel model(GaussianPlume{reference::environment()});
    const ThetaVector theta{10.0, 15.0};
    std::vector<SensorLocation> sensors;
    double mean_level = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = 60.0 + 160.0 * u(rng);
        sensors.push_back({x, 15.0 + (x - 10.0) * 0.2 * (u(rng) - 0.5), 0.0});
        mean_level += concentration(model, theta, sensors.back()) / static_cast<double>(n);
    }
    return {model, std::move(sensors), NoiseModel(0.5 * mean_level), Threshold(mean_level)};
}

}  // namespace

TEST_CASE("gaussian density") {
    CHECK(gauss_pdf(kUnit, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
    CHECK(gauss_pdf(NoiseModel(2.0), 0.0) == doctest::Approx(0.199471140200716339).epsilon(1e-14));
    CHECK(gauss_pdf(kUnit, 1e3) == 0.0);
    CHECK(gauss_pdf(kUnit, -1e3) == 0.0);
    CHECK_THROWS_AS(NoiseModel(0.0), InvalidInput);
    CHECK_THROWS_AS(NoiseModel(-1.0), InvalidInput);
}

TEST_CASE("complementary cdf") {
    CHECK(comp_cdf(kUnit, 0.0) == 0.5);
    // Gaussian tail by 30-digit quadrature.
    CHECK(comp_cdf(kUnit, 1.0) == doctest::Approx(0.158655253931457051).epsilon(1e-14));
    // Deep tails keep relative accuracy (values from a 40-digit erfc).
    CHECK(comp_cdf(kUnit, 20.0) == doctest::Approx(2.7536241186062337e-89).epsilon(1e-12));
    CHECK(comp_cdf(kUnit, 37.0) == doctest::Approx(5.7255712225245768e-300).epsilon(1e-10));
    CHECK(comp_cdf(NoiseModel(3.0), 3.0) == doctest::Approx(0.158655253931457051).epsilon(1e-14));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    double prev = 1.0;
    for (double x = -10.0; x <= 10.0; x += 0.01) {
        const double v = comp_cdf(kUnit, x);
        CHECK(v <= prev);
        prev = v;
    }
    for (int k = 0; k < 200; ++k) {
        const double x = u(rng);
        CHECK(comp_cdf(kUnit, x) + comp_cdf(kUnit, -x) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("upper hazard is continuous across the asymptotic switch") {
    CHECK(upper_hazard(kUnit, 30.0) == doctest::Approx(30.033259667433677).epsilon(1e-13));
    CHECK(upper_hazard(kUnit, 25.0) == doctest::Approx(25.039873012057563).epsilon(1e-12));
    CHECK(upper_hazard(kUnit, 24.999999) == doctest::Approx(upper_hazard(kUnit, 25.000001)).epsilon(1e-6));
    CHECK(std::isfinite(upper_hazard(kUnit, 1e4)));
    CHECK(upper_hazard(kUnit, -1e3) == 0.0);
}

TEST_CASE("rho") {
    CHECK(rho(kUnit, 0.0) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-15));
    CHECK(rho(NoiseModel(1e-4), 0.0) == doctest::Approx(2.0 / (std::numbers::pi * 1e-8)).epsilon(1e-14));
    CHECK(rho(kUnit, 10.0) < 1e-15);
    CHECK(rho(kUnit, -10.0) < 1e-15);
    CHECK(rho(kUnit, 10.0) == doctest::Approx(7.770077433040133e-22).epsilon(1e-10));
    CHECK(rho(kUnit, 1e6) == 0.0);
    CHECK(rho(kUnit, -1e6) == 0.0);

    // Symmetric, below 1/sigma^2, peaked at zero.
    double best_u = 1.0;
    double best = 0.0;
    for (double u = -10.0; u <= 10.0; u += 0.001) {
        const double r = rho(kUnit, u);
        CHECK(r == doctest::Approx(rho(kUnit, -u)).epsilon(1e-12));
        CHECK(r < 1.0);
        if (r > best) {
            best = r;
            best_u = u;
        }
    }
    CHECK(std::abs(best_u) < 1e-9);
}

TEST_CASE("detection probability limits") {
    const MeasurementModel m(ConstantModel{});
    const ThetaVector theta{2.0};
    CHECK(detection_probability(m, theta, {}, kUnit, Threshold(2.0)) == 0.5);
    CHECK(detection_probability(m, theta, {}, kUnit, Threshold(1e6)) == 0.0);
    CHECK(detection_probability(m, theta, {}, kUnit, Threshold(-1e6)) == 1.0);
    CHECK_THROWS_AS(Threshold(std::numeric_limits<double>::infinity()), InvalidInput);
}

TEST_CASE("detection pattern at the figure threshold") {
    const Scenario s = reference::scenario(grid_placement(reference::figure_placement()),
                                           reference::kFigureThreshold);
    const auto net = s.network();
    std::size_t near_one = 0;
    std::size_t near_zero = 0;
    for (const auto& sensor : s.sensors) {
        const double q = detection_probability(net.model, s.theta_true, sensor, net.noise, net.tau);
        if (q > 0.99) ++near_one;
        if (q < 0.01) ++near_zero;
        // Far off the plume axis nothing is detected.
        if (std::abs(sensor.y - s.theta_true[1]) > 50.0) CHECK(q < 1e-6);
    }
    CHECK(near_one >= 1);
    CHECK(near_zero > near_one);
}

TEST_CASE("simulate") {
    const Scenario s = reference::scenario(grid_placement(reference::table_placement(3)), 0.0018);
    const auto net = s.network();
    SUBCASE("determinism") {
        CHECK(simulate(net, s.theta_true, 42) == simulate(net, s.theta_true, 42));
        CHECK(simulate(net, s.theta_true, 42).size() == 49);
    }
    SUBCASE("noise-free limits") {
        // All sensors downwind with positive signal.
        std::vector<SensorLocation> downwind{{60, 15, 0}, {90, 10, 0}, {150, 20, 0}};
        double lo = 1.0;
        double hi = 0.0;
        for (const auto& p : downwind) {
            const double c = concentration(net.model, s.theta_true, p);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        BinaryNetwork below{net.model, downwind, NoiseModel(1e-15), Threshold(0.5 * lo)};
        BinaryNetwork above{net.model, downwind, NoiseModel(1e-15), Threshold(2.0 * hi)};
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            CHECK(simulate(below, s.theta_true, seed) == BinaryMeasurements({1, 1, 1}));
            CHECK(simulate(above, s.theta_true, seed) == BinaryMeasurements({0, 0, 0}));
        }
    }
}

TEST_CASE("simulated bit frequencies match detection probabilities") {
    const Scenario s = reference::scenario(grid_placement(reference::figure_placement()),
                                           reference::kFigureThreshold);
    const auto net = s.network();
    constexpr std::size_t kSeeds = 100'000;
    std::vector<double> ones(s.sensors.size(), 0.0);
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
        const auto b = simulate(net, s.theta_true, seed);
        for (std::size_t i = 0; i < b.size(); ++i) ones[i] += b[i];
    }
    for (std::size_t i = 0; i < s.sensors.size(); ++i) {
        const double q = detection_probability(net.model, s.theta_true, s.sensors[i], net.noise, net.tau);
        const double freq = ones[i] / kSeeds;
        CHECK(std::abs(freq - q) <= 3.0 * std::sqrt(q * (1.0 - q) / kSeeds));
    }
}

TEST_CASE("log-likelihood") {
    const auto one = constant_network(1, 1.0, 0.0);
    CHECK(log_likelihood(BinaryMeasurements({1}), one, ThetaVector{0.0}) ==
          doctest::Approx(std::log(0.5)).epsilon(1e-15));
    const auto two = constant_network(2, 1.0, 0.0);
    for (unsigned mask = 0; mask < 4; ++mask) {
        CHECK(log_likelihood(bits_of(mask, 2), two, ThetaVector{0.0}) == doctest::Approx(2.0 * std::log(0.5)));
    }
    CHECK_THROWS_AS(log_likelihood(BinaryMeasurements({1}), two, ThetaVector{0.0}), InvalidInput);
    CHECK_THROWS_AS(BinaryMeasurements({}), InvalidInput);
    CHECK_THROWS_AS(BinaryMeasurements({2}), InvalidInput);

    // Bits impossible under the model are floored, not -inf.
    const auto far = constant_network(3, 1.0, 1e6);
    const double ll = log_likelihood(BinaryMeasurements({1, 1, 0}), far, ThetaVector{0.0});
    CHECK(std::isfinite(ll));
    CHECK(ll == doctest::Approx(2.0 * std::log(kProbabilityFloor)));
}

TEST_CASE("likelihood normalizes over all outcomes") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {1U, 4U, 7U, 10U}) {
        const auto net = moderate_plume_network(rng, n);
        const ThetaVector theta{11.0, 14.0};
        double total = 0.0;
        for (unsigned mask = 0; mask < (1U << n); ++mask) {
            const double ll = log_likelihood(bits_of(mask, n), net, theta);
            CHECK(ll <= 0.0);
            total += std::exp(ll);
        }
        CHECK(std::abs(total - 1.0) < 1e-10);
    }
}

TEST_CASE("score") {
    // b = 1 everywhere at tau = theta: each sensor contributes f(0)/F(0) = 2/sqrt(2 pi).
    const auto net = constant_network(3, 1.0, 0.5);
    const Eigen::VectorXd s = score(BinaryMeasurements({1, 1, 1}), net, ThetaVector{0.5});
    CHECK(s[0] == doctest::Approx(3.0 * 0.797884560802865356).epsilon(1e-14));
    CHECK(score(BinaryMeasurements({0, 0, 0}), net, ThetaVector{0.5})[0] == doctest::Approx(-s[0]));

    std::mt19937_64 rng(5);
    for (int k = 0; k < 10; ++k) {
        const auto pn = moderate_plume_network(rng, 6);
        const ThetaVector theta{10.5, 14.2};
        const auto b = simulate(pn, theta, static_cast<std::uint64_t>(k));
        const double h = 1e-4;
        Eigen::Vector2d fd;
        for (Eigen::Index m = 0; m < 2; ++m) {
            fd[m] = (log_likelihood(b, pn, theta.shifted(m, h)) - log_likelihood(b, pn, theta.shifted(m, -h))) / (2 * h);
        }
        const Eigen::VectorXd an = score(b, pn, theta);
        CHECK((an - fd).cwiseAbs().maxCoeff() / fd.cwiseAbs().maxCoeff() < 1e-5);
    }
}

TEST_CASE("score has zero mean at the true parameter") {
    std::mt19937_64 rng(9);
    for (std::size_t n : {2U, 5U, 8U}) {
        const auto net = moderate_plume_network(rng, n);
        const ThetaVector theta{10.0, 15.0};
        Eigen::Vector2d mean = Eigen::Vector2d::Zero();
        double scale = 0.0;
        for (unsigned mask = 0; mask < (1U << n); ++mask) {
            const auto b = bits_of(mask, n);
            const Eigen::VectorXd s = score(b, net, theta);
            mean += std::exp(log_likelihood(b, net, theta)) * s;
            scale = std::max(scale, s.cwiseAbs().maxCoeff());
        }
        CHECK(mean.cwiseAbs().maxCoeff() < 1e-12 * scale);
    }
}
