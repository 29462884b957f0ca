#include <doctest.h>

#include <cmath>

#include "bincrb/error.hpp"
#include "bincrb/mcmc.hpp"
#include "bincrb/scenario.hpp"

using namespace bincrb;

namespace {

Scenario figure_scenario() {
    return reference::scenario(grid_placement(reference::figure_placement()), reference::kFigureThreshold);
}

McmcConfig small_config(std::uint64_t seed) {
    McmcConfig c;
    c.n_kept = 2000;
    c.n_total = 4000;
    c.rng_seed = seed;
    return c;
}

}  // namespace

TEST_CASE("config validation") {
    McmcConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.n_init == 10);
    CHECK(c.n_kept == 10'000);
    CHECK(c.n_total == 20'000);
    c.n_total = c.n_kept - 1;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = {};
    c.n_init = 0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
}

TEST_CASE("initialization from a point-mass prior returns the truth") {
    const Scenario s = figure_scenario();
    const GaussianPrior point(s.theta_true, Eigen::Vector2d::Constant(1e-30));
    McmcConfig c;
    c.n_init = 1;
    const auto b = simulate(s.network(), s.theta_true, 3);
    const ThetaVector start = initialize(s.network(), point, b, c);
    CHECK(start[0] == doctest::Approx(s.theta_true[0]).epsilon(1e-12));
    CHECK(start[1] == doctest::Approx(s.theta_true[1]).epsilon(1e-12));
}

TEST_CASE("degenerate measurement vectors accept every prior draw") {
    const Scenario s = figure_scenario();
    for (double tau : {1e6, -1e6}) {
        const auto net = s.network(Threshold(tau));
        const auto b = simulate(net, s.theta_true, 1);
        CHECK(b.all_equal());
        McmcConfig one;
        one.n_init = 1;
        one.init_draw_budget = 1;
        one.rng_seed = 8;
        McmcConfig ten = one;
        ten.n_init = 10;
        ten.init_draw_budget = 10;
        // Flat likelihood: all ten draws qualify with equal likelihood, so the first is kept.
        CHECK(initialize(net, s.prior, b, ten) == initialize(net, s.prior, b, one));
    }
}

TEST_CASE("initialization failure is reported") {
    const Scenario s = figure_scenario();
    const auto net = s.network(Threshold(1e6));
    const BinaryMeasurements impossible(std::vector<std::uint8_t>(s.sensors.size(), 1));
    McmcConfig c;
    c.init_draw_budget = 1000;
    CHECK_THROWS_AS(initialize(net, s.prior, impossible, c), InitializationFailure);
}

TEST_CASE("initialization succeeds on the figure scenario") {
    const Scenario s = figure_scenario();
    const auto net = s.network();
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        McmcConfig c;
        c.rng_seed = seed;
        try {
            const ThetaVector start = initialize(net, s.prior, simulate(net, s.theta_true, seed), c);
            CHECK(std::isfinite(start[0]));
            ++ok;
        } catch (const InitializationFailure&) {
        }
    }
    CHECK(ok > 198);
}

TEST_CASE("zero proposal covariance freezes the chain") {
    const Scenario s = figure_scenario();
    McmcConfig c = small_config(4);
    c.proposal_cov = Eigen::Matrix2d::Zero();
    const ThetaVector start{12.0, 13.0};
    const auto res = run_chain(s.network(), s.prior, simulate(s.network(), s.theta_true, 4), c, start);
    CHECK(res.estimate[0] == doctest::Approx(12.0).epsilon(1e-14));
    CHECK(res.estimate[1] == doctest::Approx(13.0).epsilon(1e-14));
    CHECK(res.samples_kept == 2000);
}

TEST_CASE("chain determinism") {
    const Scenario s = figure_scenario();
    const auto b = simulate(s.network(), s.theta_true, 12);
    const auto a = estimate_source(s.network(), s.prior, b, small_config(12));
    const auto r = estimate_source(s.network(), s.prior, b, small_config(12));
    CHECK(a.estimate == r.estimate);
    CHECK(a.acceptance_rate == r.acceptance_rate);
    const auto other = estimate_source(s.network(), s.prior, b, small_config(13));
    CHECK_FALSE(other.estimate == a.estimate);
}

TEST_CASE("acceptance rate is strictly inside (0, 1) on the figure scenario") {
    const Scenario s = figure_scenario();
    McmcConfig c;
    c.rng_seed = 5;
    const auto res = estimate_source(s.network(), s.prior, simulate(s.network(), s.theta_true, 5), c);
    CHECK(res.acceptance_rate > 0.0);
    CHECK(res.acceptance_rate < 1.0);
    CHECK(std::hypot(res.estimate[0] - 10.0, res.estimate[1] - 15.0) < 100.0);
}

TEST_CASE("flat likelihood samples the prior") {
    const Scenario s = figure_scenario();
    const auto net = s.network(Threshold(1e6));
    const auto b = simulate(net, s.theta_true, 0);
    McmcConfig c;
    c.rng_seed = 99;
    c.proposal_cov = 2.0 * s.prior.covariance();
    const auto res = estimate_source(net, s.prior, b, c);
    // Allow an integrated autocorrelation time of 20 samples.
    const double n_eff = static_cast<double>(c.n_kept) / 20.0;
    for (Eigen::Index m = 0; m < 2; ++m) {
        CHECK(std::abs(res.estimate[m] - s.prior.mean()[m]) < 3.0 * 500.0 / std::sqrt(n_eff));
        CHECK(std::abs(res.kept_covariance(m, m) / s.prior.variances()[m] - 1.0) < 0.2);
    }
}

TEST_CASE("default proposal covariance") {
    const Scenario s = figure_scenario();
    const auto net = s.network();
    const auto b = simulate(net, s.theta_true, 1);
    REQUIRE_FALSE(b.all_equal());
    const Eigen::MatrixXd crb =
        posterior_crb(data_information_matrix(net, s.theta_true), prior_information(s.prior));
    CHECK((default_proposal_covariance(net, s.prior, b) - crb).cwiseAbs().maxCoeff() == 0.0);
    const BinaryMeasurements zeros(std::vector<std::uint8_t>(s.sensors.size(), 0));
    CHECK(default_proposal_covariance(net, s.prior, zeros).isApprox(0.01 * s.prior.covariance()));
}
