#include "bincrb/scenario.hpp"

#include <cmath>
#include <string>

#include "bincrb/error.hpp"

namespace bincrb {

void Scenario::validate() const {
    if (theta_true.dim() != 2) throw InvalidInput("scenario: source must be [x0, y0]");
    environment.validate();
    if (sensors.empty()) throw InvalidInput("scenario: at least one sensor is required");
    for (const auto& s : sensors) {
        if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.z)) {
            throw InvalidInput("scenario: sensor coordinates must be finite");
        }
    }
    if (prior.mean().dim() != 2) throw InvalidInput("scenario: prior must be two-dimensional");
}

BinaryNetwork Scenario::network() const { return network(tau); }

BinaryNetwork Scenario::network(Threshold other_tau) const {
    return BinaryNetwork{MeasurementModel(GaussianPlume{environment}), sensors, noise, other_tau};
}

std::vector<SensorLocation> grid_placement(const PlacementSpec& spec) {
    if (spec.x_coords.empty() || spec.y_coords.empty()) {
        throw InvalidInput("placement: coordinate lists must be non-empty");
    }
    std::vector<SensorLocation> out;
    out.reserve(spec.x_coords.size() * spec.y_coords.size());
    for (double x : spec.x_coords) {
        for (double y : spec.y_coords) out.push_back({x, y, spec.z});
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {lo};
    std::vector<double> v(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) v[i] = lo + step * static_cast<double>(i);
    v.back() = hi;
    return v;
}

namespace reference {

PlumeEnvironment environment() {
    return PlumeEnvironment{.z0 = 5.0, .Q0 = 5.0, .U = 3.5, .sigma_v = 0.5, .sigma_w = 0.2};
}

PlacementSpec table_placement(int index) {
    const std::vector<double> x4{40, 100, 160, 220};
    const std::vector<double> x7{40, 70, 100, 130, 160, 190, 220};
    const std::vector<double> y4{-20, 0, 20, 40};
    switch (index) {
        case 1: return {x4, y4, 0.0};
        case 2: return {x7, y4, 0.0};
        case 3: return {x7, {-20, -10, 0, 10, 20, 30, 40}, 0.0};
        default: throw InvalidInput("placement index must be 1, 2 or 3, got " + std::to_string(index));
    }
}

PlacementSpec figure_placement() {
    return {linspace(kAreaXMin, kAreaXMax, 9), linspace(kAreaYMin, kAreaYMax, 3), 0.0};
}

PlacementSpec dense_placement() {
    return {linspace(kAreaXMin, kAreaXMax, 200), linspace(kAreaYMin, kAreaYMax, 50), 0.0};
}

Scenario scenario(std::vector<SensorLocation> sensors, double tau) {
    const ThetaVector truth{kSourceX, kSourceY};
    Scenario s{truth,
               environment(),
               NoiseModel(kNoiseSigma),
               Threshold(tau),
               std::move(sensors),
               GaussianPrior(truth, Eigen::Vector2d::Constant(kPriorStd * kPriorStd))};
    s.validate();
    return s;
}

}  // namespace reference

}  // namespace bincrb
