#pragma once

#include <vector>

#include "bincrb/dispersion.hpp"
#include "bincrb/information.hpp"
#include "bincrb/observation.hpp"

namespace bincrb {

/// Plume localization experiment: truth, environment, sensors and prior.
struct Scenario {
    ThetaVector theta_true;
    PlumeEnvironment environment;
    NoiseModel noise;
    Threshold tau;
    std::vector<SensorLocation> sensors;
    GaussianPrior prior;

    /// Throws InvalidInput when any invariant fails.
    void validate() const;

    BinaryNetwork network() const;
    BinaryNetwork network(Threshold other_tau) const;
};

/// Axis-aligned sensor grid; S = |x_coords| * |y_coords|.
struct PlacementSpec {
    std::vector<double> x_coords;
    std::vector<double> y_coords;
    double z = 0.0;
};

/// Cartesian product, x outer and y inner.
std::vector<SensorLocation> grid_placement(const PlacementSpec& spec);

/// `count` evenly spaced values covering [lo, hi], both ends included.
std::vector<double> linspace(double lo, double hi, std::size_t count);

namespace reference {

// Source, environment, noise and prior of the biochemical localization study.
inline constexpr double kSourceX = 10.0;
inline constexpr double kSourceY = 15.0;
inline constexpr double kNoiseSigma = 1e-4;        // g/m^3
inline constexpr double kPriorStd = 500.0;         // m, per coordinate
inline constexpr double kTableThreshold = 0.0018;  // g/m^3
inline constexpr double kFigureThreshold = 0.0024;

// Sensor rectangle, lower-left and upper-right corners.
inline constexpr double kAreaXMin = 30.0;
inline constexpr double kAreaYMin = -40.0;
inline constexpr double kAreaXMax = 240.0;
inline constexpr double kAreaYMax = 50.0;

PlumeEnvironment environment();

/// Table placements 1, 2 and 3 (16, 28 and 49 sensors). Nested: 1 in 2 in 3.
PlacementSpec table_placement(int index);

/// 27 sensors, 9 x 3 grid spanning the sensor rectangle.
PlacementSpec figure_placement();

/// 200 x 50 grid spanning the sensor rectangle.
PlacementSpec dense_placement();

Scenario scenario(std::vector<SensorLocation> sensors, double tau);

}  // namespace reference

}  // namespace bincrb
