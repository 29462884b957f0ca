#pragma once

#include <initializer_list>
#include <variant>

#include <Eigen/Dense>

namespace bincrb {

/// Unknown parameter vector. For the plume model this is [x0, y0] in metres,
/// for the RSS model [x0, y0, Q0], for the constant model [theta].
class ThetaVector {
public:
    explicit ThetaVector(Eigen::VectorXd values);
    ThetaVector(std::initializer_list<double> values);

    Eigen::Index dim() const noexcept { return values_.size(); }
    double operator[](Eigen::Index i) const { return values_[i]; }
    const Eigen::VectorXd& values() const noexcept { return values_; }

    /// Copy with component `i` shifted by `delta`.
    ThetaVector shifted(Eigen::Index i, double delta) const;

    bool operator==(const ThetaVector& other) const { return values_ == other.values_; }

private:
    Eigen::VectorXd values_;
};

struct PlumeEnvironment {
    double z0 = 5.0;       // source height, m
    double Q0 = 5.0;       // release rate, g/s
    double U = 3.5;        // mean wind speed along +x, m/s
    double sigma_v = 0.5;  // crosswind spread rate, m/s
    double sigma_w = 0.2;  // vertical spread rate, m/s

    void validate() const;
};

struct SensorLocation {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Steady-state Gaussian plume with ground reflection, wind along +x.
/// Sensors at or upwind of the source see exactly zero.
struct GaussianPlume {
    PlumeEnvironment env;
};

/// Log-distance path loss: C = Q0 - 20 log10(d / d0), theta = [x0, y0, Q0].
struct RssModel {
    double d0 = 1.0;
};

/// C(theta) = theta, M = 1.
struct ConstantModel {};

class MeasurementModel {
public:
    using Variant = std::variant<GaussianPlume, RssModel, ConstantModel>;

    MeasurementModel(GaussianPlume m);
    MeasurementModel(RssModel m);
    MeasurementModel(ConstantModel m);

    const Variant& variant() const noexcept { return model_; }

    /// Dimension of the parameter vector this model expects.
    Eigen::Index parameter_dim() const noexcept;

    /// Throws InvalidInput unless `theta` has the right dimension and is finite.
    void check_theta(const ThetaVector& theta) const;

private:
    Variant model_;
};

/// Noise-free signal C_i(theta) at `sensor`.
double concentration(const MeasurementModel& model, const ThetaVector& theta,
                     const SensorLocation& sensor);

/// Analytic partials dC_i/dtheta_m.
Eigen::VectorXd gradient(const MeasurementModel& model, const ThetaVector& theta,
                         const SensorLocation& sensor);

/// Central-difference partials; reference for `gradient`.
/// Throws InvalidInput if a perturbation crosses the plume's upwind boundary.
Eigen::VectorXd finite_difference_gradient(const MeasurementModel& model, const ThetaVector& theta,
                                           const SensorLocation& sensor, double step = 1e-4);

}  // namespace bincrb
