#include "bincrb/dispersion.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bincrb/error.hpp"

namespace bincrb {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double checked(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw NumericalError(std::string(what) + " is not finite; scenario is invalid");
    }
    return value;
}

// Quantities shared by the plume value and its gradient at one sensor.
struct PlumeTerms {
    double sigma_y;
    double sigma_z;
    double dy;        // y_i - y0
    double envelope;  // exp(-z0^2 / 2 sz^2) * exp(-dy^2 / 2 sy^2)
};

PlumeTerms plume_terms(const PlumeEnvironment& env, const ThetaVector& theta,
                       const SensorLocation& s) {
    const double downwind = s.x - theta[0];
    PlumeTerms t{};
    t.sigma_y = env.sigma_v * downwind / env.U;
    t.sigma_z = env.sigma_w * downwind / env.U;
    t.dy = s.y - theta[1];
    t.envelope = std::exp(-env.z0 * env.z0 / (2.0 * t.sigma_z * t.sigma_z)) *
                 std::exp(-t.dy * t.dy / (2.0 * t.sigma_y * t.sigma_y));
    return t;
}

double rss_distance(const ThetaVector& theta, const SensorLocation& s) {
    const double d = std::hypot(s.x - theta[0], s.y - theta[1]);
    if (d == 0.0) {
        throw InvalidInput("RSS model: sensor coincides with the source (log singularity)");
    }
    return d;
}

constexpr double kDbPerNeper = 20.0 / std::numbers::ln10;

}  // namespace

ThetaVector::ThetaVector(Eigen::VectorXd values) : values_(std::move(values)) {
    if (values_.size() < 1) throw InvalidInput("parameter vector must have dimension >= 1");
    if (!values_.allFinite()) throw InvalidInput("parameter vector has non-finite entries");
}

ThetaVector::ThetaVector(std::initializer_list<double> values)
    : ThetaVector(Eigen::Map<const Eigen::VectorXd>(values.begin(),
                                                    static_cast<Eigen::Index>(values.size()))) {}

ThetaVector ThetaVector::shifted(Eigen::Index i, double delta) const {
    Eigen::VectorXd v = values_;
    v[i] += delta;
    return ThetaVector(std::move(v));
}

void PlumeEnvironment::validate() const {
    if (!(U > 0.0)) throw InvalidInput("plume environment: U must be > 0");
    if (!(Q0 > 0.0)) throw InvalidInput("plume environment: Q0 must be > 0");
    if (!(sigma_v > 0.0)) throw InvalidInput("plume environment: sigma_v must be > 0");
    if (!(sigma_w > 0.0)) throw InvalidInput("plume environment: sigma_w must be > 0");
    if (!(z0 >= 0.0)) throw InvalidInput("plume environment: z0 must be >= 0");
    if (!std::isfinite(U) || !std::isfinite(Q0) || !std::isfinite(sigma_v) || !std::isfinite(sigma_w) ||
        !std::isfinite(z0)) {
        throw InvalidInput("plume environment: parameters must be finite");
    }
}

MeasurementModel::MeasurementModel(GaussianPlume m) : model_(m) { m.env.validate(); }

MeasurementModel::MeasurementModel(RssModel m) : model_(m) {
    if (!(m.d0 > 0.0) || !std::isfinite(m.d0)) throw InvalidInput("RSS model: d0 must be > 0");
}

MeasurementModel::MeasurementModel(ConstantModel m) : model_(m) {}

Eigen::Index MeasurementModel::parameter_dim() const noexcept {
    return std::visit(Overloaded{[](const GaussianPlume&) -> Eigen::Index { return 2; },
                                 [](const RssModel&) -> Eigen::Index { return 3; },
                                 [](const ConstantModel&) -> Eigen::Index { return 1; }},
                      model_);
}

void MeasurementModel::check_theta(const ThetaVector& theta) const {
    if (theta.dim() != parameter_dim()) {
        throw InvalidInput("parameter vector has dimension " + std::to_string(theta.dim()) +
                           ", model expects " + std::to_string(parameter_dim()));
    }
}

double concentration(const MeasurementModel& model, const ThetaVector& theta,
                     const SensorLocation& sensor) {
    model.check_theta(theta);
    return std::visit(
        Overloaded{
            [&](const GaussianPlume& p) {
                if (sensor.x <= theta[0]) return 0.0;
                const auto& env = p.env;
                const PlumeTerms t = plume_terms(env, theta, sensor);
                return checked(
                    env.Q0 / (std::numbers::pi * t.sigma_y * t.sigma_z * env.U) * t.envelope,
                    "plume concentration");
            },
            [&](const RssModel& r) {
                const double d = rss_distance(theta, sensor);
                return checked(theta[2] - 20.0 * std::log10(d / r.d0), "RSS level");
            },
            [&](const ConstantModel&) { return theta[0]; }},
        model.variant());
}

Eigen::VectorXd gradient(const MeasurementModel& model, const ThetaVector& theta,
                         const SensorLocation& sensor) {
    model.check_theta(theta);
    return std::visit(
        Overloaded{
            [&](const GaussianPlume& p) -> Eigen::VectorXd {
                Eigen::VectorXd g = Eigen::VectorXd::Zero(2);
                if (sensor.x <= theta[0]) return g;
                const auto& env = p.env;
                const PlumeTerms t = plume_terms(env, theta, sensor);
                const double sy = t.sigma_y;
                const double sz = t.sigma_z;
                const double pi = std::numbers::pi;
                // dC/dx0 = alpha + beta + gamma
                const double alpha =
                    env.Q0 * env.sigma_w * t.envelope / (pi * env.U * env.U * sy * sz * sz);
                const double beta =
                    env.Q0 * env.sigma_v * t.envelope / (pi * env.U * env.U * sy * sy * sz);
                const double gamma =
                    env.Q0 * t.envelope / (pi * env.U * sy * sz) *
                    (-t.dy * t.dy * env.sigma_v / (env.U * sy * sy * sy) -
                     env.z0 * env.z0 * env.sigma_w / (env.U * sz * sz * sz));
                g[0] = checked(alpha + beta + gamma, "plume gradient dC/dx0");
                g[1] = checked(env.Q0 * t.dy * t.envelope / (pi * env.U * sy * sy * sy * sz),
                               "plume gradient dC/dy0");
                return g;
            },
            [&](const RssModel&) -> Eigen::VectorXd {
                const double d = rss_distance(theta, sensor);
                Eigen::VectorXd g(3);
                g[0] = kDbPerNeper * (sensor.x - theta[0]) / (d * d);
                g[1] = kDbPerNeper * (sensor.y - theta[1]) / (d * d);
                g[2] = 1.0;
                return g;
            },
            [&](const ConstantModel&) -> Eigen::VectorXd { return Eigen::VectorXd::Ones(1); }},
        model.variant());
}

Eigen::VectorXd finite_difference_gradient(const MeasurementModel& model, const ThetaVector& theta,
                                           const SensorLocation& sensor, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw InvalidInput("finite difference step must be > 0");
    model.check_theta(theta);
    if (std::holds_alternative<GaussianPlume>(model.variant())) {
        const bool lo = sensor.x > theta[0] - step;
        const bool hi = sensor.x > theta[0] + step;
        if (lo != hi) {
            throw InvalidInput("finite difference stencil crosses the plume's upwind boundary");
        }
    }
    Eigen::VectorXd g(theta.dim());
    for (Eigen::Index m = 0; m < theta.dim(); ++m) {
        const double plus = concentration(model, theta.shifted(m, step), sensor);
        const double minus = concentration(model, theta.shifted(m, -step), sensor);
        g[m] = (plus - minus) / (2.0 * step);
    }
    return g;
}

}  // namespace bincrb
