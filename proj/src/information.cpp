#include "bincrb/information.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "bincrb/error.hpp"

namespace bincrb {

namespace {

constexpr double kSymmetryTol = 1e-12;

// Per-sensor pieces shared by the score of every outcome.
struct SensorScoreTerms {
    double q;                // P(b_i = 1)
    double q_complement;     // P(b_i = 0)
    Eigen::VectorXd if_one;  // score contribution when b_i = 1
    Eigen::VectorXd if_zero;
};

std::vector<SensorScoreTerms> score_terms(const BinaryNetwork& net, const ThetaVector& theta) {
    std::vector<SensorScoreTerms> terms;
    terms.reserve(net.sensors.size());
    for (const auto& s : net.sensors) {
        const double u = net.tau.value() - concentration(net.model, theta, s);
        const Eigen::VectorXd g = gradient(net.model, theta, s);
        SensorScoreTerms t{comp_cdf(net.noise, u), comp_cdf(net.noise, -u),
                           Eigen::VectorXd::Zero(theta.dim()), Eigen::VectorXd::Zero(theta.dim())};
        if (t.q >= kProbabilityFloor) t.if_one = upper_hazard(net.noise, u) * g;
        if (t.q_complement >= kProbabilityFloor) t.if_zero = -upper_hazard(net.noise, -u) * g;
        terms.push_back(std::move(t));
    }
    return terms;
}

}  // namespace

bool is_positive_semidefinite(const Eigen::MatrixXd& a, double tol) {
    if (a.rows() != a.cols()) return false;
    if (a.size() == 0) return true;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = r + 1; c < a.cols(); ++c) {
            if (std::abs(a(r, c) - a(c, r)) >= kSymmetryTol * (1.0 + std::abs(a(r, c)))) return false;
        }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    return ev.minCoeff() >= -tol * scale;
}

InfoMatrix::InfoMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
        throw InvalidInput("information matrix must be square and non-empty");
    }
    if (!entries_.allFinite()) throw NumericalError("information matrix has non-finite entries");
    if (!is_positive_semidefinite(entries_)) {
        throw InvalidInput("information matrix must be symmetric positive semidefinite");
    }
}

InfoMatrix InfoMatrix::zero(Eigen::Index dim) { return InfoMatrix(Eigen::MatrixXd::Zero(dim, dim)); }

InfoMatrix InfoMatrix::operator+(const InfoMatrix& other) const {
    if (dim() != other.dim()) throw InvalidInput("information matrix dimensions differ");
    return InfoMatrix(entries_ + other.entries_);
}

GaussianPrior::GaussianPrior(ThetaVector mean, Eigen::VectorXd variances)
    : mean_(std::move(mean)), variances_(std::move(variances)) {
    if (variances_.size() != mean_.dim()) {
        throw InvalidInput("prior variances must match the parameter dimension");
    }
    if (!variances_.allFinite() || (variances_.array() <= 0.0).any()) {
        throw InvalidInput("prior variances must be finite and > 0");
    }
}

double GaussianPrior::log_density(const ThetaVector& theta) const {
    const Eigen::VectorXd d = theta.values() - mean_.values();
    return -0.5 * (d.array().square() / variances_.array()).sum();
}

InfoMatrix data_information_matrix(const BinaryNetwork& net, const ThetaVector& theta) {
    net.model.check_theta(theta);
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(theta.dim(), theta.dim());
    for (const auto& s : net.sensors) {
        const Eigen::VectorXd g = gradient(net.model, theta, s);
        if (g.isZero(0.0)) continue;
        const double w = rho(net.noise, net.tau.value() - concentration(net.model, theta, s));
        if (w == 0.0) continue;
        j.noalias() += w * g * g.transpose();
    }
    return InfoMatrix(std::move(j));
}

InfoMatrix analog_information_matrix(const BinaryNetwork& net, const ThetaVector& theta) {
    net.model.check_theta(theta);
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(theta.dim(), theta.dim());
    for (const auto& s : net.sensors) {
        const Eigen::VectorXd g = gradient(net.model, theta, s);
        j.noalias() += g * g.transpose();
    }
    const double var = net.noise.sigma() * net.noise.sigma();
    return InfoMatrix(j / var);
}

InfoMatrix prior_information(const GaussianPrior& prior) {
    return InfoMatrix(prior.variances().cwiseInverse().asDiagonal());
}

Eigen::MatrixXd posterior_crb(const InfoMatrix& jd, const InfoMatrix& jp) {
    const Eigen::MatrixXd j = (jd + jp).matrix();
    if (j.rows() == 2) {
        const double det = j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0);
        if (!(det > 0.0) || !std::isfinite(det)) {
            throw NumericalError("posterior information matrix is singular");
        }
        Eigen::Matrix2d inv;
        inv << j(1, 1), -j(0, 1), -j(1, 0), j(0, 0);
        return inv / det;
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(j);
    if (llt.info() != Eigen::Success) throw NumericalError("posterior information matrix is singular");
    return llt.solve(Eigen::MatrixXd::Identity(j.rows(), j.cols()));
}

double localization_sigma(const Eigen::MatrixXd& crb) {
    const double tr = crb.trace();
    if (!(tr >= 0.0)) throw InvalidInput("covariance bound has negative or undefined trace");
    return std::sqrt(tr);
}

EmpiricalInformation empirical_information_matrix(const BinaryNetwork& net,
                                                  const ThetaVector& theta_true,
                                                  ExpectationMode mode, std::size_t n_samples,
                                                  std::uint64_t seed) {
    net.model.check_theta(theta_true);
    const auto terms = score_terms(net, theta_true);
    const std::size_t n_sensors = terms.size();
    const Eigen::Index m = theta_true.dim();

    if (mode == ExpectationMode::Exact) {
        if (n_sensors > kMaxExactSensors) {
            throw InvalidInput("exact enumeration supports at most " +
                               std::to_string(kMaxExactSensors) + " sensors");
        }
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
        const std::size_t n_outcomes = std::size_t{1} << n_sensors;
        for (std::size_t mask = 0; mask < n_outcomes; ++mask) {
            double p = 1.0;
            Eigen::VectorXd s = Eigen::VectorXd::Zero(m);
            for (std::size_t i = 0; i < n_sensors; ++i) {
                if ((mask >> i) & 1U) {
                    p *= terms[i].q;
                    s += terms[i].if_one;
                } else {
                    p *= terms[i].q_complement;
                    s += terms[i].if_zero;
                }
            }
            if (p == 0.0) continue;
            acc.noalias() += p * s * s.transpose();
        }
        return {InfoMatrix(std::move(acc)), Eigen::MatrixXd::Zero(m, m), n_outcomes};
    }

    if (n_samples < kMinEmpiricalSamples) {
        throw InvalidInput("sampling mode needs at least " + std::to_string(kMinEmpiricalSamples) +
                           " samples");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t k = 0; k < n_samples; ++k) {
        Eigen::VectorXd s = Eigen::VectorXd::Zero(m);
        for (const auto& t : terms) s += uniform(rng) < t.q ? t.if_one : t.if_zero;
        const Eigen::MatrixXd outer = s * s.transpose();
        sum += outer;
        sum_sq += outer.cwiseProduct(outer);
    }
    const double n = static_cast<double>(n_samples);
    Eigen::MatrixXd mean = sum / n;
    const Eigen::MatrixXd var = (sum_sq / n - mean.cwiseProduct(mean)) * (n / (n - 1.0));
    Eigen::MatrixXd se = (var.cwiseMax(0.0) / n).cwiseSqrt();
    return {InfoMatrix(std::move(mean)), std::move(se), n_samples};
}

}  // namespace bincrb
