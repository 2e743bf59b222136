#include "epigeo/belief.hpp"

#include <cmath>

namespace epigeo {

namespace {

constexpr double kSymmetryTol = 1e-10;
constexpr double kMinEigenvalue = 1e-12;

double min_eigenvalue(const Eigen::MatrixXd& sym) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace

GaussianBelief::GaussianBelief(Eigen::VectorXd mean_, Eigen::MatrixXd cov_)
    : mean(std::move(mean_)), cov(std::move(cov_)) {
    const auto d = mean.size();
    if (cov.rows() != d || cov.cols() != d) {
        throw std::invalid_argument("GaussianBelief: covariance shape does not match mean");
    }
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() >= kSymmetryTol) {
        throw std::invalid_argument("GaussianBelief: covariance is not symmetric");
    }
    if (min_eigenvalue(cov) <= kMinEigenvalue) {
        throw std::invalid_argument("GaussianBelief: covariance is not positive definite");
    }
}

GaussianBelief GaussianBelief::isotropic(const Eigen::VectorXd& mean, double sigma) {
    const auto d = mean.size();
    return GaussianBelief(mean, sigma * sigma * Eigen::MatrixXd::Identity(d, d));
}

SensorModel SensorModel::gaussian(double epsilon) {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("SensorModel: epsilon must be strictly positive");
    }
    return SensorModel{SensorKind::GaussianIsotropic, epsilon};
}

SensorModel SensorModel::uniform_ball(double epsilon) {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("SensorModel: epsilon must be strictly positive");
    }
    return SensorModel{SensorKind::UniformBall, epsilon};
}

GaussianBelief condition(const GaussianBelief& belief,
                         const SensorModel& sensor,
                         const Eigen::VectorXd& obs) {
    if (sensor.kind != SensorKind::GaussianIsotropic) {
        throw std::invalid_argument("condition: requires the Gaussian sensor model");
    }
    if (obs.size() != belief.mean.size()) {
        throw std::invalid_argument("condition: observation dimension mismatch");
    }
    const auto d = belief.mean.size();
    const double e2 = sensor.epsilon * sensor.epsilon;
    const Eigen::MatrixXd obs_cov =
        belief.cov + e2 * Eigen::MatrixXd::Identity(d, d);
    Eigen::LLT<Eigen::MatrixXd> llt(obs_cov);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefiniteError("condition: observation covariance not PD");
    }
    // gain = S (S + e^2 I)^-1, computed as the solve against S.
    const Eigen::MatrixXd gain = llt.solve(belief.cov).transpose();
    const Eigen::VectorXd mean = belief.mean + gain * (obs - belief.mean);
    Eigen::MatrixXd cov = belief.cov - gain * belief.cov;
    cov = ((cov + cov.transpose()) / 2.0).eval();
    if (min_eigenvalue(cov) <= kMinEigenvalue) {
        throw NotPositiveDefiniteError("condition: posterior covariance not PD");
    }
    return GaussianBelief(mean, cov);
}

double epistemic_value(const GaussianBelief& belief, const SensorModel& sensor) {
    if (sensor.kind != SensorKind::GaussianIsotropic) {
        throw std::invalid_argument("epistemic_value: requires the Gaussian sensor model");
    }
    const auto d = belief.mean.size();
    const double e2 = sensor.epsilon * sensor.epsilon;
    const Eigen::MatrixXd m =
        Eigen::MatrixXd::Identity(d, d) + belief.cov / e2;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefiniteError("epistemic_value: I + S/e^2 not PD");
    }
    const Eigen::MatrixXd chol = llt.matrixL();
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) log_det += std::log(chol(i, i));
    return log_det;  // 1/2 * (2 * sum log diag)
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> joint_moments(const GaussianBelief& belief,
                                                          const SensorModel& sensor) {
    if (sensor.kind != SensorKind::GaussianIsotropic) {
        throw std::invalid_argument("joint_moments: requires the Gaussian sensor model");
    }
    const auto d = belief.mean.size();
    const double e2 = sensor.epsilon * sensor.epsilon;
    Eigen::VectorXd mean(2 * d);
    mean.head(d) = belief.mean;
    mean.tail(d) = belief.mean;
    Eigen::MatrixXd cov(2 * d, 2 * d);
    cov.topLeftCorner(d, d) = belief.cov;
    cov.topRightCorner(d, d) = belief.cov;
    cov.bottomLeftCorner(d, d) = belief.cov;
    cov.bottomRightCorner(d, d) = belief.cov + e2 * Eigen::MatrixXd::Identity(d, d);
    return {mean, cov};
}

}  // namespace epigeo
