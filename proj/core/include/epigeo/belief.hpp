#pragma once

#include <utility>

#include <Eigen/Dense>

#include "epigeo/errors.hpp"

namespace epigeo {

/// Gaussian belief over the internal world model.
struct GaussianBelief {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;  // symmetric positive definite

    GaussianBelief(Eigen::VectorXd mean_, Eigen::MatrixXd cov_);

    int dim() const { return static_cast<int>(mean.size()); }

    /// Isotropic belief N(mean, sigma^2 I).
    static GaussianBelief isotropic(const Eigen::VectorXd& mean, double sigma);
};

enum class SensorKind { GaussianIsotropic, UniformBall };

/// Observation-noise model. The Gaussian kind is N(x, epsilon^2 I) and
/// drives the main pipeline; the uniform-ball kind (density constant on
/// the epsilon-ball around x) is consumed only by the oracle checks.
struct SensorModel {
    SensorKind kind = SensorKind::GaussianIsotropic;
    double epsilon = 0.1;

    static SensorModel gaussian(double epsilon);
    static SensorModel uniform_ball(double epsilon);
};

/// Posterior belief after observing `obs` through an isotropic Gaussian
/// sensor:  N(mu + S(S+e^2 I)^-1 (obs-mu),  S - S(S+e^2 I)^-1 S),
/// re-symmetrized. Throws NotPositiveDefiniteError if the update breaks
/// the covariance invariants (numerical breakdown).
GaussianBelief condition(const GaussianBelief& belief,
                         const SensorModel& sensor,
                         const Eigen::VectorXd& obs);

/// Mutual information between latent state and observation under the
/// isotropic Gaussian sensor: 1/2 ln det(I + S/e^2), computed via
/// Cholesky. Nonnegative for any valid belief.
double epistemic_value(const GaussianBelief& belief, const SensorModel& sensor);

/// Joint moments of (X, Y): mean (mu, mu) and covariance
/// [[S, S], [S, S + e^2 I]]. Exposed for tests and the oracle checks.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> joint_moments(const GaussianBelief& belief,
                                                          const SensorModel& sensor);

}  // namespace epigeo
