#include "epigeo/pushforward.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "epigeo/rng.hpp"

namespace epigeo {

namespace {

constexpr double kSingularBand = 1e-3;
constexpr double kSingularMassLimit = 1e-6;
constexpr double kRejectionLimit = 1e-3;
constexpr double kCovRegularization = 1e-12;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

GaussianBelief moments_to_belief(const Eigen::VectorXd& mean, Eigen::MatrixXd cov) {
    const auto d = mean.size();
    cov = ((cov + cov.transpose()) / 2.0).eval();
    cov += kCovRegularization * Eigen::MatrixXd::Identity(d, d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= kCovRegularization) {
        throw DegenerateCovarianceError("pushforward: empirical covariance is degenerate");
    }
    return GaussianBelief(mean, cov);
}

GaussianBelief monte_carlo_pushforward(const GaussianBelief& belief,
                                       const HomTransform& map,
                                       const IntegrationConfig& cfg) {
    const int d = belief.dim();
    const int n = cfg.sample_count;
    const Eigen::MatrixXd a = map.matrix.topLeftCorner(d, d);
    const Eigen::VectorXd b = map.matrix.topRightCorner(d, 1);
    const Eigen::RowVectorXd c = map.matrix.bottomLeftCorner(1, d);
    const double e = map.matrix(d, d);

    Eigen::LLT<Eigen::MatrixXd> llt(belief.cov);
    const Eigen::MatrixXd chol = llt.matrixL();
    std::mt19937_64 gen(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    const long max_rejections = std::lround(kRejectionLimit * n) + 1;
    long rejections = 0;
    Eigen::MatrixXd mapped(d, n);
    Eigen::VectorXd z(d), x(d);
    for (int k = 0; k < n; ++k) {
        while (true) {
            for (int i = 0; i < d; ++i) z(i) = normal(gen);
            x = belief.mean + chol * z;
            const double w = c.dot(x) + e;
            if (std::abs(w) > kSingularPlaneTol) {
                mapped.col(k) = (a * x + b) / w;
                break;
            }
            if (++rejections > max_rejections) {
                throw SingularMassError(
                    "pushforward_projective: rejection rate above 0.1% of draws");
            }
        }
    }

    const Eigen::VectorXd mean = mapped.rowwise().mean();
    const Eigen::MatrixXd centered = mapped.colwise() - mean;
    const Eigen::MatrixXd cov = centered * centered.transpose() / double(n - 1);
    return moments_to_belief(mean, cov);
}

GaussianBelief grid_quadrature_pushforward(const GaussianBelief& belief,
                                           const HomTransform& map,
                                           const IntegrationConfig& cfg) {
    const int d = belief.dim();
    const int n = cfg.nodes_per_axis;
    const double hw = cfg.half_width_sigmas;
    const Eigen::MatrixXd a = map.matrix.topLeftCorner(d, d);
    const Eigen::VectorXd b = map.matrix.topRightCorner(d, 1);
    const Eigen::RowVectorXd c = map.matrix.bottomLeftCorner(1, d);
    const double e = map.matrix(d, d);

    Eigen::LLT<Eigen::MatrixXd> llt(belief.cov);
    const Eigen::MatrixXd chol = llt.matrixL();

    // Tensor grid in whitened coordinates over [-hw, hw]^d with Gaussian
    // weights; nodes landing on the singular plane carry negligible
    // weight by the precondition and are dropped with renormalization.
    std::vector<double> ticks(n), tick_weights(n);
    for (int i = 0; i < n; ++i) {
        ticks[i] = -hw + 2.0 * hw * i / double(n - 1);
        tick_weights[i] = std::exp(-0.5 * ticks[i] * ticks[i]);
    }

    const long total = std::lround(std::pow(double(n), d));
    double weight_sum = 0.0;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd u(d), x(d), y(d);
    for (long idx = 0; idx < total; ++idx) {
        long rest = idx;
        double weight = 1.0;
        for (int axis = 0; axis < d; ++axis) {
            const int i = static_cast<int>(rest % n);
            rest /= n;
            u(axis) = ticks[i];
            weight *= tick_weights[i];
        }
        x = belief.mean + chol * u;
        const double w = c.dot(x) + e;
        if (std::abs(w) <= kSingularPlaneTol) continue;
        y = (a * x + b) / w;
        weight_sum += weight;
        mean += weight * y;
        second += weight * y * y.transpose();
    }
    if (weight_sum <= 0.0) {
        throw SingularMassError("pushforward_projective: all quadrature nodes singular");
    }
    mean /= weight_sum;
    const Eigen::MatrixXd cov = second / weight_sum - mean * mean.transpose();
    return moments_to_belief(mean, cov);
}

}  // namespace

void IntegrationConfig::validate() const {
    if (scheme == IntegrationScheme::MonteCarlo) {
        if (sample_count < 1000) {
            throw std::invalid_argument("IntegrationConfig: sample_count must be >= 1000");
        }
    } else {
        if (nodes_per_axis < 9) {
            throw std::invalid_argument("IntegrationConfig: nodes_per_axis must be >= 9");
        }
        if (!(half_width_sigmas > 0.0)) {
            throw std::invalid_argument("IntegrationConfig: half_width_sigmas must be > 0");
        }
    }
}

GaussianBelief pushforward_affine(const GaussianBelief& belief, const AffineMap& map) {
    const Eigen::VectorXd mean = map.linear * belief.mean + map.offset;
    Eigen::MatrixXd cov = map.linear * belief.cov * map.linear.transpose();
    cov = ((cov + cov.transpose()) / 2.0).eval();
    return GaussianBelief(mean, cov);
}

double singular_band_mass(const GaussianBelief& belief, const HomTransform& map, double band) {
    const int d = belief.dim();
    const Eigen::RowVectorXd c = map.matrix.bottomLeftCorner(1, d);
    const double e = map.matrix(d, d);
    // The denominator c.x + e is Gaussian under the belief.
    const double m = c.dot(belief.mean) + e;
    const double var = c * belief.cov * c.transpose();
    const double sd = std::sqrt(std::max(var, 0.0));
    if (sd == 0.0) return std::abs(m) < band ? 1.0 : 0.0;
    return normal_cdf((band - m) / sd) - normal_cdf((-band - m) / sd);
}

GaussianBelief pushforward_projective(const GaussianBelief& belief,
                                      const HomTransform& map,
                                      const IntegrationConfig& cfg) {
    cfg.validate();
    if (belief.dim() != map.dim()) {
        throw std::invalid_argument("pushforward_projective: dimension mismatch");
    }
    if (singular_band_mass(belief, map, kSingularBand) >= kSingularMassLimit) {
        throw SingularMassError(
            "pushforward_projective: belief mass near singular plane exceeds 1e-6");
    }
    if (cfg.scheme == IntegrationScheme::MonteCarlo) {
        return monte_carlo_pushforward(belief, map, cfg);
    }
    return grid_quadrature_pushforward(belief, map, cfg);
}

GaussianBelief pushforward(const GaussianBelief& belief,
                           const Transform& map,
                           const IntegrationConfig& cfg) {
    if (const auto* affine = std::get_if<AffineMap>(&map)) {
        return pushforward_affine(belief, *affine);
    }
    return pushforward_projective(belief, std::get<HomTransform>(map), cfg);
}

}  // namespace epigeo
