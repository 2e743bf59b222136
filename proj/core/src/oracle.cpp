#include "epigeo/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>
#include <vector>

#include "epigeo/rng.hpp"

namespace epigeo {

namespace {

constexpr int kMinCloudSize = 10000;
constexpr long kMinMutualInfoSamples = 100000;
constexpr double kMaxUncoveredFraction = 0.01;
constexpr double kFacingTol = 1e-8;

double ball_volume(int d, double eps) {
    return d == 2 ? std::numbers::pi * eps * eps
                  : 4.0 / 3.0 * std::numbers::pi * eps * eps * eps;
}

/// Uniform cell binning of points at resolution `cell`, for exact
/// fixed-radius neighbor counting in O(points + nodes) at desk scale.
class CellIndex {
public:
    CellIndex(const Eigen::MatrixXd& points, double cell) : points_(points), cell_(cell) {
        for (int k = 0; k < points.cols(); ++k) {
            bins_[key_of(points.col(k))].push_back(k);
        }
    }

    template <typename Visit>
    void for_each_within(const Eigen::VectorXd& center, double radius, Visit&& visit) const {
        const int d = static_cast<int>(points_.rows());
        const double r2 = radius * radius;
        std::array<long, 3> base{};
        for (int axis = 0; axis < d; ++axis) {
            base[axis] = static_cast<long>(std::floor(center(axis) / cell_));
        }
        std::array<long, 3> idx{};
        const int span = 1;  // cell size >= radius, so +/-1 cells suffice
        for (long dx = -span; dx <= span; ++dx) {
            idx[0] = base[0] + dx;
            for (long dy = -span; dy <= span; ++dy) {
                idx[1] = base[1] + dy;
                for (long dz = (d == 3 ? -span : 0); dz <= (d == 3 ? span : 0); ++dz) {
                    idx[2] = base[2] + dz;
                    const auto it = bins_.find(pack(idx));
                    if (it == bins_.end()) continue;
                    for (int k : it->second) {
                        if ((points_.col(k) - center).squaredNorm() <= r2) visit(k);
                    }
                }
            }
        }
    }

private:
    std::uint64_t key_of(const Eigen::VectorXd& p) const {
        const int d = static_cast<int>(p.size());
        std::array<long, 3> idx{};
        for (int axis = 0; axis < d; ++axis) {
            idx[axis] = static_cast<long>(std::floor(p(axis) / cell_));
        }
        return pack(idx);
    }

    static std::uint64_t pack(const std::array<long, 3>& idx) {
        // 21-bit fields per axis; desk-scale grids stay far below that.
        const std::uint64_t mask = (1ULL << 21) - 1;
        std::uint64_t key = 0;
        for (int axis = 0; axis < 3; ++axis) {
            key = (key << 21) | (static_cast<std::uint64_t>(idx[axis] + (1L << 20)) & mask);
        }
        return key;
    }

    const Eigen::MatrixXd& points_;
    double cell_;
    std::unordered_map<std::uint64_t, std::vector<int>> bins_;
};

}  // namespace

SampleCloud::SampleCloud(Eigen::MatrixXd points_, std::uint64_t seed_)
    : points(std::move(points_)), seed(seed_) {
    if (points.rows() != 2 && points.rows() != 3) {
        throw std::invalid_argument("SampleCloud: dimension must be 2 or 3");
    }
    if (points.cols() < kMinCloudSize) {
        throw std::invalid_argument("SampleCloud: needs at least 10^4 points");
    }
}

SampleCloud SampleCloud::from_belief(const GaussianBelief& belief, int n, std::uint64_t seed) {
    return SampleCloud(sample_gaussian(belief.mean, belief.cov, n, seed), seed);
}

long NodeGrid::total_nodes() const {
    long total = 1;
    for (int c : counts) total *= c;
    return total;
}

double NodeGrid::cell_volume() const {
    return std::pow(spacing, static_cast<int>(counts.size()));
}

Eigen::VectorXd NodeGrid::node(long flat_index) const {
    const int d = dim();
    Eigen::VectorXd out(d);
    long rest = flat_index;
    for (int axis = 0; axis < d; ++axis) {
        out(axis) = min_corner(axis) + spacing * double(rest % counts[axis]);
        rest /= counts[axis];
    }
    return out;
}

NodeGrid make_ball_grid(const Eigen::MatrixXd& points,
                        double half_width_sigmas,
                        double spacing) {
    if (!(spacing > 0.0)) throw std::invalid_argument("make_ball_grid: spacing must be > 0");
    const int d = static_cast<int>(points.rows());
    const Eigen::VectorXd mean = points.rowwise().mean();
    const Eigen::MatrixXd centered = points.colwise() - mean;
    const Eigen::VectorXd std =
        (centered.array().square().rowwise().sum() / double(points.cols() - 1)).sqrt();

    NodeGrid grid;
    grid.min_corner = mean - half_width_sigmas * std;
    grid.spacing = spacing;
    grid.counts.resize(d);
    for (int axis = 0; axis < d; ++axis) {
        const double width = 2.0 * half_width_sigmas * std(axis);
        grid.counts[axis] = std::max(2, static_cast<int>(std::floor(width / spacing)) + 1);
    }
    return grid;
}

McEstimate ball_epistemic_value(const SampleCloud& cloud,
                                const Transform& map,
                                double epsilon,
                                const NodeGrid& y_nodes,
                                int batches) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("ball_epistemic_value: epsilon <= 0");
    if (batches < 2) throw std::invalid_argument("ball_epistemic_value: batches < 2");
    const int d = cloud.dim();
    const int n = cloud.size();

    // Fully degenerate cloud: every ball probability is 0 or 1, so the
    // integrand -q ln q vanishes identically.
    if ((cloud.points.colwise() - cloud.points.col(0)).cwiseAbs().maxCoeff() == 0.0) {
        return McEstimate{0.0, 0.0};
    }

    Eigen::MatrixXd mapped(d, n);
    for (int k = 0; k < n; ++k) {
        mapped.col(k) = transform_point(map, cloud.points.col(k));
    }

    const Eigen::VectorXd mean = mapped.rowwise().mean();
    const Eigen::MatrixXd centered = mapped.colwise() - mean;
    const Eigen::VectorXd marginal_std =
        (centered.array().square().rowwise().sum() / double(n - 1)).sqrt();
    if (!(epsilon < 0.5 * marginal_std.minCoeff())) {
        throw std::invalid_argument(
            "ball_epistemic_value: epsilon must be below half the smallest marginal std");
    }

    // Coverage: the grid hull (inflated by half a cell) must catch the cloud.
    long outside = 0;
    for (int k = 0; k < n; ++k) {
        for (int axis = 0; axis < d; ++axis) {
            const double lo = y_nodes.min_corner(axis) - 0.5 * y_nodes.spacing;
            const double hi = y_nodes.min_corner(axis) +
                              y_nodes.spacing * (y_nodes.counts[axis] - 0.5);
            const double v = mapped(axis, k);
            if (v < lo || v > hi) {
                ++outside;
                break;
            }
        }
    }
    if (outside > kMaxUncoveredFraction * n) {
        throw InsufficientCoverageError(
            "ball_epistemic_value: more than 1% of the cloud lies outside the node hull");
    }

    const int batch_size = n / batches;
    const CellIndex index(mapped, epsilon);
    const double norm = y_nodes.cell_volume() / ball_volume(d, epsilon);

    std::vector<double> batch_values(batches, 0.0);
    std::vector<int> counts(batches);
    const long total = y_nodes.total_nodes();
    for (long i = 0; i < total; ++i) {
        const Eigen::VectorXd y = y_nodes.node(i);
        std::fill(counts.begin(), counts.end(), 0);
        index.for_each_within(y, epsilon, [&](int k) {
            const int b = k / batch_size;
            if (b < batches) ++counts[b];
        });
        for (int b = 0; b < batches; ++b) {
            if (counts[b] == 0) continue;  // q ln q -> 0
            const double q = double(counts[b]) / double(batch_size);
            batch_values[b] -= norm * q * std::log(q);
        }
    }

    double value = 0.0;
    for (double v : batch_values) value += v;
    value /= batches;
    double var = 0.0;
    for (double v : batch_values) var += (v - value) * (v - value);
    var /= double(batches - 1);
    return McEstimate{value, std::sqrt(var / batches)};
}

McEstimate mc_mutual_information(const GaussianBelief& belief,
                                 const SensorModel& sensor,
                                 long n,
                                 std::uint64_t seed) {
    if (sensor.kind != SensorKind::GaussianIsotropic) {
        throw std::invalid_argument("mc_mutual_information: requires the Gaussian sensor");
    }
    if (n < kMinMutualInfoSamples) {
        throw std::invalid_argument("mc_mutual_information: needs at least 10^5 samples");
    }
    const int d = belief.dim();
    const double eps = sensor.epsilon;

    // Marginal of Y is N(mu, S + eps^2 I); the joint factors as
    // q(x) * N(y; x, eps^2 I), so the integrand needs only two log-densities.
    const Eigen::MatrixXd obs_cov =
        belief.cov + eps * eps * Eigen::MatrixXd::Identity(d, d);
    const Eigen::LLT<Eigen::MatrixXd> obs_llt(obs_cov);
    const Eigen::MatrixXd obs_chol = obs_llt.matrixL();
    double obs_log_det = 0.0;
    for (int i = 0; i < d; ++i) obs_log_det += 2.0 * std::log(obs_chol(i, i));

    const Eigen::LLT<Eigen::MatrixXd> prior_llt(belief.cov);
    const Eigen::MatrixXd prior_chol = prior_llt.matrixL();

    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    double sum = 0.0, sum_sq = 0.0;
    Eigen::VectorXd z(d), x(d), y(d);
    for (long k = 0; k < n; ++k) {
        for (int i = 0; i < d; ++i) z(i) = normal(gen);
        x = belief.mean + prior_chol * z;
        double noise_sq = 0.0;
        for (int i = 0; i < d; ++i) {
            const double u = normal(gen);
            y(i) = x(i) + eps * u;
            noise_sq += u * u;
        }
        // ln p(y|x) - ln p(y); the d*ln(2 pi)/2 terms cancel.
        const double log_cond = -0.5 * noise_sq - d * std::log(eps);
        const Eigen::VectorXd w = obs_llt.matrixL().solve(y - belief.mean);
        const double log_marginal = -0.5 * w.squaredNorm() - 0.5 * obs_log_det;
        const double s = log_cond - log_marginal;
        sum += s;
        sum_sq += s * s;
    }
    const double mean = sum / double(n);
    const double var = (sum_sq - double(n) * mean * mean) / double(n - 1);
    return McEstimate{mean, std::sqrt(var / double(n))};
}

std::vector<double> frame_jacobian_magnitudes(const std::vector<Frame>& frames,
                                              const Eigen::VectorXd& object,
                                              double gamma) {
    if (frames.empty()) {
        throw std::invalid_argument("frame_jacobian_magnitudes: no frames given");
    }
    const int d = static_cast<int>(object.size());
    for (const auto& frame : frames) {
        const Eigen::VectorXd rep = transform_point(world_to_frame(frame), object);
        if (rep.head(d - 1).cwiseAbs().maxCoeff() > kFacingTol * std::max(1.0, rep.norm())) {
            throw std::invalid_argument("frame_jacobian_magnitudes: a frame does not face the object");
        }
    }
    const GeometryKind kind = GeometryKind::projective(gamma);
    const Eigen::VectorXd anchor =
        perspective_contract(transform_point(world_to_frame(frames[0]), object), gamma);

    std::vector<double> out;
    out.reserve(frames.size());
    for (const auto& frame : frames) {
        const Transform transition = frame_transition(frames[0], frame, kind);
        out.push_back(std::abs(jacobian_det(transition, anchor)));
    }
    return out;
}

}  // namespace epigeo
