#pragma once

#include <cstdint>
#include <vector>

#include "epigeo/belief.hpp"
#include "epigeo/geometry.hpp"

namespace epigeo {

/// Empirical stand-in for a belief: equal-weight sample points, one per
/// column. At least 10^4 points are required.
struct SampleCloud {
    Eigen::MatrixXd points;  // d x N
    std::uint64_t seed = 0;

    SampleCloud(Eigen::MatrixXd points_, std::uint64_t seed_);

    int dim() const { return static_cast<int>(points.rows()); }
    int size() const { return static_cast<int>(points.cols()); }

    /// Draws N points from the belief.
    static SampleCloud from_belief(const GaussianBelief& belief, int n, std::uint64_t seed);
};

/// Regular axis-aligned node grid used to discretize integrals over
/// observation space; cell_volume is spacing^d.
struct NodeGrid {
    Eigen::VectorXd min_corner;
    double spacing = 0.0;
    std::vector<int> counts;  // nodes per axis

    int dim() const { return static_cast<int>(min_corner.size()); }
    long total_nodes() const;
    double cell_volume() const;
    Eigen::VectorXd node(long flat_index) const;
};

/// Grid covering mean +/- half_width_sigmas marginal stds of the given
/// points, with the given node spacing.
NodeGrid make_ball_grid(const Eigen::MatrixXd& points,
                        double half_width_sigmas,
                        double spacing);

/// Monte-Carlo estimate with its standard error.
struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Epistemic value of the mapped cloud under the uniform-ball sensor:
/// the ball-probability field q(y) = Q(psi^-1 B_y^eps) is estimated as
/// the fraction of mapped sample points inside each ball, and
/// -q ln q is integrated over the node grid, normalized by the
/// eps-ball volume of the ambient dimension. The estimate and its
/// standard error come from `batches` equal splits of the cloud.
///
/// Preconditions: eps < 0.5 * smallest marginal std of the mapped cloud
/// (std::invalid_argument otherwise); at most 1% of the mapped cloud may
/// fall outside the grid hull (InsufficientCoverageError otherwise).
McEstimate ball_epistemic_value(const SampleCloud& cloud,
                                const Transform& map,
                                double epsilon,
                                const NodeGrid& y_nodes,
                                int batches = 10);

/// Monte-Carlo mutual information between X ~ belief and Y = X + noise
/// under the isotropic Gaussian sensor, by averaging
/// ln p(x,y) - ln p(y) - ln q(x) over n >= 10^5 joint samples.
McEstimate mc_mutual_information(const GaussianBelief& belief,
                                 const SensorModel& sensor,
                                 long n,
                                 std::uint64_t seed);

/// |det| of the differential, at the object's internal coordinate, of
/// the projective transition from frames[0] to each frame in the list.
/// All frames must face the object. Ranking these magnitudes reproduces
/// the ranking by negative distance to the object.
std::vector<double> frame_jacobian_magnitudes(const std::vector<Frame>& frames,
                                              const Eigen::VectorXd& object,
                                              double gamma);

}  // namespace epigeo
