#pragma once

#include <variant>

#include <Eigen/Dense>

#include "epigeo/errors.hpp"

namespace epigeo {

/// Tolerance below which a homogenized denominator counts as singular.
inline constexpr double kSingularPlaneTol = 1e-9;

/// A rigid reference frame in the ambient world: an origin plus a
/// right-handed orthonormal basis. The last basis column is the depth
/// axis (the direction the frame "looks" along); internal-model depth
/// is measured along it.
struct Frame {
    Eigen::VectorXd origin;  // world units
    Eigen::MatrixXd basis;   // columns are unit axes, det = +1

    Frame(Eigen::VectorXd origin_, Eigen::MatrixXd basis_);

    int dim() const { return static_cast<int>(origin.size()); }

    /// The identity frame: origin 0, canonical axes.
    static Frame identity(int dim);
};

/// Invertible affine map x -> linear*x + offset.
struct AffineMap {
    Eigen::MatrixXd linear;
    Eigen::VectorXd offset;

    AffineMap(Eigen::MatrixXd linear_, Eigen::VectorXd offset_);

    int dim() const { return static_cast<int>(offset.size()); }

    Eigen::VectorXd operator()(const Eigen::VectorXd& p) const { return linear * p + offset; }

    AffineMap inverse() const;

    static AffineMap identity(int dim);
};

/// Projective transform held as a (d+1)x(d+1) homogeneous matrix,
/// meaningful only up to nonzero scale. The stored representative is
/// canonical: the first entry of largest absolute value (row-major
/// order) is scaled to exactly +1, which makes scale-quotient equality
/// an ordinary matrix comparison.
struct HomTransform {
    Eigen::MatrixXd matrix;

    explicit HomTransform(Eigen::MatrixXd m);

    /// Ambient dimension d (matrix is (d+1)x(d+1)).
    int dim() const { return static_cast<int>(matrix.rows()) - 1; }

    HomTransform inverse() const;

    static HomTransform identity(int dim);
};

/// Compose two affine maps (f after g).
AffineMap compose(const AffineMap& f, const AffineMap& g);

/// Compose two projective transforms (f after g); result is canonicalized.
HomTransform compose(const HomTransform& f, const HomTransform& g);

/// Lift an affine map to its homogeneous representative.
HomTransform to_homogeneous(const AffineMap& map);

enum class GeometryTag { Euclidean, Projective };

/// Selects the family of internal-model transforms and, for the
/// projective family, the depth-contraction strength gamma.
struct GeometryKind {
    GeometryTag tag = GeometryTag::Euclidean;
    double gamma = 1.0;  // used only when tag == Projective

    static GeometryKind euclidean();
    static GeometryKind projective(double gamma);

    bool is_projective() const { return tag == GeometryTag::Projective; }
};

/// An internal-model transform: affine in the Euclidean case,
/// homogeneous-projective otherwise.
using Transform = std::variant<AffineMap, HomTransform>;

/// Coordinate change from world coordinates to frame coordinates:
/// linear = basis^T, offset = -basis^T * origin. Sends the frame origin
/// to 0 and the frame axes to the canonical axes.
AffineMap world_to_frame(const Frame& frame);

/// Perspective contraction: divides every coordinate of p by
/// (gamma*z + 1), z being the last (depth) coordinate. Throws
/// SingularPlaneError when |gamma*z + 1| <= kSingularPlaneTol.
Eigen::VectorXd perspective_contract(const Eigen::VectorXd& p, double gamma);

/// Inverse of perspective_contract; requires |1 - gamma*z| above the
/// singular tolerance for the depth coordinate z of p.
Eigen::VectorXd perspective_expand(const Eigen::VectorXd& p, double gamma);

/// Homogeneous matrix of the map (perspective_contract ∘ world_to_frame):
/// top block is the affine frame change, bottom row gamma times its depth
/// row (reducing to (0,...,0,gamma,1) for depth-preserving frame changes).
/// This is the projective world-to-internal-model embedding of a frame.
HomTransform projective_world_to_frame(const Frame& frame, double gamma);

/// Internal-model transform induced by the frame change before -> after.
/// Euclidean: the rigid map  world_to_frame(after) ∘ world_to_frame(before)^-1.
/// Projective: the corresponding product of homogeneous embeddings.
Transform frame_transition(const Frame& before, const Frame& after, const GeometryKind& kind);

/// Applies a transform to a point. Projective transforms act on (p,1)
/// followed by dehomogenization; throws SingularPlaneError when the
/// homogenized last coordinate is within tolerance of zero.
Eigen::VectorXd transform_point(const Transform& t, const Eigen::VectorXd& p);
Eigen::VectorXd transform_point(const AffineMap& t, const Eigen::VectorXd& p);
Eigen::VectorXd transform_point(const HomTransform& t, const Eigen::VectorXd& p);

/// Jacobian matrix of the (dehomogenized) transform at p.
Eigen::MatrixXd jacobian(const Transform& t, const Eigen::VectorXd& p);
Eigen::MatrixXd jacobian(const AffineMap& t, const Eigen::VectorXd& p);
Eigen::MatrixXd jacobian(const HomTransform& t, const Eigen::VectorXd& p);

/// Determinant of the transform differential at p. Affine maps give the
/// constant det(linear); a homogeneous matrix M = [[A,b],[c^T,e]] gives
/// det(M) / (c^T p + e)^(d+1), which for the bare perspective map
/// reduces to 1/(gamma*z + 1)^(d+1).
double jacobian_det(const Transform& t, const Eigen::VectorXd& p);
double jacobian_det(const AffineMap& t, const Eigen::VectorXd& p);
double jacobian_det(const HomTransform& t, const Eigen::VectorXd& p);

/// Frame at `position` whose depth axis points at `target`. The lateral
/// axes are completed deterministically: in 2-D the lateral axis is the
/// depth axis rotated so the basis stays right-handed; in 3-D they are
/// built by Gram-Schmidt against the world up vector (0,0,1), with
/// fallback axis (1,0,0) when looking within 1e-6 of straight up/down.
/// Throws DegenerateDirectionError when position coincides with target.
Frame look_at_frame(const Eigen::VectorXd& position, const Eigen::VectorXd& target);

}  // namespace epigeo
