#include "epigeo/geometry.hpp"

#include <cmath>
#include <sstream>

namespace epigeo {

namespace {

constexpr double kOrthonormalTol = 1e-10;
constexpr double kDetTol = 1e-12;
constexpr double kUpAlignmentTol = 1e-6;

void check_dim(int d, const char* what) {
    if (d != 2 && d != 3) {
        std::ostringstream os;
        os << what << ": dimension must be 2 or 3, got " << d;
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

// ── Frame ────────────────────────────────────────────────────────────────

Frame::Frame(Eigen::VectorXd origin_, Eigen::MatrixXd basis_)
    : origin(std::move(origin_)), basis(std::move(basis_)) {
    const int d = static_cast<int>(origin.size());
    check_dim(d, "Frame");
    if (basis.rows() != d || basis.cols() != d) {
        throw std::invalid_argument("Frame: basis shape does not match origin dimension");
    }
    const Eigen::MatrixXd gram = basis.transpose() * basis - Eigen::MatrixXd::Identity(d, d);
    if (gram.cwiseAbs().maxCoeff() >= kOrthonormalTol) {
        throw std::invalid_argument("Frame: basis is not orthonormal");
    }
    if (basis.determinant() <= 0.0) {
        throw std::invalid_argument("Frame: basis must be right-handed (det = +1)");
    }
}

Frame Frame::identity(int dim) {
    check_dim(dim, "Frame::identity");
    return Frame(Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Identity(dim, dim));
}

// ── AffineMap ────────────────────────────────────────────────────────────

AffineMap::AffineMap(Eigen::MatrixXd linear_, Eigen::VectorXd offset_)
    : linear(std::move(linear_)), offset(std::move(offset_)) {
    if (linear.rows() != offset.size() || linear.cols() != offset.size()) {
        throw std::invalid_argument("AffineMap: linear shape does not match offset dimension");
    }
    if (std::abs(linear.determinant()) <= kDetTol) {
        throw std::invalid_argument("AffineMap: linear part is singular");
    }
}

AffineMap AffineMap::inverse() const {
    const Eigen::MatrixXd inv = linear.inverse();
    return AffineMap(inv, -inv * offset);
}

AffineMap AffineMap::identity(int dim) {
    return AffineMap(Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Zero(dim));
}

AffineMap compose(const AffineMap& f, const AffineMap& g) {
    return AffineMap(f.linear * g.linear, f.linear * g.offset + f.offset);
}

// ── HomTransform ─────────────────────────────────────────────────────────

HomTransform::HomTransform(Eigen::MatrixXd m) : matrix(std::move(m)) {
    if (matrix.rows() != matrix.cols() || (matrix.rows() != 3 && matrix.rows() != 4)) {
        throw std::invalid_argument("HomTransform: matrix must be 3x3 or 4x4");
    }
    // Canonical representative: scale so the first entry of largest
    // absolute value (row-major) becomes exactly +1.
    double pivot = 0.0;
    double best = 0.0;
    for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
            const double a = std::abs(matrix(r, c));
            if (a > best) {
                best = a;
                pivot = matrix(r, c);
            }
        }
    }
    if (best == 0.0) {
        throw std::invalid_argument("HomTransform: zero matrix");
    }
    matrix /= pivot;
    if (std::abs(matrix.determinant()) <= kDetTol) {
        throw std::invalid_argument("HomTransform: matrix is singular");
    }
}

HomTransform HomTransform::inverse() const {
    return HomTransform(matrix.inverse());
}

HomTransform HomTransform::identity(int dim) {
    check_dim(dim, "HomTransform::identity");
    return HomTransform(Eigen::MatrixXd::Identity(dim + 1, dim + 1));
}

HomTransform compose(const HomTransform& f, const HomTransform& g) {
    return HomTransform(f.matrix * g.matrix);
}

HomTransform to_homogeneous(const AffineMap& map) {
    const int d = map.dim();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d + 1, d + 1);
    m.topLeftCorner(d, d) = map.linear;
    m.topRightCorner(d, 1) = map.offset;
    m(d, d) = 1.0;
    return HomTransform(m);
}

// ── GeometryKind ─────────────────────────────────────────────────────────

GeometryKind GeometryKind::euclidean() {
    return GeometryKind{GeometryTag::Euclidean, 1.0};
}

GeometryKind GeometryKind::projective(double gamma) {
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("GeometryKind: gamma must be strictly positive");
    }
    return GeometryKind{GeometryTag::Projective, gamma};
}

// ── Coordinate maps ──────────────────────────────────────────────────────

AffineMap world_to_frame(const Frame& frame) {
    const Eigen::MatrixXd bt = frame.basis.transpose();
    return AffineMap(bt, -bt * frame.origin);
}

Eigen::VectorXd perspective_contract(const Eigen::VectorXd& p, double gamma) {
    const double denom = gamma * p(p.size() - 1) + 1.0;
    if (std::abs(denom) <= kSingularPlaneTol) {
        throw SingularPlaneError("perspective_contract: point on singular plane");
    }
    return p / denom;
}

Eigen::VectorXd perspective_expand(const Eigen::VectorXd& p, double gamma) {
    const double denom = 1.0 - gamma * p(p.size() - 1);
    if (std::abs(denom) <= kSingularPlaneTol) {
        throw SingularPlaneError("perspective_expand: point on singular plane");
    }
    return p / denom;
}

HomTransform projective_world_to_frame(const Frame& frame, double gamma) {
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("projective_world_to_frame: gamma must be positive");
    }
    const int d = frame.dim();
    const AffineMap affine = world_to_frame(frame);
    // Matrix of (perspective contraction) composed after the frame change:
    // the bottom row is gamma times the depth row of the affine map, so the
    // homogenized denominator is gamma * (frame depth coordinate) + 1. For a
    // depth-preserving frame change this reduces to the row (0,...,0,gamma,1).
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d + 1, d + 1);
    m.topLeftCorner(d, d) = affine.linear;
    m.topRightCorner(d, 1) = affine.offset;
    m.bottomLeftCorner(1, d) = gamma * affine.linear.row(d - 1);
    m(d, d) = gamma * affine.offset(d - 1) + 1.0;
    return HomTransform(m);
}

Transform frame_transition(const Frame& before, const Frame& after, const GeometryKind& kind) {
    if (before.dim() != after.dim()) {
        throw std::invalid_argument("frame_transition: frame dimensions differ");
    }
    if (kind.is_projective()) {
        const HomTransform fb = projective_world_to_frame(before, kind.gamma);
        const HomTransform fa = projective_world_to_frame(after, kind.gamma);
        return compose(fa, fb.inverse());
    }
    return compose(world_to_frame(after), world_to_frame(before).inverse());
}

// ── Point action and differentials ───────────────────────────────────────

Eigen::VectorXd transform_point(const AffineMap& t, const Eigen::VectorXd& p) {
    return t.linear * p + t.offset;
}

Eigen::VectorXd transform_point(const HomTransform& t, const Eigen::VectorXd& p) {
    const int d = t.dim();
    Eigen::VectorXd h(d + 1);
    h.head(d) = p;
    h(d) = 1.0;
    const Eigen::VectorXd image = t.matrix * h;
    const double w = image(d);
    if (std::abs(w) <= kSingularPlaneTol) {
        throw SingularPlaneError("transform_point: image on singular plane");
    }
    return image.head(d) / w;
}

Eigen::VectorXd transform_point(const Transform& t, const Eigen::VectorXd& p) {
    return std::visit([&](const auto& m) { return transform_point(m, p); }, t);
}

Eigen::MatrixXd jacobian(const AffineMap& t, const Eigen::VectorXd&) {
    return t.linear;
}

Eigen::MatrixXd jacobian(const HomTransform& t, const Eigen::VectorXd& p) {
    // For M = [[A,b],[c^T,e]] the dehomogenized map is f(x) = (Ax+b)/(c^T x+e)
    // with differential (A*w - (Ax+b) c^T) / w^2, w = c^T x + e.
    const int d = t.dim();
    const Eigen::MatrixXd a = t.matrix.topLeftCorner(d, d);
    const Eigen::VectorXd b = t.matrix.topRightCorner(d, 1);
    const Eigen::RowVectorXd c = t.matrix.bottomLeftCorner(1, d);
    const double e = t.matrix(d, d);
    const double w = c.dot(p) + e;
    if (std::abs(w) <= kSingularPlaneTol) {
        throw SingularPlaneError("jacobian: point on singular plane");
    }
    return (a * w - (a * p + b) * c) / (w * w);
}

Eigen::MatrixXd jacobian(const Transform& t, const Eigen::VectorXd& p) {
    return std::visit([&](const auto& m) { return jacobian(m, p); }, t);
}

double jacobian_det(const AffineMap& t, const Eigen::VectorXd&) {
    return t.linear.determinant();
}

double jacobian_det(const HomTransform& t, const Eigen::VectorXd& p) {
    const int d = t.dim();
    const Eigen::RowVectorXd c = t.matrix.bottomLeftCorner(1, d);
    const double e = t.matrix(d, d);
    const double w = c.dot(p) + e;
    if (std::abs(w) <= kSingularPlaneTol) {
        throw SingularPlaneError("jacobian_det: point on singular plane");
    }
    return t.matrix.determinant() / std::pow(w, d + 1);
}

double jacobian_det(const Transform& t, const Eigen::VectorXd& p) {
    return std::visit([&](const auto& m) { return jacobian_det(m, p); }, t);
}

// ── Frame construction ───────────────────────────────────────────────────

Frame look_at_frame(const Eigen::VectorXd& position, const Eigen::VectorXd& target) {
    const int d = static_cast<int>(position.size());
    check_dim(d, "look_at_frame");
    const Eigen::VectorXd delta = target - position;
    const double dist = delta.norm();
    if (dist <= kSingularPlaneTol) {
        throw DegenerateDirectionError("look_at_frame: position coincides with target");
    }
    const Eigen::VectorXd depth = delta / dist;

    Eigen::MatrixXd basis(d, d);
    if (d == 2) {
        // Lateral axis chosen so [lateral, depth] is right-handed.
        basis.col(0) = Eigen::Vector2d(depth(1), -depth(0));
        basis.col(1) = depth;
    } else {
        Eigen::Vector3d up(0.0, 0.0, 1.0);
        if (std::abs(depth.dot(up)) > 1.0 - kUpAlignmentTol) {
            up = Eigen::Vector3d(1.0, 0.0, 0.0);
        }
        const Eigen::Vector3d vertical = (up - depth.dot(up) * depth).normalized();
        const Eigen::Vector3d dv = depth;
        basis.col(1) = vertical;
        basis.col(2) = depth;
        basis.col(0) = vertical.cross(dv);
    }
    return Frame(position, basis);
}

}  // namespace epigeo
