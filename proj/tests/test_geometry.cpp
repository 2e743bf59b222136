#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epigeo/geometry.hpp"
#include "test_util.hpp"

using namespace epigeo;
using epigeo::test::fd_jacobian;
using epigeo::test::hom_distance;
using epigeo::test::random_frame;
using epigeo::test::random_point;

namespace {

Eigen::Vector3d v3(double x, double y, double z) { return Eigen::Vector3d(x, y, z); }
Eigen::Vector2d v2(double x, double y) { return Eigen::Vector2d(x, y); }

}  // namespace

TEST_CASE("frame invariants are enforced") {
    Eigen::Matrix3d skewed = Eigen::Matrix3d::Identity();
    skewed(0, 1) = 0.5;
    CHECK_THROWS_AS(Frame(v3(0, 0, 0), skewed), std::invalid_argument);

    Eigen::Matrix3d mirrored = Eigen::Matrix3d::Identity();
    mirrored(0, 0) = -1.0;  // orthonormal but left-handed
    CHECK_THROWS_AS(Frame(v3(0, 0, 0), mirrored), std::invalid_argument);

    CHECK_THROWS_AS(Frame::identity(4), std::invalid_argument);
}

TEST_CASE("world_to_frame maps frame data to canonical coordinates") {
    const AffineMap id = world_to_frame(Frame::identity(3));
    CHECK((id.linear - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(id.offset.cwiseAbs().maxCoeff() == 0.0);

    const Frame shifted(v3(0, 2, 0), Eigen::Matrix3d::Identity());
    CHECK(transform_point(world_to_frame(shifted), v3(0, 2, 0)).cwiseAbs().maxCoeff() ==
          doctest::Approx(0.0));

    Eigen::Matrix3d rot90z;  // +90 degrees about z
    rot90z << 0, -1, 0, 1, 0, 0, 0, 0, 1;
    const Frame rotated(v3(0, 0, 0), rot90z);
    const Eigen::VectorXd image = transform_point(world_to_frame(rotated), v3(1, 0, 0));
    CHECK(image(0) == doctest::Approx(0.0));
    CHECK(image(1) == doctest::Approx(-1.0));
    CHECK(image(2) == doctest::Approx(0.0));
}

TEST_CASE("perspective contraction matches its closed form") {
    CHECK(perspective_contract(v3(0, 0, 0), 1.0).cwiseAbs().maxCoeff() == 0.0);

    const Eigen::VectorXd p = perspective_contract(v3(1, 0, 1), 1.0);
    CHECK(p(0) == doctest::Approx(0.5));
    CHECK(p(1) == doctest::Approx(0.0));
    CHECK(p(2) == doctest::Approx(0.5));

    CHECK_THROWS_AS(perspective_contract(v3(2, 2, -0.5), 2.0), SingularPlaneError);
}

TEST_CASE("perspective expansion inverts the contraction") {
    CHECK(perspective_expand(v3(0, 0, 0), 1.0).cwiseAbs().maxCoeff() == 0.0);

    const Eigen::VectorXd p = perspective_expand(v3(0.5, 0, 0.5), 1.0);
    CHECK(p(0) == doctest::Approx(1.0));
    CHECK(p(2) == doctest::Approx(1.0));

    // Round-trip property over random points and gammas.
    std::mt19937_64 gen(42);
    int used = 0;
    while (used < 1000) {
        const int d = (used % 2 == 0) ? 2 : 3;
        const double gamma = (used % 3 == 0) ? 0.5 : (used % 3 == 1 ? 1.0 : 2.0);
        const Eigen::VectorXd q = random_point(gen, d, 3.0);
        if (std::abs(gamma * q(d - 1) + 1.0) < 0.05) continue;
        const Eigen::VectorXd contracted = perspective_contract(q, gamma);
        if (std::abs(1.0 - gamma * contracted(d - 1)) < 0.05) continue;
        const Eigen::VectorXd back = perspective_expand(contracted, gamma);
        CHECK((back - q).cwiseAbs().maxCoeff() < 1e-10);
        ++used;
    }
}

TEST_CASE("projective embedding equals contraction after frame change") {
    // Identity frame: embedding acts exactly like the bare contraction.
    const HomTransform rho = projective_world_to_frame(Frame::identity(3), 1.0);
    const Eigen::VectorXd image = transform_point(rho, v3(1, 0, 1));
    CHECK(image(0) == doctest::Approx(0.5));
    CHECK(image(2) == doctest::Approx(0.5));

    // Depth-zero plane is fixed for any gamma.
    for (double gamma : {0.3, 1.0, 4.0}) {
        const HomTransform t = projective_world_to_frame(Frame::identity(3), gamma);
        const Eigen::VectorXd fixed = transform_point(t, v3(0.7, -1.2, 0.0));
        CHECK(fixed(0) == doctest::Approx(0.7));
        CHECK(fixed(1) == doctest::Approx(-1.2));
        CHECK(fixed(2) == doctest::Approx(0.0));
    }

    // Compose-and-compare oracle on the frame from the worked example,
    // then on fully random frames.
    std::mt19937_64 gen(7);
    const Frame example(v3(0, -1, 0), Eigen::Matrix3d::Identity());
    for (int i = 0; i < 100; ++i) {
        const Eigen::VectorXd p = random_point(gen, 3, 3.0);
        const Eigen::VectorXd in_frame = transform_point(world_to_frame(example), p);
        if (std::abs(in_frame(2) + 1.0) < 0.05) continue;
        const Eigen::VectorXd lhs = transform_point(projective_world_to_frame(example, 1.0), p);
        const Eigen::VectorXd rhs = perspective_contract(in_frame, 1.0);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
    int used = 0;
    while (used < 200) {
        const int d = (used % 2 == 0) ? 2 : 3;
        const double gamma = (used % 3 == 0) ? 0.5 : (used % 3 == 1 ? 1.0 : 2.0);
        const Frame frame = random_frame(gen, d);
        const Eigen::VectorXd p = random_point(gen, d, 3.0);
        const Eigen::VectorXd in_frame = transform_point(world_to_frame(frame), p);
        if (std::abs(gamma * in_frame(d - 1) + 1.0) < 0.05) continue;
        const Eigen::VectorXd lhs = transform_point(projective_world_to_frame(frame, gamma), p);
        const Eigen::VectorXd rhs = perspective_contract(in_frame, gamma);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
        ++used;
    }
}

TEST_CASE("frame transitions satisfy the group axioms") {
    std::mt19937_64 gen(11);

    SUBCASE("identity") {
        for (int i = 0; i < 200; ++i) {
            const int d = (i % 2 == 0) ? 2 : 3;
            const Frame frame = random_frame(gen, d);
            const auto euclid =
                std::get<AffineMap>(frame_transition(frame, frame, GeometryKind::euclidean()));
            CHECK((euclid.linear - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() <
                  1e-10);
            CHECK(euclid.offset.cwiseAbs().maxCoeff() < 1e-10);
            const auto proj = std::get<HomTransform>(
                frame_transition(frame, frame, GeometryKind::projective(1.0)));
            CHECK(hom_distance(proj, HomTransform::identity(d)) < 1e-10);
        }
    }

    SUBCASE("euclidean translation") {
        const Frame before(v2(1.0, -2.0), test::random_rotation(gen, 2));
        const Frame after(before.origin + v2(0.3, 0.4), before.basis);
        const auto t =
            std::get<AffineMap>(frame_transition(before, after, GeometryKind::euclidean()));
        CHECK((t.linear - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        const Eigen::VectorXd p = v2(0.7, 0.2);
        const Eigen::VectorXd lhs = transform_point(t, transform_point(world_to_frame(before), p));
        const Eigen::VectorXd rhs = transform_point(world_to_frame(after), p);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("projective composition") {
        for (int i = 0; i < 300; ++i) {
            const int d = (i % 2 == 0) ? 2 : 3;
            const GeometryKind kind = GeometryKind::projective(1.0);
            const Frame r0 = random_frame(gen, d), r1 = random_frame(gen, d),
                        r2 = random_frame(gen, d);
            const auto t01 = std::get<HomTransform>(frame_transition(r0, r1, kind));
            const auto t12 = std::get<HomTransform>(frame_transition(r1, r2, kind));
            const auto t02 = std::get<HomTransform>(frame_transition(r0, r2, kind));
            CHECK(hom_distance(compose(t12, t01), t02) < 1e-10);
            CHECK(hom_distance(compose(t01, t01.inverse()), HomTransform::identity(d)) < 1e-10);
        }
    }

    SUBCASE("euclidean rigidity") {
        for (int i = 0; i < 200; ++i) {
            const int d = (i % 2 == 0) ? 2 : 3;
            const Transform t = frame_transition(random_frame(gen, d), random_frame(gen, d),
                                                 GeometryKind::euclidean());
            const Eigen::VectorXd p = random_point(gen, d, 3.0), q = random_point(gen, d, 3.0);
            CHECK(std::abs((transform_point(t, p) - transform_point(t, q)).norm() -
                           (p - q).norm()) < 1e-10);
        }
    }
}

TEST_CASE("transform_point round-trips through inverses") {
    std::mt19937_64 gen(3);
    const Transform id = Transform(AffineMap::identity(3));
    const Eigen::VectorXd p = v3(0.1, -0.7, 2.0);
    CHECK((transform_point(id, p) - p).cwiseAbs().maxCoeff() == 0.0);

    int used = 0;
    while (used < 200) {
        const int d = (used % 2 == 0) ? 2 : 3;
        const Frame a = random_frame(gen, d), b = random_frame(gen, d);
        const Eigen::VectorXd q = random_point(gen, d, 2.0);
        if (used % 2 == 0) {
            const auto t = std::get<AffineMap>(frame_transition(a, b, GeometryKind::euclidean()));
            CHECK((transform_point(t.inverse(), transform_point(t, q)) - q).cwiseAbs().maxCoeff() <
                  1e-10);
        } else {
            const auto t = std::get<HomTransform>(
                frame_transition(a, b, GeometryKind::projective(1.0)));
            Eigen::VectorXd h(d + 1);
            h.head(d) = q;
            h(d) = 1.0;
            if (std::abs((t.matrix.row(d) * h)(0)) < 0.05) continue;
            CHECK((transform_point(t.inverse(), transform_point(t, q)) - q).cwiseAbs().maxCoeff() <
                  1e-10);
        }
        ++used;
    }
}

TEST_CASE("jacobian determinant has the analytic form") {
    SUBCASE("affine scaling") {
        const AffineMap doubled(2.0 * Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero());
        CHECK(jacobian_det(Transform(doubled), v3(9, 9, 9)) == doctest::Approx(8.0));
    }

    SUBCASE("perspective contraction at unit depth") {
        const HomTransform rho = projective_world_to_frame(Frame::identity(3), 1.0);
        CHECK(jacobian_det(rho, v3(0, 0, 1)) == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
        // d = 2 exponent is d + 1 = 3.
        const HomTransform rho2 = projective_world_to_frame(Frame::identity(2), 1.0);
        CHECK(jacobian_det(rho2, v2(0, 1)) == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
    }

    SUBCASE("finite differences agree to relative 1e-5") {
        std::mt19937_64 gen(17);
        int used = 0;
        while (used < 100) {
            const int d = (used % 2 == 0) ? 2 : 3;
            const Frame a = random_frame(gen, d), b = random_frame(gen, d);
            const Transform t = frame_transition(a, b, GeometryKind::projective(1.0));
            const Eigen::VectorXd p = random_point(gen, d, 2.0);
            const auto& hom = std::get<HomTransform>(t);
            Eigen::VectorXd h(d + 1);
            h.head(d) = p;
            h(d) = 1.0;
            if (std::abs((hom.matrix.row(d) * h)(0)) < 0.1) continue;
            const double analytic = jacobian_det(t, p);
            const double numeric = fd_jacobian(t, p).determinant();
            CHECK(std::abs(analytic - numeric) <= 1e-5 * std::abs(analytic));
            // The full Jacobian matrix matches too.
            CHECK((jacobian(t, p) - fd_jacobian(t, p)).cwiseAbs().maxCoeff() <
                  1e-4 * std::max(1.0, jacobian(t, p).cwiseAbs().maxCoeff()));
            ++used;
        }
    }

    SUBCASE("scale invariance of the canonical representative") {
        std::mt19937_64 gen(23);
        for (int i = 0; i < 100; ++i) {
            const int d = (i % 2 == 0) ? 2 : 3;
            const auto hom = std::get<HomTransform>(frame_transition(
                random_frame(gen, d), random_frame(gen, d), GeometryKind::projective(1.0)));
            for (double s : {-2.0, 0.5, 11.0}) {
                const HomTransform scaled(s * hom.matrix);
                CHECK((scaled.matrix - hom.matrix).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
}

TEST_CASE("look_at_frame builds deterministic facing frames") {
    const Frame planar = look_at_frame(v2(0, 0), v2(0, 2));
    CHECK(planar.basis.col(1)(0) == doctest::Approx(0.0));
    CHECK(planar.basis.col(1)(1) == doctest::Approx(1.0));
    CHECK(planar.basis.determinant() == doctest::Approx(1.0));

    CHECK_THROWS_AS(look_at_frame(v2(1, 1), v2(1, 1)), DegenerateDirectionError);

    // Up-aligned fallback in 3-D.
    const Frame up = look_at_frame(v3(0, 0, 0), v3(0, 0, 5));
    CHECK(up.basis.determinant() == doctest::Approx(1.0));
    CHECK((up.basis.transpose() * up.basis - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <
          1e-12);

    std::mt19937_64 gen(29);
    for (int i = 0; i < 300; ++i) {
        const int d = (i % 2 == 0) ? 2 : 3;
        const Eigen::VectorXd position = random_point(gen, d, 3.0);
        Eigen::VectorXd target = random_point(gen, d, 3.0);
        if ((target - position).norm() < 1e-3) target(0) += 1.0;
        const Frame frame = look_at_frame(position, target);
        // Invariants.
        CHECK((frame.basis.transpose() * frame.basis - Eigen::MatrixXd::Identity(d, d))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        CHECK(frame.basis.determinant() > 0.0);
        // The target sits on the positive depth axis.
        const Eigen::VectorXd rep = transform_point(world_to_frame(frame), target);
        CHECK(rep.head(d - 1).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(rep(d - 1) == doctest::Approx((target - position).norm()));
    }
}
