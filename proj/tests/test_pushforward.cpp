#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "epigeo/pushforward.hpp"
#include "epigeo/rng.hpp"
#include "test_util.hpp"

using namespace epigeo;
using epigeo::test::random_frame;
using epigeo::test::random_rotation;
using epigeo::test::random_spd;

namespace {

IntegrationConfig mc_config(std::uint64_t seed, int n = 20000) {
    IntegrationConfig cfg;
    cfg.scheme = IntegrationScheme::MonteCarlo;
    cfg.sample_count = n;
    cfg.seed = seed;
    return cfg;
}

double total_deviation(const GaussianBelief& a, const GaussianBelief& b) {
    return (a.mean - b.mean).norm() + (a.cov - b.cov).norm();
}

}  // namespace

TEST_CASE("integration config validation") {
    IntegrationConfig cfg;
    cfg.sample_count = 100;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.sample_count = 20000;
    CHECK_NOTHROW(cfg.validate());
    cfg.scheme = IntegrationScheme::GridQuadrature;
    cfg.nodes_per_axis = 5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("affine pushforward is exact") {
    std::mt19937_64 gen(3);
    const GaussianBelief belief(Eigen::Vector3d(1, 2, 3), random_spd(gen, 3));

    SUBCASE("identity") {
        const GaussianBelief out = pushforward_affine(belief, AffineMap::identity(3));
        CHECK((out.mean - belief.mean).cwiseAbs().maxCoeff() == 0.0);
        CHECK((out.cov - belief.cov).cwiseAbs().maxCoeff() < 1e-15);
    }

    SUBCASE("pure translation") {
        const Eigen::Vector3d shift(0.5, -1.0, 2.0);
        const GaussianBelief out =
            pushforward_affine(belief, AffineMap(Eigen::Matrix3d::Identity(), shift));
        CHECK((out.mean - (belief.mean + shift)).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((out.cov - belief.cov).cwiseAbs().maxCoeff() < 1e-15);
    }

    SUBCASE("rotation conjugates the covariance and keeps the value") {
        const SensorModel sensor = SensorModel::gaussian(0.3);
        for (int i = 0; i < 50; ++i) {
            const Eigen::MatrixXd q = random_rotation(gen, 3);
            const GaussianBelief out =
                pushforward_affine(belief, AffineMap(q, Eigen::Vector3d::Zero()));
            CHECK((out.cov - q * belief.cov * q.transpose()).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(std::abs(epistemic_value(out, sensor) - epistemic_value(belief, sensor)) <
                  1e-10);
        }
    }
}

TEST_CASE("projective pushforward matches known limits") {
    std::mt19937_64 gen(7);

    SUBCASE("identity transform within Monte Carlo error") {
        const GaussianBelief belief(Eigen::Vector2d(0.2, 0.6),
                                    0.25 * Eigen::Matrix2d::Identity());
        const IntegrationConfig cfg = mc_config(99);
        const GaussianBelief out =
            pushforward_projective(belief, HomTransform::identity(2), cfg);
        const double se = 0.5 / std::sqrt(double(cfg.sample_count));
        CHECK((out.mean - belief.mean).cwiseAbs().maxCoeff() < 4.0 * se);
    }

    SUBCASE("embedded affine map agrees with the exact pushforward") {
        for (int i = 0; i < 10; ++i) {
            const int d = (i % 2 == 0) ? 2 : 3;
            const GaussianBelief belief(epigeo::test::random_point(gen, d, 2.0),
                                        random_spd(gen, d, 0.5));
            const AffineMap map(random_rotation(gen, d) * 1.2,
                                epigeo::test::random_point(gen, d, 1.0));
            const GaussianBelief exact = pushforward_affine(belief, map);
            const IntegrationConfig cfg = mc_config(1000 + i);
            const GaussianBelief approx =
                pushforward_projective(belief, to_homogeneous(map), cfg);
            const double n = cfg.sample_count;
            for (int k = 0; k < d; ++k) {
                const double se = std::sqrt(exact.cov(k, k) / n);
                CHECK(std::abs(approx.mean(k) - exact.mean(k)) < 4.0 * se);
            }
            for (int r = 0; r < d; ++r) {
                for (int c = 0; c < d; ++c) {
                    const double se = std::sqrt((exact.cov(r, r) * exact.cov(c, c) +
                                                 exact.cov(r, c) * exact.cov(r, c)) /
                                                n);
                    CHECK(std::abs(approx.cov(r, c) - exact.cov(r, c)) < 8.0 * se);
                }
            }
        }
    }

    SUBCASE("tight belief follows the local Jacobian") {
        const Frame frame = look_at_frame(Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 2));
        const Frame next = look_at_frame(Eigen::Vector2d(0, 0.1), Eigen::Vector2d(0, 2));
        const auto hom = std::get<HomTransform>(
            frame_transition(frame, next, GeometryKind::projective(1.0)));
        const Eigen::Vector2d p(0.0, 2.0 / 3.0);
        const GaussianBelief tight(p, 1e-6 * Eigen::Matrix2d::Identity());
        const GaussianBelief pushed = pushforward_projective(tight, hom, mc_config(4242));
        CHECK((pushed.mean - transform_point(hom, p)).cwiseAbs().maxCoeff() < 1e-3);
        const Eigen::MatrixXd jac = jacobian(hom, Eigen::VectorXd(p));
        const Eigen::MatrixXd expected = 1e-6 * jac * jac.transpose();
        CHECK((pushed.cov - expected).norm() < 0.1 * expected.norm());
    }

    SUBCASE("fixed seed reproduces bit-identical moments") {
        const GaussianBelief belief(Eigen::Vector2d(0.1, 0.5),
                                    0.04 * Eigen::Matrix2d::Identity());
        const Frame frame = look_at_frame(Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 2));
        const Frame next = look_at_frame(Eigen::Vector2d(0, 0.1), Eigen::Vector2d(0, 2));
        const auto hom = std::get<HomTransform>(
            frame_transition(frame, next, GeometryKind::projective(1.0)));
        const GaussianBelief a = pushforward_projective(belief, hom, mc_config(5));
        const GaussianBelief b = pushforward_projective(belief, hom, mc_config(5));
        CHECK(std::memcmp(a.mean.data(), b.mean.data(), sizeof(double) * 2) == 0);
        CHECK(std::memcmp(a.cov.data(), b.cov.data(), sizeof(double) * 4) == 0);
        const GaussianBelief c = pushforward_projective(belief, hom, mc_config(6));
        CHECK(total_deviation(a, c) > 0.0);
    }

    SUBCASE("doubling the sample count reduces the deviation (median of 20)") {
        int improved = 0;
        std::mt19937_64 gen2(77);
        for (int i = 0; i < 20; ++i) {
            const int d = 2;
            const GaussianBelief belief(epigeo::test::random_point(gen2, d, 1.0),
                                        random_spd(gen2, d, 0.3));
            const AffineMap map(random_rotation(gen2, d),
                                epigeo::test::random_point(gen2, d, 1.0));
            const GaussianBelief exact = pushforward_affine(belief, map);
            const GaussianBelief coarse =
                pushforward_projective(belief, to_homogeneous(map), mc_config(900 + i, 2000));
            const GaussianBelief fine =
                pushforward_projective(belief, to_homogeneous(map), mc_config(900 + i, 4000));
            if (total_deviation(fine, exact) < total_deviation(coarse, exact)) ++improved;
        }
        CHECK(improved >= 11);  // median improves
    }

    SUBCASE("grid quadrature approximates the identity pushforward") {
        const GaussianBelief belief(Eigen::Vector2d(0.3, 0.5),
                                    0.09 * Eigen::Matrix2d::Identity());
        IntegrationConfig cfg;
        cfg.scheme = IntegrationScheme::GridQuadrature;
        cfg.nodes_per_axis = 21;
        cfg.half_width_sigmas = 5.0;
        const GaussianBelief out =
            pushforward_projective(belief, HomTransform::identity(2), cfg);
        CHECK((out.mean - belief.mean).cwiseAbs().maxCoeff() < 1e-6);
        CHECK((out.cov - belief.cov).cwiseAbs().maxCoeff() < 0.01 * belief.cov(0, 0));
    }
}

TEST_CASE("singular mass is detected up front") {
    // Perspective embedding of the identity frame: singular plane at z = -1.
    const HomTransform rho = projective_world_to_frame(Frame::identity(2), 1.0);

    const GaussianBelief far(Eigen::Vector2d(0.0, 0.5), 0.01 * Eigen::Matrix2d::Identity());
    CHECK(singular_band_mass(far, rho, 1e-3) < 1e-6);

    const GaussianBelief straddling(Eigen::Vector2d(0.0, -1.0),
                                    1e-8 * Eigen::Matrix2d::Identity());
    CHECK(singular_band_mass(straddling, rho, 1e-3) > 0.99);
    CHECK_THROWS_AS(pushforward_projective(straddling, rho, mc_config(1)), SingularMassError);
}
