#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epigeo/belief.hpp"
#include "epigeo/oracle.hpp"
#include "test_util.hpp"

using namespace epigeo;
using epigeo::test::random_rotation;
using epigeo::test::random_spd;

namespace {

GaussianBelief standard(int d) {
    return GaussianBelief(Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Identity(d, d));
}

}  // namespace

TEST_CASE("belief invariants are enforced at construction") {
    Eigen::Matrix2d asym;
    asym << 1.0, 0.5, 0.1, 1.0;
    CHECK_THROWS_AS(GaussianBelief(Eigen::Vector2d::Zero(), asym), std::invalid_argument);

    Eigen::Matrix2d indefinite;
    indefinite << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(GaussianBelief(Eigen::Vector2d::Zero(), indefinite), std::invalid_argument);

    CHECK_THROWS_AS(SensorModel::gaussian(0.0), std::invalid_argument);
}

TEST_CASE("conditioning matches the closed-form update") {
    const SensorModel sensor = SensorModel::gaussian(1.0);

    SUBCASE("unit prior, unit noise") {
        const GaussianBelief posterior =
            condition(standard(3), sensor, Eigen::Vector3d(2, 0, 0));
        CHECK(posterior.mean(0) == doctest::Approx(1.0));
        CHECK(posterior.mean(1) == doctest::Approx(0.0));
        CHECK((posterior.cov - 0.5 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <
              1e-12);
    }

    SUBCASE("zero innovation leaves the mean") {
        std::mt19937_64 gen(5);
        const Eigen::MatrixXd cov = random_spd(gen, 3);
        const GaussianBelief prior(Eigen::Vector3d(0.3, -1.0, 2.0), cov);
        const GaussianBelief posterior = condition(prior, sensor, prior.mean);
        CHECK((posterior.mean - prior.mean).cwiseAbs().maxCoeff() < 1e-12);
        const Eigen::MatrixXd obs_cov = cov + Eigen::Matrix3d::Identity();
        const Eigen::MatrixXd expected = cov - cov * obs_cov.inverse() * cov;
        CHECK((posterior.cov - expected).cwiseAbs().maxCoeff() < 1e-10);
    }

    SUBCASE("near-uninformative sensor keeps the prior") {
        std::mt19937_64 gen(9);
        const GaussianBelief prior(Eigen::Vector3d(1.0, 2.0, 3.0), random_spd(gen, 3));
        const GaussianBelief posterior =
            condition(prior, SensorModel::gaussian(1e6), Eigen::Vector3d(-5.0, 4.0, 0.0));
        CHECK((posterior.mean - prior.mean).cwiseAbs().maxCoeff() < 1e-5);
        CHECK((posterior.cov - prior.cov).cwiseAbs().maxCoeff() <
              1e-5 * prior.cov.cwiseAbs().maxCoeff());
    }

    SUBCASE("posterior covariance never exceeds the prior") {
        std::mt19937_64 gen(13);
        for (int i = 0; i < 100; ++i) {
            const int d = (i % 2 == 0) ? 2 : 3;
            const GaussianBelief prior(Eigen::VectorXd::Zero(d), random_spd(gen, d));
            const GaussianBelief posterior =
                condition(prior, SensorModel::gaussian(0.3), epigeo::test::random_point(gen, d));
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(prior.cov - posterior.cov,
                                                              Eigen::EigenvaluesOnly);
            CHECK(es.eigenvalues().minCoeff() > -1e-10);
        }
    }
}

TEST_CASE("epistemic value is the Gaussian mutual information") {
    SUBCASE("unit covariance in three dimensions") {
        const double value = epistemic_value(standard(3), SensorModel::gaussian(1.0));
        CHECK(std::abs(value - 0.5 * std::log(8.0)) < 1e-12);
    }

    SUBCASE("vanishing uncertainty gives vanishing value") {
        const GaussianBelief tiny(Eigen::Vector3d::Zero(),
                                  1e-10 * Eigen::Matrix3d::Identity());
        const double value = epistemic_value(tiny, SensorModel::gaussian(1.0));
        CHECK(value >= 0.0);
        CHECK(value < 1e-6);
    }

    SUBCASE("closed form within Monte Carlo error bars") {
        std::mt19937_64 gen(21);
        for (int i = 0; i < 5; ++i) {
            const int d = (i % 2 == 0) ? 2 : 3;
            const SensorModel sensor = SensorModel::gaussian(0.2 + 0.4 * i);
            const GaussianBelief belief(Eigen::VectorXd::Zero(d), random_spd(gen, d));
            const McEstimate mc = mc_mutual_information(belief, sensor, 200000, 100 + i);
            CHECK(std::abs(epistemic_value(belief, sensor) - mc.value) < 3.0 * mc.std_error);
        }
    }

    SUBCASE("rotation invariance") {
        std::mt19937_64 gen(31);
        const SensorModel sensor = SensorModel::gaussian(0.5);
        for (int i = 0; i < 100; ++i) {
            const int d = (i % 2 == 0) ? 2 : 3;
            const Eigen::MatrixXd cov = random_spd(gen, d);
            const Eigen::MatrixXd q = random_rotation(gen, d);
            Eigen::MatrixXd rotated = q * cov * q.transpose();
            rotated = ((rotated + rotated.transpose()) / 2.0).eval();
            const double a = epistemic_value(GaussianBelief(Eigen::VectorXd::Zero(d), cov), sensor);
            const double b =
                epistemic_value(GaussianBelief(Eigen::VectorXd::Zero(d), rotated), sensor);
            CHECK(std::abs(a - b) < 1e-10);
        }
    }

    SUBCASE("strictly increasing in covariance scale") {
        std::mt19937_64 gen(37);
        const SensorModel sensor = SensorModel::gaussian(0.4);
        const Eigen::MatrixXd cov = random_spd(gen, 3);
        double previous = -1.0;
        for (double alpha : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
            const double value =
                epistemic_value(GaussianBelief(Eigen::Vector3d::Zero(), alpha * cov), sensor);
            CHECK(value > previous);
            previous = value;
        }
    }

    SUBCASE("conditioning strictly reduces the value") {
        std::mt19937_64 gen(41);
        const SensorModel sensor = SensorModel::gaussian(0.3);
        for (int i = 0; i < 50; ++i) {
            const GaussianBelief prior(Eigen::Vector2d::Zero(), random_spd(gen, 2));
            const GaussianBelief posterior =
                condition(prior, sensor, epigeo::test::random_point(gen, 2));
            CHECK(epistemic_value(posterior, sensor) < epistemic_value(prior, sensor));
        }
    }
}

TEST_CASE("joint moments expose the block structure") {
    const SensorModel sensor = SensorModel::gaussian(1.0);
    const auto [mean, cov] = joint_moments(standard(3), sensor);

    CHECK(mean.size() == 6);
    CHECK(mean.cwiseAbs().maxCoeff() == 0.0);
    CHECK((cov.topLeftCorner(3, 3) - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((cov.topRightCorner(3, 3) - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((cov.bottomRightCorner(3, 3) - 2.0 * Eigen::Matrix3d::Identity())
              .cwiseAbs()
              .maxCoeff() == 0.0);

    // Symmetric positive semidefinite by construction.
    CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);

    SUBCASE("marginal of Y and the determinant identity") {
        std::mt19937_64 gen(43);
        for (int i = 0; i < 100; ++i) {
            const int d = (i % 2 == 0) ? 2 : 3;
            std::uniform_real_distribution<double> eps_dist(0.05, 2.0);
            const SensorModel s = SensorModel::gaussian(eps_dist(gen));
            const GaussianBelief belief(Eigen::VectorXd::Zero(d), random_spd(gen, d));
            const auto [m, joint] = joint_moments(belief, s);
            const double e2 = s.epsilon * s.epsilon;
            const Eigen::MatrixXd obs_cov = belief.cov + e2 * Eigen::MatrixXd::Identity(d, d);
            CHECK((joint.bottomRightCorner(d, d) - obs_cov).cwiseAbs().maxCoeff() == 0.0);
            const double via_dets = 0.5 * std::log(belief.cov.determinant() *
                                                   obs_cov.determinant() / joint.determinant());
            CHECK(std::abs(via_dets - epistemic_value(belief, s)) < 1e-10);
        }
    }
}
