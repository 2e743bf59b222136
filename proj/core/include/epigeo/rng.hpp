#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace epigeo {

/// splitmix64 step; used to derive independent substream seeds from a
/// master seed so that concurrent consumers never share a stream.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic seed for substream (a, b) of a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(master ^ splitmix64(a)) ^ splitmix64(~b));
}

/// Draws n samples from N(mean, cov); cov must be positive definite.
/// Column k of the result is the k-th sample.
inline Eigen::MatrixXd sample_gaussian(const Eigen::VectorXd& mean,
                                       const Eigen::MatrixXd& cov,
                                       int n,
                                       std::uint64_t seed) {
    const auto d = mean.size();
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    const Eigen::MatrixXd chol = llt.matrixL();
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd out(d, n);
    Eigen::VectorXd z(d);
    for (int k = 0; k < n; ++k) {
        for (Eigen::Index i = 0; i < d; ++i) z(i) = normal(gen);
        out.col(k) = mean + chol * z;
    }
    return out;
}

}  // namespace epigeo
