#pragma once

#include <cstdint>

#include "epigeo/belief.hpp"
#include "epigeo/geometry.hpp"

namespace epigeo {

enum class IntegrationScheme { MonteCarlo, GridQuadrature };

/// Controls the numerical integration behind the projective pushforward.
struct IntegrationConfig {
    IntegrationScheme scheme = IntegrationScheme::MonteCarlo;
    int sample_count = 20000;       // MonteCarlo
    int nodes_per_axis = 9;         // GridQuadrature
    double half_width_sigmas = 5.0; // GridQuadrature truncation
    std::uint64_t seed = 0;

    void validate() const;
};

/// Exact pushforward of a Gaussian through an affine map:
/// N(A mu + b, A S A^T).
GaussianBelief pushforward_affine(const GaussianBelief& belief, const AffineMap& map);

/// Moment-matched Gaussian approximation of the pushforward through a
/// projective transform. Points are drawn (or enumerated) from the input
/// belief, mapped forward, and the empirical mean/covariance are taken;
/// integrating over the domain this way is the change-of-variables
/// integral in disguise and never evaluates the Jacobian.
///
/// Throws SingularMassError when non-negligible belief mass lies near the
/// transform's singular hyperplane (checked a priori from mean/cov, and
/// again if more than 0.1% of draws get rejected), and
/// DegenerateCovarianceError when the empirical covariance is not PD
/// after regularization.
GaussianBelief pushforward_projective(const GaussianBelief& belief,
                                      const HomTransform& map,
                                      const IntegrationConfig& cfg);

/// Dispatch on the transform alternative: affine maps take the exact
/// path, homogeneous transforms the numerical one.
GaussianBelief pushforward(const GaussianBelief& belief,
                           const Transform& map,
                           const IntegrationConfig& cfg);

/// Probability that the homogenized denominator of `map` falls within
/// `band` of zero under `belief` (exact for the Gaussian model). Used as
/// the pushforward precondition: must stay below 1e-6 for band 1e-3.
double singular_band_mass(const GaussianBelief& belief, const HomTransform& map, double band);

}  // namespace epigeo
