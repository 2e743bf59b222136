#pragma once

#include <string>
#include <vector>

#include "epigeo/experiments.hpp"

namespace epigeo::detail {

/// Shortest round-trip decimal representation ("%.17g").
std::string g17(double v);

/// Fixed-precision decimal, for SVG coordinates.
std::string fixed(double v, int precision = 3);

std::string render_trajectories_svg(const std::vector<Trajectory>& trajectories,
                                    const Eigen::VectorXd& object,
                                    const std::string& config_json);

std::string render_direction_profile_svg(const std::vector<GridResult>& results,
                                         const std::string& config_json);

}  // namespace epigeo::detail
