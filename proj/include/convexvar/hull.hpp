#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace cvx {

/// Indices of the convex hull of 2D points (z ignored), counterclockwise.
std::vector<int> convex_hull_2d(const std::vector<Eigen::Vector3d>& pts);

/// Triangulated convex hull of 3D points, faces oriented outward.
/// Throws std::runtime_error on degenerate (affinely dependent) input.
std::vector<std::array<int, 3>> convex_hull_3d(const std::vector<Eigen::Vector3d>& pts);

}  // namespace cvx
