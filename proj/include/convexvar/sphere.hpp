#pragma once

#include "convexvar/mesh.hpp"

#include <cstdint>

namespace cvx {

/// Antipodally symmetric set of directions on S^{d-1} with a triangulation
/// (d = 3) for interpolation and area weights.
struct SphereMesh {
  std::vector<Vec3> directions;        // unit vectors
  std::vector<int> antipode;           // fixed-point-free involution
  std::vector<std::array<int, 3>> triangles;

  int count() const { return static_cast<int>(directions.size()); }

  /// Barycentric evaluation on the containing spherical triangle
  /// (central-projection weights, normalized to sum 1).
  EvalRow interpolation_row(const Vec3& unit_dir) const;

  /// Lumped per-direction area weights (sum = sphere area).
  Eigen::VectorXd area_weights() const;

 private:
  friend SphereMesh build_sphere_mesh(int);
  // triangle lookup acceleration: triangles bucketed by direction cells
  std::vector<std::vector<int>> tri_of_vertex_;
  void build_lookup();
};

/// Cyclic equal-spaced sampling of the great circle orthogonal to `normal`.
struct GreatCircleSample {
  Vec3 normal;                // unit
  std::vector<Vec3> points;   // unit, orthogonal to normal, cyclic
  double eps = 0.0;           // realized angular step
  double weight = 1.0;        // cos(eps)
};

/// Icosphere direction set: `level` midpoint subdivisions of the icosahedron,
/// 10*4^level + 2 directions, antipodally closed by construction.
SphereMesh build_sphere_mesh(int subdivision_level);

/// Great circles with quasi-uniform normals (Fibonacci lattice, rotated
/// deterministically by the seed); each circle sampled at round(2*pi/eps)
/// points, the realized step stored back into the sample.
std::vector<GreatCircleSample> sample_great_circles(int count, double eps, uint64_t seed);

void write_sphere_csv(const SphereMesh& sphere, const std::string& path);

}  // namespace cvx
