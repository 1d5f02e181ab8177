#pragma once

#include "convexvar/sphere.hpp"

namespace cvx {

/// Convex polytope: triangulated outward-oriented boundary (d = 3) or a
/// counterclockwise vertex loop (d = 2).
struct Polytope {
  int dim = 3;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;  // d = 3
};

/// Support-function samples on a sphere mesh.
struct SupportField {
  Eigen::VectorXd values;
  const SphereMesh* sphere = nullptr;
};

/// Convex hull of a 3D point cloud as a Polytope (duplicate and interior
/// points dropped).
Polytope polytope_from_points(const std::vector<Vec3>& pts);

/// h(nu_i) = max over vertices of <nu_i, p>, exact.
SupportField support_of_polytope(const Polytope& P, const SphereMesh& sphere);

struct ReconstructedBody {
  Polytope body;
  Vec3 recenter = Vec3::Zero();  // translation applied before dualizing
};

/// Halfspace intersection K = {x : <x, nu_i> <= h_i} via polar duality
/// (hull of nu_i/h_i). Fields without a strictly interior origin are
/// recentered by a Steiner-point estimate first.
ReconstructedBody reconstruct_body(const SupportField& h);

double volume(const Polytope& P);
double surface_area(const Polytope& P);

struct WidthStats {
  double min = 0, max = 0, mean = 0;
  double relative_error = 0;  // (max - min) / mean
};
WidthStats width_stats(const SupportField& h);

void write_off(const Polytope& P, const std::string& path);
void write_obj(const Polytope& P, const std::string& path);

/// Unit-edge regular tetrahedron centered at the origin.
Polytope regular_tetrahedron(double edge = 1.0);
/// Icosahedron with unit circumradius.
Polytope unit_icosahedron();

}  // namespace cvx
