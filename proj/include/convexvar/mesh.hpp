#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvx {

using Vec3 = Eigen::Vector3d;  // 2D geometry uses z = 0

/// Bounded convex domain of R^d, d in {2,3}.
struct Domain {
  enum class Kind { Box, Ball, Polygon };

  Kind kind = Kind::Box;
  int dim = 2;
  Vec3 lo = Vec3::Zero(), hi = Vec3::Zero();  // box corners
  Vec3 center = Vec3::Zero();                 // ball
  double radius = 0.0;
  std::vector<Vec3> poly;  // convex polygon, counterclockwise, d = 2

  static Domain box(int dim, const Vec3& lo, const Vec3& hi);
  static Domain ball(int dim, const Vec3& center, double radius);
  static Domain polygon(std::vector<Vec3> vertices);

  double diameter() const;
  double volume() const;
  bool contains(const Vec3& p, double tol = 1e-9) const;
};

/// Triangulation (d=2) or tetrahedralization (d=3) of a convex domain.
/// Carrier of the space of continuous piecewise-linear functions
/// parameterized by nodal values.
struct SimplicialMesh {
  int dim = 2;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> simplices;  // last index -1 for triangles
  std::vector<int> boundary_vertices;
  double max_edge_length = 0.0;  // delta

  // set for lattice meshes; enables O(1) point location
  struct RegularGrid {
    Vec3 lo;
    double h = 0.0;
    int nx = 0, ny = 0, nz = 0;  // cells per axis (nz unused in 2D)
  };
  std::optional<RegularGrid> grid;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int simplex_count() const { return static_cast<int>(simplices.size()); }
  int verts_per_simplex() const { return dim + 1; }

  double simplex_volume(int s) const;
  double total_volume() const;
  double domain_diameter() const;

  /// Located point: containing simplex plus barycentric weights.
  struct Location {
    int simplex = -1;
    std::array<int, 4> idx{{-1, -1, -1, -1}};
    std::array<double, 4> w{{0, 0, 0, 0}};
  };

  /// Locates x in the mesh. Points within `snap_tol` of the domain are
  /// snapped onto the nearest simplex; farther points return simplex = -1.
  Location locate(const Vec3& x, double snap_tol = -1.0) const;

  void finalize();  // builds the spatial index and computes max_edge_length

 private:
  // uniform-bin index for unstructured meshes
  Vec3 bin_lo_;
  double bin_h_ = 0.0;
  int bnx_ = 0, bny_ = 0, bnz_ = 0;
  std::vector<std::vector<int>> bins_;
  Location locate_in_candidates(const Vec3& x, const std::vector<int>& cand,
                                double snap_tol) const;
};

/// Nodal coefficient vector tied to a mesh (or to a sphere mesh).
struct NodalField {
  Eigen::VectorXd values;
  const SimplicialMesh* mesh = nullptr;  // null for sphere fields

  double operator()(const SimplicialMesh::Location& loc) const {
    double v = 0;
    for (int k = 0; k < 4 && loc.idx[k] >= 0; ++k) v += loc.w[k] * values[loc.idx[k]];
    return v;
  }
};

/// Sparse linear functional on nodal coefficients.
struct EvalRow {
  std::vector<int> idx;
  std::vector<double> w;
  double offset = 0.0;

  double apply(const Eigen::VectorXd& x) const {
    double v = offset;
    for (size_t k = 0; k < idx.size(); ++k) v += w[k] * x[idx[k]];
    return v;
  }
};

/// Regular lattice mesh of a box domain. Cells are split into 2 triangles
/// by the cell diagonal from (i, j+1) to (i+1, j), or into 6 tetrahedra by
/// the Kuhn subdivision sharing the main cell diagonal. Cells must be
/// square/cubic (box extents divisible by the cell size).
SimplicialMesh build_grid_mesh(const Domain& domain, int cells_per_axis);

/// Unstructured disk mesh from concentric rings; boundary vertices lie on
/// the circle, max edge <= 1.5 * target_delta.
SimplicialMesh build_disk_mesh(const Domain& domain, double target_delta);

/// Boundary sampling: always contains the corners/extreme points of the
/// domain, then fills edges/arcs/faces with equal spacing <= eps. Every
/// boundary point is within eps of a returned point.
std::vector<Vec3> sample_boundary(const Domain& domain, double eps);

/// Subsamples mesh boundary vertices at arc spacing <= eps (keeps points
/// that are exact mesh vertices; used for curved domains).
std::vector<Vec3> subsample_mesh_boundary(const SimplicialMesh& mesh, double eps);

/// Point evaluation as a linear functional on nodal values: d+1 barycentric
/// weights, nonnegative up to roundoff, summing to 1.
/// Throws std::domain_error if x lies outside the meshed domain.
EvalRow interpolation_row(const SimplicialMesh& mesh, const Vec3& x);

/// Nodal interpolation operator: coefficient i equals f(vertex_i).
NodalField interpolate(const std::function<double(const Vec3&)>& f,
                       const SimplicialMesh& mesh);

void write_off(const SimplicialMesh& mesh, const std::string& path);
void write_mesh_text(const SimplicialMesh& mesh, const std::string& path);
void write_field_text(const NodalField& field, const std::string& path);

}  // namespace cvx
