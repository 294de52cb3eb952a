#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace orthoscherk {

using Vec3 = std::array<double, 3>;

struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Vec3> normals;                // per vertex, may be empty
  std::array<Vec3, 2> lattice{};            // horizontal period vectors
  std::vector<int> boundary_segment;        // per vertex; -1 in the interior
  std::vector<std::string> provenance;      // per triangle block, e.g. "patch", "R_A"
  std::vector<int> triangle_block;          // per triangle index into provenance
  int rows = 0;                             // structured patches: grid shape
  int cols = 0;
};

// ASCII OBJ with `v`, `vn` and `f` records at 12 significant digits.
void write_obj(const SurfaceMesh& mesh, std::ostream& out, const std::string& comment = "");
// Binary little-endian PLY with positions, normals when present, and faces.
void write_ply(const SurfaceMesh& mesh, std::ostream& out, const std::string& comment = "");

// Area-weighted vertex normals from the triangles.
std::vector<Vec3> vertex_normals(const SurfaceMesh& mesh);

// Per vertex |cotangent Laplacian| / (one third of the adjacent area); NaN on
// the boundary.
std::vector<double> mean_curvature_field(const SurfaceMesh& mesh);
// Max over interior vertices of |cotangent Laplacian of the position|, which
// equals twice the mean curvature. Throws TopologyError for an edge shared by
// more than two triangles.
double mean_curvature_residual(const SurfaceMesh& mesh);
// The same multiplied by the bounding-box diameter (scale free).
double relative_mean_curvature(const SurfaceMesh& mesh);

double diameter(const SurfaceMesh& mesh);

// V - E + F after merging vertices closer than tol. With nonzero lattice
// vectors, positions are also identified modulo the horizontal lattice.
int euler_characteristic(const SurfaceMesh& mesh, double tol, bool modulo_lattice = false);

struct GraphCheck {
  bool injective = false;
  double min_separation = 0.0;  // smallest gap between non-adjacent boundary edges
  int flipped_triangles = 0;
  int boundary_crossings = 0;
};

// Projects along `direction` and tests that the projected triangulation has a
// consistent orientation and a simple boundary. For conjugate quarters pass
// straight_line_bisector(patch); the default suits the genus 0 quarter.
GraphCheck graph_check(const SurfaceMesh& mesh, const Vec3& direction = {0.0, 1.0, 0.0});

}  // namespace orthoscherk
