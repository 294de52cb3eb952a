#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "orthoscherk/height_solver.hpp"
#include "orthoscherk/json_io.hpp"
#include "orthoscherk/mesh.hpp"
#include "orthoscherk/scmap.hpp"

namespace orthoscherk {

// Weierstrass data on the closed upper half-plane of the fitted polygons.
// E_2 = -1 and E_1 = 1 are the punctures. With Gdh and G^{-1}dh the two
// Schwarz-Christoffel integrands on the same prevertices,
//   dh = k dt / (t^2 - 1),   k = sqrt(scale_Gdh * scale_GinvDh),
// since the exponents of the two integrands cancel at every P and V. k is
// real and positive, so dh is real along the whole boundary and each
// boundary arc is a planar symmetry curve in a vertical plane.
struct WeierstrassData {
  int genus = 0;
  ConformalPolygon gdh;
  ConformalPolygon ginvdh;
  cplx k{0.5, 0.0};
  double t = 0.0;  // associate-family angle; forms carry the factor e^{it}

  // Genus 0 also keeps the closed forms on the sphere: G(z) = z and
  // dh = i dz / (z (z^2 + z^{-2} - 2 cos 2 psi)) with psi = phi / 2.
  double phi = 0.0;
  bool has_half_plane = true;

  cplx gdh_at(cplx t) const;
  cplx ginvdh_at(cplx t) const;
  cplx dh_at(cplx t) const;
  cplx g_at(cplx t) const;
  // (omega_1, omega_2, omega_3) per dt, including e^{it}.
  std::array<cplx, 3> omega(cplx t) const;
};

// phi is the angle between the two horizontal end-period vectors, so
// phi = pi/2 is the orthogonal (square lattice) surface. The sphere formula
// is evaluated at psi = phi/2, where the residues are +-1/(4 sin 2 psi).
// Values within 1e-6 of pi/2 are snapped to pi/2; only that case has a
// half-plane chart for patch integration.
WeierstrassData genus0_data(double phi);

cplx genus0_sphere_dh(double phi, cplx z);

// Throws ValidationError when the two fitted polygons disagree by more than
// reflexive_tol (the pair is not reflexive).
WeierstrassData recover_data(const FittedPair& fitted, double reflexive_tol = 1e-7);
WeierstrassData recover_data(const GeometricCoords& coords, double reflexive_tol = 1e-7);

WeierstrassData associate_family(const WeierstrassData& data, double t);

// max |period_Gdh(edge) - conj(period_GinvDh(edge))| over finite edges,
// relative to the largest such period.
double conjugacy_residual(const WeierstrassData& data);

struct PatchOptions {
  double h_cut_lattice = 3.0;  // end truncation in lattice lengths
  double closure_tol = 1e-6;   // relative loop residual that aborts
};

struct PatchReport {
  double max_loop_residual = 0.0;  // relative to the diameter
  double diameter = 0.0;
  double lattice_length = 0.0;     // pi k
  double h_cut = 0.0;
  int nx = 0, ny = 0;
};

// The fundamental quarter, truncated where the height reaches h_cut.
// Genus >= 1 uses the strip zeta = log((t-1)/(t+1)), 0 <= Im zeta <= pi,
// where height is linear in Re zeta. Grid lines pass through every prevertex
// and are graded quadratically toward them.
// Genus 0 uses the square q in [0, w]^2 with t = sl(q/2)^2 (lemniscatic
// sine), on which the forms are Jacobi functions and both corners P and V
// are regular. A uniform grid covers the square; near each end corner it is
// replaced by log-polar rings, which are strip coordinates there.
// Positions accumulate per-edge Gauss integrals along a spanning tree and
// every cell is checked for closure. Vertex boundary tags are the polygon
// edge index of the boundary arc, -2 at corners (P and V), -3 on the cut.
// Throws NotSupportedError without a half-plane chart and PeriodClosureError
// when a cell fails to close.
SurfaceMesh integrate_patch(const WeierstrassData& data, int resolution,
                            const PatchOptions& opts = {}, PatchReport* report = nullptr);

// Stereographic unit normal of G at a vertex parameter.
Vec3 normal_from_g(cplx g);

struct SymmetryPlane {
  Vec3 normal;         // horizontal unit vector
  double offset = 0.0; // plane is normal . x = offset
  int family = 0;      // 0 or 1, by direction
  std::vector<int> segments;
  double max_deviation = 0.0;
};

struct AssemblyReport {
  std::vector<SymmetryPlane> planes;
  double max_seam_gap = 0.0;  // absolute
  double lattice_angle = 0.0; // radians between the two lattice vectors
  double lattice_length_ratio = 0.0;
};

// Interior bisector of the two longest horizontal straight boundary lines
// that meet at one height. On a conjugate quarter these lines are the two
// axis directions of a frame with axis-aligned lattice, so the bisector is
// that frame's diagonal and is the projection direction for graph_check.
// Throws GeometryError when no such pair exists.
Vec3 straight_line_bisector(const SurfaceMesh& patch);

// Fits a vertical plane to every tagged boundary arc of a patch.
std::vector<SymmetryPlane> symmetry_planes(const SurfaceMesh& patch, double tol);

// Reflects the patch across one plane of each family (the four-copy
// fundamental domain) and translates it by the lattice n1 x n2 times. The
// lattice is twice the spacing of the parallel symmetry planes. Throws
// AssemblyError when a seam gap exceeds seam_tol times the diameter.
SurfaceMesh assemble(const SurfaceMesh& patch, int n1, int n2, AssemblyReport* report = nullptr,
                     double seam_tol = 1e-8);

struct PeriodResidual {
  std::string name;
  bool end = false;
  double vertical = 0.0;    // |Re period of dh|
  double horizontal = 0.0;  // |int Gdh - conj int G^{-1}dh|
  Vec3 period{};            // Re of the three coordinate periods
};

// Handle cycles: every finite edge encircled, plus the connecting cycle
// between the two strip-side edges.
std::vector<Cycle> handle_cycles(const WeierstrassData& data);
std::vector<PeriodResidual> verify_periods(const WeierstrassData& data, const std::vector<Cycle>& cycles);
// Periods around the two punctures E_1 and E_2 of the half-plane double.
std::vector<PeriodResidual> end_periods(const WeierstrassData& data);

struct Genus0Check {
  double residue[4] = {0, 0, 0, 0};  // Res dh at e^{i psi}, -e^{-i psi}, -e^{i psi}, e^{-i psi}
  Vec3 period[4]{};                  // Re of the coordinate periods around each puncture
  double max_vertical = 0.0;
  double angle = 0.0;                // between period[0] and period[1]
  double length_ratio = 0.0;
};
// Contour integrals on the sphere around each puncture.
Genus0Check genus0_periods(double phi);

Json periods_to_json(const std::vector<PeriodResidual>& rows);

}  // namespace orthoscherk
