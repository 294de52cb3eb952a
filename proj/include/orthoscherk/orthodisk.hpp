#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "orthoscherk/scmap.hpp"

namespace orthoscherk {

enum class Domain { Gdh, GinvDh };

const char* domain_name(Domain d);

// Coordinates on the moduli space of genus-g staircase pairs. The staircase
// runs from P_0 to P_{2g} with edge lengths l_1..l_{2g}, symmetric under the
// reflection in y = -x (l_{2g+1-k} = l_k) and normalized so that all finite
// edges add up to 1. Only l_1..l_{g-1} are stored; l_g = 1/2 - their sum.
struct GeometricCoords {
  int genus = 1;
  std::vector<double> edges;  // l_1 .. l_{g-1}
  double b = 1.0;             // width of the half-infinite strips

  // l_1 .. l_{2g}
  std::vector<double> all_edges() const;
  // Offset c of the diagonal vertex P_g = (c, -c).
  double diagonal_offset() const;
  // P_0 = (0, -a), P_{2g} = (a, 0).
  double corner_offset() const;
};

// Throws ValidationError (or BoundaryStratumError when b <= c).
void validate(const GeometricCoords& coords);

// Builds coordinates from g relative lengths of l_1..l_g, rescaled so that
// the whole staircase has length 1; b is taken in the rescaled units.
GeometricCoords coords_from_lengths(int genus, const std::vector<double>& lengths, double b);

// A developed orthodisk. Vertices are P_0..P_{2g} followed by V; the two
// strip ends E_2 (before P_0) and E_1 (after P_{2g}) sit at infinity. The
// upper-left domain is drawn as is; the lower-right one is stored complex
// conjugated so that both are traversed E_2, P_0, ..., P_{2g}, E_1, V with
// the domain on the left.
struct Orthodisk {
  bool upper_left = true;
  std::vector<cplx> vertices;        // P_0..P_{2g}, V
  std::vector<std::string> labels;   // same order
  std::vector<int> angles;           // interior angle in units of pi/2
  std::vector<cplx> edge_vectors;    // P_{k-1} -> P_k, k = 1..2g
  double strip_width = 0.0;          // both ends
};

struct OrthodiskPair {
  GeometricCoords coords;
  double c = 0.0;  // diagonal offset, exposed for the b > c check
  double a = 0.0;
  Orthodisk gdh;
  Orthodisk ginvdh;

  const Orthodisk& domain(Domain d) const { return d == Domain::Gdh ? gdh : ginvdh; }
};

OrthodiskPair build_pair(const GeometricCoords& coords);

struct ExponentData {
  std::vector<int> finite;  // E_2, P_0..P_{2g}, E_1
  int at_infinity = 0;      // V
};

ExponentData vertex_exponents(int genus, Domain domain);

struct FitOptions {
  double tol = 1e-12;                    // max |log length ratio| residual
  int max_iterations = 60;
  std::optional<std::vector<double>> seed;  // p_0..p_{g-1} in (-1, 0)
};

struct FitReport {
  int iterations = 0;
  double residual = 0.0;
  bool used_continuation = false;
};

// Prevertices E_2 = -1, P_0..P_{g-1} = p_0..p_{g-1}, P_g = 0, the mirror
// images, E_1 = 1 and V at infinity. The returned polygon carries a scale
// that makes its developed image coincide with the drawn domain up to
// translation.
ConformalPolygon fit_prevertices(const OrthodiskPair& pair, Domain domain,
                                 const FitOptions& opts = {}, FitReport* report = nullptr);

// Free prevertex parameters p_0..p_{g-1} of a fitted polygon.
std::vector<double> free_prevertices(const ConformalPolygon& poly, int genus);

// Assembles the symmetric polygon for given p_0..p_{g-1} (scale 1).
ConformalPolygon symmetric_polygon(int genus, Domain domain, const std::vector<double>& p);

// Developed positions of P_0..P_{2g}, translated so that P_0 matches the
// drawn domain.
std::vector<cplx> develop(const ConformalPolygon& poly, const Orthodisk& target);

// max |period_Gdh - conj(period_GinvDh)| over finite edges and strip widths.
double conjugacy_residual(const OrthodiskPair& pair);

// Gap g_k between consecutive prevertices of the fitted polygon,
// g_0 = p_0 + 1, g_k = p_k - p_{k-1}, g_g = -p_{g-1}.
std::vector<double> prevertex_gaps(const ConformalPolygon& poly, int genus);

std::string coords_to_json(const GeometricCoords& coords,
                           const std::vector<double>& prevertices_gdh,
                           const std::vector<double>& prevertices_ginvdh);
struct CheckpointData {
  GeometricCoords coords;
  std::vector<double> prevertices_gdh;
  std::vector<double> prevertices_ginvdh;
};
CheckpointData coords_from_json(const std::string& text);

}  // namespace orthoscherk
