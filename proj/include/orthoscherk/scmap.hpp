#pragma once

#include <complex>
#include <string>
#include <vector>

namespace orthoscherk {

using cplx = std::complex<double>;

// Upper half-plane with marked real prevertices t_0 < ... < t_{n-1} and the
// point at infinity. The integrand is
//   scale * prod (t - t_i)^{a_i / 2}
// with every factor on the branch whose argument lies in [0, pi].
//
// Edges are numbered so that edge k joins t_k and t_{k+1}; edge n-1 runs from
// t_{n-1} out to infinity and edge n (alias -1) comes back from -infinity to
// t_0. The period of an edge is the developed vector F(end) - F(start).
//
// Exponents are odd (corner angles (a+2) pi/2) or -2 (a simple pole, which
// develops onto a half-infinite strip end). A regular point at infinity has
// exponent 0.
struct ConformalPolygon {
  std::vector<double> prevertices;
  std::vector<int> exponents;
  int exponent_inf = 0;
  std::vector<std::string> labels;  // empty or one per prevertex
  std::string label_inf = "V";
  cplx scale{1.0, 0.0};

  int size() const { return static_cast<int>(prevertices.size()); }
  int edge_count() const { return size() + 1; }
};

void validate(const ConformalPolygon& poly);

// Integrand at a point of the closed upper half-plane (principal branch).
cplx sc_integrand(const ConformalPolygon& poly, cplx t);

// F(z) - F(base) along a path in the closed upper half-plane.
cplx eval_sc(const ConformalPolygon& poly, cplx z, cplx base);

cplx edge_period(const ConformalPolygon& poly, int edge);

// Unit direction of an edge in the developed image (known exactly from the
// exponents, so also defined for edges of zero or infinite length).
cplx edge_direction(const ConformalPolygon& poly, int edge);

// Residue of the integrand at a prevertex with exponent -2.
cplx strip_residue(const ConformalPolygon& poly, int vertex);

// A real point inside an edge, used as the place where cycles cross it.
double crossing_point(const ConformalPolygon& poly, int edge);

struct Cycle {
  enum class Kind { Encircling, Connecting };
  Kind kind = Kind::Connecting;
  int edge_a = 0;  // encircled edge, or first connected edge
  int edge_b = 0;  // second connected edge (unused for Encircling)
  int orientation = 1;

  static Cycle encircling(int edge, int orientation = 1) {
    return {Kind::Encircling, edge, edge, orientation};
  }
  static Cycle connecting(int a, int b, int orientation = 1) {
    return {Kind::Connecting, a, b, orientation};
  }
};

// Throws ValidationError unless the cycle's edges exist, are not adjacent
// and are parallel (so that the doubled cycle closes up).
void validate_cycle(const ConformalPolygon& poly, const Cycle& c);

// Pair of edges (i < j in the order -1..n-1) a cycle crosses.
std::pair<int, int> cycle_edges(const ConformalPolygon& poly, const Cycle& c);

// Half the integral over the doubled cycle. For a cycle crossing parallel
// edges i < j with D = F(x_j) - F(x_i) this is i c Im(conj(c) D), c the edge
// direction; it is checked against the edge-sum bookkeeping when all
// intermediate edges are finite.
cplx cycle_period(const ConformalPolygon& poly, const Cycle& c);

// Closed polygonal loop in the plane; its first point must lie in the open
// upper half-plane, where the integrand starts on the principal branch.
struct Loop {
  std::vector<cplx> points;
};

// Clockwise rectangle crossing the real axis at x1 < x2: along the top from
// x1 to x2, then back underneath.
Loop rectangle_loop(double x1, double x2, double height);
// Counterclockwise circle, starting at its top point.
Loop circle_loop(cplx center, double radius, int segments = 128);

// Half the integral of the analytically continued integrand around a loop.
cplx half_loop_integral(const ConformalPolygon& poly, const Loop& loop);

struct ContinuationOptions {
  int steps = 64;     // increments per turn; doubled on disagreement
  int turns = 1;      // signed number of counterclockwise turns
  double tol = 1e-8;  // agreement between step counts
  int max_steps = 1024;
};

struct ContinuationGeometry {
  double rho;          // |t_{j+1} - t_j|
  double finger;       // bump radius used to drag the loop
  double clearance;    // distance from t_j to the nearest other prevertex
};

// Throws GeometryError if t_{j+1} cannot circle t_j without meeting another
// prevertex.
ContinuationGeometry continuation_geometry(const ConformalPolygon& poly, int j);

// Moves t_{j+1} around t_j (counterclockwise, opts.turns times), dragging the
// loop along by a finger-move isotopy and following every branch
// continuously, then returns half the integral around the dragged loop.
cplx continue_loop(const ConformalPolygon& poly, int j, const Loop& loop,
                   const ContinuationOptions& opts = {});

// Period of a cycle after analytic continuation of t_{j+1} around t_j.
cplx continue_period(const ConformalPolygon& poly, int j, const Cycle& c,
                     const ContinuationOptions& opts = {});

// Rectangle loop representing a cycle, tall enough to stay clear of the
// continuation of t_{j+1} around t_j when j >= 0.
Loop cycle_loop(const ConformalPolygon& poly, const Cycle& c, int j = -1);

// Real Moebius map t -> (a t + b) / (c t + d) with ad - bc > 0.
struct Mobius {
  double a = 1, b = 0, c = 0, d = 1;
  double operator()(double t) const;  // accepts and returns +-inf
  Mobius inverse() const { return {d, -b, -c, a}; }
  // The map sending three increasing (cyclically ordered) points to three
  // others; infinities are allowed.
  static Mobius from_points(const double src[3], const double dst[3]);
};

// Pulls the polygon back by a Moebius map: the new prevertices are the
// preimages of the old ones and the point sent to infinity becomes regular.
// Periods change only by one overall constant factor.
ConformalPolygon mobius_pullback(const ConformalPolygon& poly, const Mobius& m);

}  // namespace orthoscherk
