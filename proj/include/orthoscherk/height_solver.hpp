#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orthoscherk/json_io.hpp"
#include "orthoscherk/orthodisk.hpp"
#include "orthoscherk/scmap.hpp"

namespace orthoscherk {

// |exp(1/e1) - exp(1/e2)|^2 + |exp(e1) - exp(e2)|^2, evaluated in log space
// once an exponent exceeds 30 and clamped to the largest finite double.
double height_term(double e1, double e2);
// Natural log of height_term, finite even where height_term saturates.
double log_height_term(double e1, double e2);

struct CycleTerm {
  std::string name;
  double ext_gdh = 0.0;
  double ext_ginvdh = 0.0;
  double term = 0.0;
};

struct HeightReport {
  std::vector<CycleTerm> terms;  // gamma_1 .. gamma_{g-1}, delta
  double total = 0.0;
  double gradient_norm = NAN;  // filled in on request
  std::vector<double> prevertices_gdh;
  std::vector<double> prevertices_ginvdh;
};

// Warm starts for the two prevertex fits, updated after every success.
struct FitCache {
  std::optional<std::vector<double>> gdh;
  std::optional<std::vector<double>> ginvdh;
  // Probes near a boundary stratum, where the prevertices cluster and the
  // fit stalls above the default, may loosen this.
  double fit_tol = 1e-12;
};

struct FittedPair {
  OrthodiskPair pair;
  ConformalPolygon gdh;
  ConformalPolygon ginvdh;
};

FittedPair fit_pair(const GeometricCoords& coords, FitCache* cache = nullptr);

HeightReport height_report(const FittedPair& fitted);
HeightReport total_height(const GeometricCoords& coords, FitCache* cache = nullptr,
                          bool with_gradient = false);

// Closed forms of the two genus-1 edge lengths as functions of the
// prevertex r in (0, 1), and the same lengths by direct quadrature of the
// Schwarz-Christoffel integrands with prevertices -1, -r, 0, r, 1.
double a_gdh(double r);
double a_ginvdh(double r);
double a_gdh_quadrature(double r);
double a_ginvdh_quadrature(double r);
ConformalPolygon karcher_polygon(double r, Domain d);

// Root of a_gdh - a_ginvdh by bisection.
double solve_genus1();
// Geometric coordinates of the genus-1 solution (strip width b matching r).
GeometricCoords genus1_coords(double r_star);

// Collapse of the two short genus-1 edges to length eps, on the simplified
// symmetric maps with the middle prevertex fixed at x3 (bounded away from 0):
//   Gdh:      t^-1 (t-x2)^-1/2 (t-x3)^1/2 (t-x4)^-1/2, x4 - x3 = x3 - x2 = gap
//   G^-1 dh:  t^-1 (t-y2)^1/2 (t-y3)^-1/2 (t-y4)^1/2
// The gaps solve |F(x4) - F(x3)| = eps. The ext values are for arcs in the
// half-plane between [x3 - window, x2] and [x4, x3 + window], which grow
// with the excluded interval. Expected: gap_gdh ~ eps^2, gap_ginvdh ~ eps^(2/3).
struct DegenerationSample {
  double eps = 0.0;
  double gap_gdh = 0.0;
  double gap_ginvdh = 0.0;
  double ext_gdh = 0.0;
  double ext_ginvdh = 0.0;
};
DegenerationSample degeneration_sample(double eps, double x3 = 1.0, double window = 0.5);
// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct TraceEntry {
  int iteration = 0;
  double outer_parameter = 0.0;
  double descent_residual = 0.0;
  double total = 0.0;
};

struct SolveOptions {
  double height_tol = 1e-8;
  double ratio_tol = 1e-10;  // max abs log ext ratio at convergence
  double step_tol = 1e-12;
  double eta = 1e-2;        // regenerated handle edge length
  int max_outer = 500;
  int max_inner = 40;
  double fd_step = 1e-6;
};

struct SolveResult {
  GeometricCoords coords;
  HeightReport report;
  int outer_iterations = 0;
  std::vector<TraceEntry> trace;
};

// Non-convergence of solve_genus; carries the best point found.
struct SolverError : std::runtime_error {
  SolverError(const std::string& msg, GeometricCoords c, HeightReport r)
      : std::runtime_error(msg), best_coords(std::move(c)), best(std::move(r)) {}
  GeometricCoords best_coords;
  HeightReport best;
};

// Inserts a handle of edge length eta at the centre of a genus g-1 staircase
// and renormalizes.
GeometricCoords regenerate_seed(const GeometricCoords& previous, double eta);

// Solves the genus-g period problem. A genus g-1 seed is regenerated first;
// a genus g seed is used as is; without a seed the lower genera are solved
// recursively from the genus-1 solution.
SolveResult solve_genus(int genus, const std::optional<GeometricCoords>& seed = std::nullopt,
                        const SolveOptions& opts = {});

// Paths from a base point toward the boundary strata of the moduli space:
// "l<k>->0" for each edge k = 1..g, "b->c" (strip width down to the diagonal
// offset) and "b->inf". Point j sits at distance f_j = 10^(-depth j/(n-1))
// times the base distance to the stratum (for b->inf, b grows by 1/f_j).
// Between reported points the fits are continued through `substeps` steps.
struct ProbePoint {
  double parameter = 0.0;  // l_k, b - c, or b
  GeometricCoords coords;
  HeightReport report;
  double seconds = 0.0;
};
struct ProbePath {
  std::string stratum;
  std::vector<ProbePoint> points;
  bool strictly_increasing = false;
  std::string error;  // set when a fit failed; points stop there
};
std::vector<std::string> boundary_strata(int genus);
// Default depth in decades for each stratum (how far the path reaches).
double default_probe_depth(const std::string& stratum);
ProbePath properness_path(const GeometricCoords& base, const std::string& stratum, int points = 5,
                          std::optional<double> depth = std::nullopt, int substeps = 8,
                          double fit_tol = 1e-7);

struct ReflexivityResult {
  bool reflexive = false;
  double max_relative_difference = 0.0;
  HeightReport report;
};

ReflexivityResult reflexivity_check(const GeometricCoords& coords, double tol);

struct MonodromyReport {
  double max_defect = 0.0;
  int pairs_tested = 0;
  int pairs_skipped = 0;
};

// Continues t_{j+1} around t_j on both fitted polygons for every admissible
// adjacent pair and compares with F(gamma) + 2 turns F(beta).
MonodromyReport monodromy_test(int genus, const GeometricCoords& coords, int turns = 1);
// The same on a single polygon.
MonodromyReport monodromy_test(const ConformalPolygon& poly, int turns = 1);

Json report_to_json(const HeightReport& r);
Json checkpoint_json(const GeometricCoords& coords, const HeightReport& r,
                     const std::vector<TraceEntry>& trace);

}  // namespace orthoscherk
