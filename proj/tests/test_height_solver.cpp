#include <gtest/gtest.h>

#include <cfloat>
#include <cmath>

#include "orthoscherk/errors.hpp"
#include "orthoscherk/extlen.hpp"
#include "orthoscherk/height_solver.hpp"

using namespace orthoscherk;

namespace frozen {
// 30-digit evaluations of the defining formulas.
constexpr double kTerm12 = 22.960092072413120;          // height_term(1, 2)
constexpr double kTermClose = 8.7628798377467066e-12;   // height_term(0.5, 0.5000001)
constexpr double kLogTermSmall = 200.0;                 // log height_term(0.01, 0.02)
// Root of the two hypergeometric edge lengths by 30-digit root finding.
constexpr double kRStar = 0.55937026079922304;
constexpr double kAStar = 1.6601445882801687;
}  // namespace frozen

namespace {

GeometricCoords genus2(double l1, double b) {
  GeometricCoords c;
  c.genus = 2;
  c.edges = {l1};
  c.b = b;
  return c;
}

const SolveResult& genus2_solution() {
  static const SolveResult s = solve_genus(2);
  return s;
}

}  // namespace

TEST(HeightTerm, FrozenValues) {
  EXPECT_NEAR(height_term(1.0, 2.0), frozen::kTerm12, 1e-13 * frozen::kTerm12);
  EXPECT_NEAR(height_term(0.5, 0.5000001), frozen::kTermClose, 1e-6 * frozen::kTermClose);
  EXPECT_NEAR(log_height_term(0.01, 0.02), frozen::kLogTermSmall, 1e-12);
}

TEST(HeightTerm, ZeroOnDiagonalAndSymmetric) {
  for (double e : {1e-3, 0.2, 1.0, 7.0, 80.0}) EXPECT_EQ(height_term(e, e), 0.0) << e;
  for (double a : {0.05, 0.7, 3.0})
    for (double b : {0.06, 1.1, 40.0}) EXPECT_DOUBLE_EQ(height_term(a, b), height_term(b, a));
}

TEST(HeightTerm, SaturatesWithoutOverflow) {
  EXPECT_EQ(height_term(1e-3, 2e-3), DBL_MAX);
  EXPECT_TRUE(std::isfinite(log_height_term(1e-5, 2e-5)));
  EXPECT_NEAR(log_height_term(1e-3, 2e-3), 2000.0, 1e-9);
  EXPECT_THROW(height_term(0.0, 1.0), DomainError);
}

TEST(HeightTerm, GrowsAwayFromDiagonal) {
  double last = 0.0;
  for (double b : {1.01, 1.1, 1.5, 2.0, 4.0}) {
    const double h = height_term(1.0, b);
    EXPECT_GT(h, last);
    last = h;
  }
}

TEST(GenusOne, RootMatchesFrozenHypergeometricRoot) {
  const double r = solve_genus1();
  EXPECT_NEAR(r, frozen::kRStar, 1e-13);
  EXPECT_NEAR(a_gdh(r), frozen::kAStar, 1e-12);
  EXPECT_LE(std::abs(a_gdh(r) - a_ginvdh(r)), 1e-12);
}

TEST(GenusOne, SolutionHasZeroHeight) {
  const auto rep = total_height(genus1_coords(solve_genus1()));
  EXPECT_LE(rep.total, 1e-8);
  ASSERT_EQ(rep.terms.size(), 1u);
  EXPECT_EQ(rep.terms[0].name, "delta");
}

TEST(GenusOne, EdgeLengthsCrossOnce) {
  int changes = 0;
  double last = a_gdh(0.01) - a_ginvdh(0.01);
  for (double r = 0.02; r < 1.0; r += 0.01) {
    const double d = a_gdh(r) - a_ginvdh(r);
    if ((d > 0) != (last > 0)) ++changes;
    last = d;
  }
  EXPECT_EQ(changes, 1);
  EXPECT_GT(a_gdh(0.3), a_ginvdh(0.3));
  EXPECT_LT(a_gdh(0.8), a_ginvdh(0.8));
}

TEST(TotalHeight, PositiveOffTheSolution) {
  const auto rep = total_height(genus2(0.15, 0.6), nullptr, true);
  EXPECT_GT(rep.total, 1.0);
  EXPECT_TRUE(std::isfinite(rep.gradient_norm));
  EXPECT_GT(rep.gradient_norm, 0.0);
  double sum = 0.0;
  for (const auto& t : rep.terms) sum += height_term(t.ext_gdh, t.ext_ginvdh);
  EXPECT_NEAR(rep.total, sum, 1e-12 * sum);
}

TEST(Solve, GenusTwoMatchesExtremalLengths) {
  const auto& s = genus2_solution();
  EXPECT_LE(s.report.total, 1e-8);
  for (const auto& t : s.report.terms) EXPECT_NEAR(t.ext_gdh / t.ext_ginvdh, 1.0, 1e-6) << t.name;
  // Regression values of this implementation.
  EXPECT_NEAR(s.coords.edges[0], 0.18208803921577288, 1e-8);
  EXPECT_NEAR(s.coords.b, 0.538990258292059, 1e-8);
  EXPECT_GT(s.coords.b, s.coords.diagonal_offset());
}

TEST(Solve, GenusThreeFromRegeneratedSeed) {
  const auto s = solve_genus(3, genus2_solution().coords);
  EXPECT_LE(s.report.total, 1e-8);
  for (const auto& t : s.report.terms) EXPECT_NEAR(t.ext_gdh / t.ext_ginvdh, 1.0, 1e-6) << t.name;
  EXPECT_NEAR(s.coords.b, 0.430473260033673, 1e-8);
}

TEST(Solve, SolutionIsAFixedPoint) {
  const auto again = solve_genus(2, genus2_solution().coords);
  EXPECT_LE(again.outer_iterations, 2);
  EXPECT_NEAR(again.coords.edges[0], genus2_solution().coords.edges[0], 1e-10);
}

TEST(Solve, BudgetExhaustionCarriesBestPoint) {
  SolveOptions o;
  o.max_outer = 1;
  try {
    solve_genus(3, genus2_solution().coords, o);
    FAIL() << "one outer step cannot converge from the regenerated seed";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.best_coords.genus, 3);
    EXPECT_GT(e.best.total, 0.0);
  }
}

TEST(Solve, RegeneratedSeedInsertsShortHandle) {
  const auto seed = regenerate_seed(genus2_solution().coords, 1e-2);
  EXPECT_EQ(seed.genus, 3);
  ASSERT_EQ(seed.edges.size(), 2u);
  EXPECT_NO_THROW(validate(seed));
  double sum = 0.0;
  for (double l : seed.edges) sum += l;
  const double central = 0.5 - sum;
  EXPECT_LT(central, 2e-2);
  for (double l : seed.edges) EXPECT_GT(l, central);
}

TEST(Reflexivity, TrueOnlyAtTheSolution) {
  EXPECT_TRUE(reflexivity_check(genus2_solution().coords, 1e-6).reflexive);
  const auto off = reflexivity_check(genus2(0.15, 0.6), 1e-6);
  EXPECT_FALSE(off.reflexive);
  EXPECT_GT(off.max_relative_difference, 1e-2);
}

TEST(Monodromy, FittedPolygonsSatisfyIdentity) {
  const auto m1 = monodromy_test(1, genus1_coords(solve_genus1()));
  EXPECT_GT(m1.pairs_tested, 0);
  EXPECT_LE(m1.max_defect, 1e-6);
  const auto m2 = monodromy_test(2, genus2_solution().coords);
  EXPECT_GT(m2.pairs_tested, 0);
  EXPECT_LE(m2.max_defect, 1e-6);
  // Also away from the solution.
  const auto m3 = monodromy_test(2, genus2(0.15, 0.6));
  EXPECT_LE(m3.max_defect, 1e-6);
  EXPECT_LE(monodromy_test(2, genus2(0.15, 0.6), 0).max_defect, 1e-14);
}

TEST(Degeneration, LogLogSlopeOfExactPowers) {
  const std::vector<double> x{1e-2, 3e-3, 1e-3, 3e-4};
  std::vector<double> y;
  for (double v : x) y.push_back(5.0 * std::pow(v, 1.5));
  EXPECT_NEAR(loglog_slope(x, y), 1.5, 1e-12);
}

TEST(Degeneration, GapExponents) {
  std::vector<double> eps{1e-2, 3e-3, 1e-3, 3e-4}, gg, gi;
  for (double e : eps) {
    const auto s = degeneration_sample(e);
    gg.push_back(s.gap_gdh);
    gi.push_back(s.gap_ginvdh);
    EXPECT_LT(s.ext_gdh, s.ext_ginvdh) << e;
  }
  EXPECT_NEAR(loglog_slope(eps, gg), 2.0, 0.1);
  EXPECT_NEAR(loglog_slope(eps, gi), 2.0 / 3.0, 0.05);
}

TEST(Properness, StrataNamesAndOneShortPath) {
  EXPECT_EQ(boundary_strata(2), (std::vector<std::string>{"l1->0", "l2->0", "b->c", "b->inf"}));
  const auto path = properness_path(genus2_solution().coords, "b->inf", 3);
  EXPECT_TRUE(path.error.empty()) << path.error;
  ASSERT_EQ(path.points.size(), 3u);
  EXPECT_TRUE(path.strictly_increasing);
  EXPECT_LT(path.points.front().report.total, 1e-6);
  EXPECT_THROW(properness_path(genus2_solution().coords, "l7->0"), ValidationError);
}

TEST(Json, CheckpointCarriesCoordinates) {
  const auto& s = genus2_solution();
  const Json j = checkpoint_json(s.coords, s.report, s.trace);
  EXPECT_EQ(j.at("genus").get<int>(), 2);
  EXPECT_DOUBLE_EQ(j.at("b").get<double>(), s.coords.b);
}
