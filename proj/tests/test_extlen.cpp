#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "orthoscherk/errors.hpp"
#include "orthoscherk/extlen.hpp"
#include "orthoscherk/height_solver.hpp"
#include "orthoscherk/orthodisk.hpp"

using namespace orthoscherk;

// Frozen oracle values: the ratio of the two side integrals of
// dt / sqrt|(t-a)(t-b)(t-c)(t-d)|, by 30-digit adaptive quadrature.
namespace frozen {
constexpr double kRect_2 = 1.5634019226961115;        // (-2, -1, 1, 2)
constexpr double kGeneric = 1.3222490492286070;       // (0, 1, 3, 7)
constexpr double kLopsided = 1.0847188912040999;      // (-1, -0.25, 0.5, 4)
constexpr double kEncircle = 2.4588912747472039;      // 2 x (-0.7, -0.3, 0, 0.3)
constexpr double kComposite = 1.3902642310276057;     // (-1, -0.7, -0.3, 0)
constexpr double kK036 = 1.7507538029157525;          // K(m = 0.36)
constexpr double kK099 = 3.6956373629898742;          // K(m = 0.99)
}  // namespace frozen

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(EllipticK, MatchesFrozenValues) {
  EXPECT_NEAR(elliptic_k(0.6), frozen::kK036, 1e-14);
  EXPECT_NEAR(elliptic_k(std::sqrt(0.99)), frozen::kK099, 1e-13);
  EXPECT_NEAR(elliptic_k(0.0), std::numbers::pi / 2, 1e-15);
}

TEST(FourPoint, FrozenQuadratureValues) {
  EXPECT_NEAR(ext_four_point(-2, -1, 1, 2), frozen::kRect_2, 1e-13);
  EXPECT_NEAR(ext_four_point(0, 1, 3, 7), frozen::kGeneric, 1e-13);
  EXPECT_NEAR(ext_four_point(-1, -0.25, 0.5, 4), frozen::kLopsided, 1e-13);
}

TEST(FourPoint, SquareHasUnitModulus) {
  // 2K(k) = K(k') at k = (sqrt 2 - 1)^2.
  const double k = 3.0 - 2.0 * std::sqrt(2.0);
  EXPECT_NEAR(ext_four_point(-1.0 / k, -1.0, 1.0, 1.0 / k), 1.0, 1e-13);
}

TEST(FourPoint, ReciprocalWhenSidesSwap) {
  // Arcs between the other pair of sides: the conjugate family.
  for (double d : {3.0, 5.0, 40.0}) {
    const double e = ext_four_point(-kInf, 1, 2, d);
    EXPECT_NEAR(e * ext_four_point(1, 2, d, kInf), 1.0, 1e-12) << d;
  }
}

TEST(FourPoint, MobiusInvariant) {
  const double pts[4] = {0, 1, 3, 7};
  // Affine maps.
  EXPECT_NEAR(ext_four_point(5, 7, 11, 19), frozen::kGeneric, 1e-13);
  // t -> -1/t sends 0 to infinity and keeps the cyclic order.
  EXPECT_NEAR(ext_four_point(-kInf, -1.0 / pts[1], -1.0 / pts[2], -1.0 / pts[3]), frozen::kGeneric, 1e-13);
  // t -> (t - 1) / (t + 2) with the pole outside the points.
  auto m = [](double t) { return (t - 1.0) / (t + 2.0); };
  EXPECT_NEAR(ext_four_point(m(0), m(1), m(3), m(7)), frozen::kGeneric, 1e-13);
}

TEST(FourPoint, MonotoneInTheSides) {
  // A longer target side admits more curves: ext decreases.
  double last = kInf;
  for (double d : {2.5, 3.0, 5.0, 9.0, 50.0}) {
    const double e = ext_four_point(-0.5, 0, 2, d);
    EXPECT_LT(e, last) << d;
    last = e;
  }
  // Moving the sides apart increases ext.
  last = 0.0;
  for (double gap : {0.01, 0.1, 0.5, 1.0, 3.0}) {
    const double e = ext_four_point(-5, -gap, gap, 5);
    EXPECT_GT(e, last) << gap;
    last = e;
  }
}

TEST(FourPoint, LogarithmicAsymptoticsOfNarrowGap) {
  // ext(-1, -e, e, 1) = pi / (log(1/e) + log 4) up to O(e^2).
  for (double e : {1e-4, 1e-8}) {
    const double ratio = ext_four_point(-1, -e, e, 1) * (std::log(1.0 / e) + std::log(4.0)) / std::numbers::pi;
    EXPECT_NEAR(ratio, 1.0, 1e-9) << e;
  }
}

TEST(FourPoint, DegenerateInputsRejected) {
  EXPECT_THROW(ext_four_point(0, 1, 1, 2), DegenerateError);
  EXPECT_THROW(ext_four_point(0, 2, 1, 3), DegenerateError);
}

TEST(Families, EncirclingAndCompositeMatchOracle) {
  const auto p = symmetric_polygon(2, Domain::Gdh, {-0.7, -0.3});
  EXPECT_NEAR(ext_encircling(p, Cycle::encircling(2)), frozen::kEncircle, 1e-12);
  const auto fams = height_families(2, Domain::Gdh);
  ASSERT_EQ(fams.size(), 2u);
  EXPECT_EQ(fams[0].name, "gamma_1");
  EXPECT_EQ(fams[1].name, "delta");
  EXPECT_TRUE(fams[0].composite);
  EXPECT_NEAR(ext_family(p, fams[0]), frozen::kComposite, 1e-12);
  EXPECT_NEAR(ext_composite(p, fams[0]), 0.5 * ext_encircling(p, Cycle::encircling(1)), 1e-15);
}

TEST(Families, AsymmetricCompositeRejected) {
  auto p = symmetric_polygon(2, Domain::Gdh, {-0.7, -0.3});
  p.prevertices[5] = 0.6;
  EXPECT_THROW(ext_composite(p, height_families(2, Domain::Gdh)[0]), NotSupportedError);
}

TEST(Families, AdjacentConnectingRejected) {
  const auto p = symmetric_polygon(2, Domain::Gdh, {-0.7, -0.3});
  EXPECT_THROW(ext_connecting(p, Cycle::connecting(2, 3)), DegenerateError);
}

TEST(Degeneration, GdhSideStaysShorter) {
  for (double eps : {1e-2, 1e-3}) {
    const auto s = degeneration_sample(eps);
    EXPECT_LT(s.ext_gdh, s.ext_ginvdh) << eps;
    EXPECT_LT(s.gap_gdh, s.gap_ginvdh) << eps;
  }
}
