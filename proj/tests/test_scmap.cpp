#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "orthoscherk/errors.hpp"
#include "orthoscherk/height_solver.hpp"
#include "orthoscherk/scmap.hpp"

using namespace orthoscherk;

namespace {

// Integrand with principal powers; correct in the open upper half-plane,
// where every factor has argument in (0, pi).
cplx oracle_integrand(const ConformalPolygon& p, cplx t) {
  cplx v = p.scale;
  for (int i = 0; i < p.size(); ++i) v *= std::pow(t - p.prevertices[i], 0.5 * p.exponents[i]);
  return v;
}

cplx oracle_path(const ConformalPolygon& p, cplx a, cplx b) {
  return oracle::simpson([&](double s) { return oracle_integrand(p, a + s * (b - a)) * (b - a); }, 0.0, 1.0,
                         1e-13);
}

ConformalPolygon single_vertex() {
  ConformalPolygon p;
  p.prevertices = {0.0};
  p.exponents = {-1};
  p.exponent_inf = -3;
  return p;
}

}  // namespace

TEST(Validate, ExponentSumDeficitIsRejected) {
  ConformalPolygon p;
  p.prevertices = {-1.0, 0.0, 1.0};
  p.exponents = {1, -1, 1};
  p.exponent_inf = -5;
  EXPECT_NO_THROW(validate(p));
  p.exponent_inf = -3;
  try {
    validate(p);
    FAIL() << "accepted a wrong exponent sum";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("-5"), std::string::npos) << e.what();
  }
}

TEST(Validate, KarcherPolygonsAccepted) {
  EXPECT_NO_THROW(validate(karcher_polygon(0.3, Domain::Gdh)));
  EXPECT_NO_THROW(validate(karcher_polygon(0.3, Domain::GinvDh)));
}

TEST(Validate, EmptyAndUnorderedRejected) {
  ConformalPolygon p;
  p.exponent_inf = -4;
  EXPECT_THROW(validate(p), ValidationError);
  p.prevertices = {1.0, 0.0};
  p.exponents = {-1, -1};
  p.exponent_inf = -2;
  EXPECT_THROW(validate(p), ValidationError);
}

TEST(EvalSc, EmptyPathIsZero) {
  const auto p = karcher_polygon(0.5, Domain::Gdh);
  EXPECT_EQ(eval_sc(p, {0.3, 0.7}, {0.3, 0.7}), cplx(0.0, 0.0));
}

TEST(EvalSc, SquareRootClosedForm) {
  // int_1^4 t^{-1/2} dt = 2 (sqrt 4 - sqrt 1) = 2.
  EXPECT_NEAR(std::abs(eval_sc(single_vertex(), {4.0, 0.0}, {1.0, 0.0}) - cplx(2.0, 0.0)), 0.0, 1e-12);
}

TEST(EvalSc, KarcherIntegrandMatchesSimpsonOracle) {
  const auto p = karcher_polygon(0.5, Domain::Gdh);
  const cplx ours = eval_sc(p, {0.0, 2.0}, {0.0, 1.0});
  const cplx ref = oracle_path(p, {0.0, 1.0}, {0.0, 2.0});
  EXPECT_LT(std::abs(ours - ref), 1e-10 * std::abs(ref));
}

TEST(EvalSc, HomotopicPathsAgree) {
  const auto p = karcher_polygon(0.4, Domain::GinvDh);
  const cplx base(0.1, 0.5), z(-0.7, 0.2);
  const cplx direct = eval_sc(p, z, base);
  for (cplx via : {cplx(0.0, 3.0), cplx(-2.0, 0.1), cplx(0.45, 0.05)}) {
    const cplx two = eval_sc(p, via, base) + eval_sc(p, z, via);
    EXPECT_LT(std::abs(two - direct), 1e-10 * std::abs(direct)) << via;
  }
}

TEST(EvalSc, EndingAtStripPoleIsSingular) {
  const auto p = karcher_polygon(0.5, Domain::Gdh);
  EXPECT_THROW(eval_sc(p, {0.5, 0.0}, {0.2, 0.0}), SingularPathError);
  // Paths along the axis detour above a pole in between.
  EXPECT_NO_THROW(eval_sc(p, {0.7, 0.0}, {0.2, 0.0}));
}

TEST(EdgePeriod, MatchesHypergeometricClosedForm) {
  for (double r : {0.2, 0.5, 0.8}) {
    EXPECT_LT(std::abs(a_gdh_quadrature(r) / a_gdh(r) - 1.0), 1e-10) << r;
    EXPECT_LT(std::abs(a_ginvdh_quadrature(r) / a_ginvdh(r) - 1.0), 1e-10) << r;
  }
}

TEST(EdgePeriod, MirrorEdgesHaveEqualLength) {
  const auto p = karcher_polygon(0.37, Domain::Gdh);
  EXPECT_LT(std::abs(std::abs(edge_period(p, 4)) - std::abs(edge_period(p, -1))), 1e-11);
}

TEST(EdgePeriod, AxisParallelAndAlternating) {
  for (auto d : {Domain::Gdh, Domain::GinvDh}) {
    const auto p = karcher_polygon(0.6, d);
    for (int e : {4, -1}) {
      const cplx v = edge_period(p, e);
      EXPECT_LT(std::min(std::abs(v.real()), std::abs(v.imag())), 1e-12 * std::abs(v));
    }
    // Developed directions turn by a right angle at every finite corner.
    for (int e = 0; e + 1 < p.edge_count(); ++e) {
      const cplx a = edge_direction(p, e), b = edge_direction(p, e + 1);
      const double dot = a.real() * b.real() + a.imag() * b.imag();
      if (p.exponents[e + 1] != -2) {
        EXPECT_LT(std::abs(dot), 1e-9) << e;
      }
    }
    for (int e = 0; e + 2 < p.edge_count(); ++e) {
      if (p.exponents[e + 1] == -2 || p.exponents[e + 2 < p.size() ? e + 2 : e + 1] == -2) continue;
      const cplx a = edge_direction(p, e), b = edge_direction(p, e + 2);
      EXPECT_LT(std::abs(a.real() * b.imag() - a.imag() * b.real()), 1e-9) << e;
    }
  }
}

TEST(EdgePeriod, RunsIntoStripIsDivergent) {
  const auto p = karcher_polygon(0.5, Domain::Gdh);
  EXPECT_THROW(edge_period(p, 0), DivergenceError);
}

TEST(CyclePeriod, EncirclingMatchesDevelopedEdge) {
  for (auto d : {Domain::Gdh, Domain::GinvDh}) {
    const auto p = karcher_polygon(0.45, d);
    EXPECT_NEAR(std::abs(cycle_period(p, Cycle::encircling(4))), std::abs(edge_period(p, 4)), 1e-9);
  }
}

TEST(CyclePeriod, ContractibleLoopVanishes) {
  const auto p = karcher_polygon(0.45, Domain::Gdh);
  EXPECT_LT(std::abs(half_loop_integral(p, circle_loop({0.2, 1.0}, 0.5))), 1e-12);
}

TEST(CyclePeriod, AdjacentEdgesRejected) {
  const auto p = karcher_polygon(0.45, Domain::Gdh);
  EXPECT_THROW(validate_cycle(p, Cycle::connecting(3, 4)), ValidationError);
}

TEST(Continuation, ZeroTurnsIsIdentity) {
  EXPECT_EQ(monodromy_test(karcher_polygon(0.5, Domain::Gdh), 0).max_defect, 0.0);
}

TEST(Continuation, IdentityOnFittedGenusOnePolygons) {
  const auto f = fit_pair(genus1_coords(0.55));
  for (const auto* p : {&f.gdh, &f.ginvdh}) {
    const auto rep = monodromy_test(*p);
    EXPECT_GT(rep.pairs_tested, 0);
    EXPECT_LE(rep.max_defect, 1e-6);
  }
}

TEST(Continuation, BlockedCircleIsGeometryError) {
  ConformalPolygon p;
  p.prevertices = {0.0, 1.0, 1.02};
  p.exponents = {-1, -1, -1};
  p.exponent_inf = -1;
  EXPECT_THROW(continuation_geometry(p, 0), GeometryError);
}

TEST(Mobius, FromPointsHitsTargetsAndInverts) {
  const double src[3] = {-1.0, 0.0, 1.0}, dst[3] = {-0.5, 0.5, 3.0};
  const auto m = Mobius::from_points(src, dst);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(m(src[i]), dst[i], 1e-12) << i;
  for (double t : {-3.0, 0.25, 7.0}) EXPECT_NEAR(m.inverse()(m(t)), t, 1e-10) << t;
}

TEST(Mobius, PullbackKeepsExponentsAndValidity) {
  const auto p = karcher_polygon(0.5, Domain::Gdh);
  const double src[3] = {-1.0, 0.0, 1.0}, dst[3] = {-0.5, 0.5, 3.0};
  const auto q = mobius_pullback(p, Mobius::from_points(dst, src));
  EXPECT_NO_THROW(validate(q));
  int sum_p = p.exponent_inf, sum_q = q.exponent_inf;
  for (int e : p.exponents) sum_p += e;
  for (int e : q.exponents) sum_q += e;
  EXPECT_EQ(sum_p, sum_q);
}
