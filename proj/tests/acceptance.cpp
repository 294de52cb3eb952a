// Runs the ten acceptance criteria and prints one PASS/FAIL line per
// criterion with its measured quantities and runtime. Exits 1 when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "orthoscherk/height_solver.hpp"
#include "orthoscherk/specfun.hpp"
#include "orthoscherk/weierstrass.hpp"

using namespace orthoscherk;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
  double limit_seconds = 0.0;  // 0: no runtime gate
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome c1_hypergeometric() {
  struct P {
    double a, b, c, x;
  };
  std::vector<P> grid;
  for (double x : {0.0, 0.1, 0.3, 0.5, 0.8, 0.95, 0.99}) {
    grid.push_back({0.25, 1.0, 1.75, x});
    grid.push_back({0.75, 1.0, 1.25, x});
  }
  for (const P& p : {P{0.5, 0.5, 1.0, 0.7}, P{1.5, -0.5, 2.5, 0.4}, P{-2.0, 1.3, 0.7, 0.6},
                     P{2.0, 3.0, 4.5, 0.8}, P{0.1, 0.2, 0.3, 0.9}, P{1.0, 1.0, 2.0, 0.5}})
    grid.push_back(p);
  double worst = 0.0;
  for (const P& p : grid) {
    const long double ref = oracle::hyp2f1_series(p.a, p.b, p.c, p.x);
    worst = std::max(worst, double(std::fabs((hyp2f1(p.a, p.b, p.c, p.x) - ref) / ref)));
  }
  return {worst <= 1e-12, fmt("%zu points, max rel err %.2e", grid.size(), worst), 1.0};
}

Outcome c2_boundary_values() {
  const double near1 = a_gdh(1.0 - 1e-6) - kPi / 2;
  const double inv0 = a_ginvdh(1e-4), dir0 = a_gdh(1e-4);
  const bool pass = std::abs(near1) <= 1e-4 && inv0 <= 0.1 && dir0 >= 10.0;
  return {pass,
          fmt("A_Gdh(1-1e-6) - pi/2 = %.3e (gate 1e-4; the gap closes like sqrt(1-r)), A_1/Gdh(1e-4) = %.3e, "
              "A_Gdh(1e-4) = %.3e",
              near1, inv0, dir0),
          1.0};
}

Outcome c3_genus_one() {
  const double r = solve_genus1();
  const double diff = std::abs(a_gdh(r) - a_ginvdh(r));
  const double qg = std::abs(a_gdh_quadrature(r) - a_gdh(r));
  const double qi = std::abs(a_ginvdh_quadrature(r) - a_ginvdh(r));
  return {diff <= 1e-12 && qg <= 1e-7 && qi <= 1e-7,
          fmt("r* = %.17g, |A-A| = %.2e, quadrature vs closed form %.2e / %.2e", r, diff, qg, qi), 10.0};
}

Outcome c4_genus_zero() {
  const auto g = genus0_periods(kPi / 2);
  double res = 0.0;
  for (double v : g.residue) res = std::max(res, std::abs(std::abs(v) - 0.25));
  const bool pass = g.max_vertical <= 1e-10 && std::abs(g.angle - kPi / 2) <= 1e-8 &&
                    std::abs(g.length_ratio - 1.0) <= 1e-8 && res <= 1e-10 &&
                    std::abs(g.period[0][2]) + std::abs(g.period[1][2]) <= 1e-8;
  return {pass,
          fmt("vertical %.2e, angle - pi/2 = %.2e, length ratio - 1 = %.2e, |residue| - 1/4 = %.2e", g.max_vertical,
              g.angle - kPi / 2, g.length_ratio - 1.0, res),
          5.0};
}

Outcome c5_monodromy() {
  const auto m1 = monodromy_test(1, genus1_coords(solve_genus1()));
  const auto m2 = monodromy_test(2, solve_genus(2).coords);
  const bool pass = m1.pairs_tested > 0 && m2.pairs_tested > 0 && m1.max_defect <= 1e-6 && m2.max_defect <= 1e-6;
  return {pass,
          fmt("genus 1: defect %.2e over %d pairs; genus 2: defect %.2e over %d pairs", m1.max_defect,
              m1.pairs_tested, m2.max_defect, m2.pairs_tested),
          30.0};
}

Outcome c6_degeneration() {
  std::vector<double> eps{1e-2, 3e-3, 1e-3, 3e-4}, gg, gi;
  bool ordered = true;
  std::string exts;
  for (double e : eps) {
    const auto s = degeneration_sample(e);
    gg.push_back(s.gap_gdh);
    gi.push_back(s.gap_ginvdh);
    ordered = ordered && s.ext_gdh < s.ext_ginvdh;
    exts += fmt(" %.3g<%.3g", s.ext_gdh, s.ext_ginvdh);
  }
  const double sg = loglog_slope(eps, gg), si = loglog_slope(eps, gi);
  const bool pass = std::abs(sg - 2.0) <= 0.1 && std::abs(si - 2.0 / 3.0) <= 0.05 && ordered;
  return {pass, fmt("slopes %.4f (Gdh) and %.4f (G^-1dh); ext:", sg, si) + exts, 60.0};
}

bool check_solution(const SolveResult& s, std::string& detail) {
  double ratio = 0.0;
  for (const auto& t : s.report.terms) ratio = std::max(ratio, std::abs(t.ext_gdh / t.ext_ginvdh - 1.0));
  const auto d = recover_data(s.coords);
  double period = 0.0;
  for (const auto& r : verify_periods(d, handle_cycles(d))) period = std::max({period, r.vertical, r.horizontal});
  detail += fmt("g=%d: H %.2e, ext ratio %.2e, periods %.2e, %d iterations; ", s.coords.genus, s.report.total,
                ratio, period, s.outer_iterations);
  return s.report.total <= 1e-8 && ratio <= 1e-6 && period <= 1e-6;
}

Outcome c7_higher_genus() {
  std::string detail;
  const auto s2 = solve_genus(2);
  bool pass = check_solution(s2, detail);
  const auto s3 = solve_genus(3, s2.coords);
  pass = check_solution(s3, detail) && pass;
  return {pass, detail, 1200.0};
}

Outcome c8_properness() {
  const auto base = solve_genus(2).coords;
  bool pass = true;
  std::string detail;
  for (const auto& stratum : boundary_strata(2)) {
    const auto p = properness_path(base, stratum, 5);
    const double last = p.points.empty() ? 0.0 : p.points.back().report.total;
    const bool ok = p.strictly_increasing && p.points.size() == 5 && last >= 1e6;
    pass = pass && ok;
    detail += fmt("%s %s final %.3g%s; ", stratum.c_str(), p.strictly_increasing ? "increasing" : "NOT increasing",
                  last, p.error.empty() ? "" : (" (" + p.error + ")").c_str());
  }
  return {pass, detail};
}

Outcome c9_minimality() {
  const auto d = genus0_data(kPi / 2);
  std::vector<double> curv;
  double loop = 0.0;
  for (int res : {8, 16, 32}) {
    PatchReport rep;
    const auto m = integrate_patch(d, res, {}, &rep);
    curv.push_back(mean_curvature_residual(m));
    loop = std::max(loop, rep.max_loop_residual);
  }
  const double r1 = curv[0] / curv[1], r2 = curv[1] / curv[2];
  const bool pass = std::abs(r1 - 4.0) <= 1.2 && std::abs(r2 - 4.0) <= 1.2 && loop <= 1e-8;
  return {pass, fmt("curvature ratios %.3f, %.3f; loop residual %.2e x diameter", r1, r2, loop)};
}

Outcome c10_embeddedness() {
  const WeierstrassData data[3] = {genus0_data(kPi / 2), recover_data(genus1_coords(solve_genus1())),
                                   recover_data(solve_genus(2).coords)};
  bool pass = true;
  std::string detail = "numerical evidence, not a proof: ";
  for (const auto& d : data) {
    const auto q = integrate_patch(associate_family(d, kPi / 2), 16);
    const Vec3 dir = straight_line_bisector(q);
    const auto g = graph_check(q, dir);
    pass = pass && g.injective;
    detail += fmt("g=%d dir (%.3f, %.3f, %.3f) %s, min separation %.2e; ", d.genus, dir[0], dir[1], dir[2],
                  g.injective ? "injective" : "NOT injective", g.min_separation);
  }
  return {pass, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1 hypergeometric golden values", c1_hypergeometric},
      {"2 boundary values of A", c2_boundary_values},
      {"3 genus-1 solve", c3_genus_one},
      {"4 genus-0 Scherk periods", c4_genus_zero},
      {"5 monodromy identity", c5_monodromy},
      {"6 degeneration asymptotics", c6_degeneration},
      {"7 genus-2 and genus-3 solve", c7_higher_genus},
      {"8 properness probe", c8_properness},
      {"9 mesh minimality", c9_minimality},
      {"10 embeddedness evidence", c10_embeddedness},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.limit_seconds > 0.0 && secs > o.limit_seconds) {
      o.pass = false;
      o.detail += fmt(" [runtime gate %.0f s exceeded]", o.limit_seconds);
    }
    std::printf("%s criterion %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed > 0 ? 1 : 0;
}
