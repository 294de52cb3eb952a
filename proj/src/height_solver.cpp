#include "orthoscherk/height_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cfloat>
#include <cmath>
#include <numbers>

#include "orthoscherk/errors.hpp"
#include "orthoscherk/extlen.hpp"
#include "orthoscherk/quadrature.hpp"
#include "orthoscherk/specfun.hpp"

namespace orthoscherk {

namespace {

// log |exp(x) - exp(y)|^2, -inf when x == y.
double log_sq_diff_exp(double x, double y) {
  const double hi = std::max(x, y), d = std::abs(x - y);
  if (d == 0.0) return -INFINITY;
  return 2.0 * (hi + std::log(-std::expm1(-d)));
}

double log_add(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

double log_height_term(double e1, double e2) {
  if (!(e1 > 0.0) || !(e2 > 0.0)) throw DomainError("height_term: extremal lengths must be positive");
  return log_add(log_sq_diff_exp(1.0 / e1, 1.0 / e2), log_sq_diff_exp(e1, e2));
}

double height_term(double e1, double e2) {
  if (!(e1 > 0.0) || !(e2 > 0.0)) throw DomainError("height_term: extremal lengths must be positive");
  if (std::max({1.0 / e1, 1.0 / e2, e1, e2}) <= 30.0) {
    const double a = std::exp(1.0 / e1) - std::exp(1.0 / e2);
    const double b = std::exp(e1) - std::exp(e2);
    return a * a + b * b;
  }
  const double l = log_height_term(e1, e2);
  return l >= std::log(DBL_MAX) ? DBL_MAX : std::exp(l);
}

FittedPair fit_pair(const GeometricCoords& coords, FitCache* cache) {
  FittedPair f;
  f.pair = build_pair(coords);
  FitOptions og, oi;
  if (cache) {
    og.seed = cache->gdh;
    oi.seed = cache->ginvdh;
    og.tol = oi.tol = cache->fit_tol;
  }
  f.gdh = fit_prevertices(f.pair, Domain::Gdh, og);
  f.ginvdh = fit_prevertices(f.pair, Domain::GinvDh, oi);
  if (cache) {
    cache->gdh = free_prevertices(f.gdh, coords.genus);
    cache->ginvdh = free_prevertices(f.ginvdh, coords.genus);
  }
  return f;
}

HeightReport height_report(const FittedPair& fitted) {
  const int g = fitted.pair.coords.genus;
  HeightReport r;
  for (const auto& fam : height_families(g, Domain::Gdh)) {
    CycleTerm t;
    t.name = fam.name;
    t.ext_gdh = ext_family(fitted.gdh, fam);
    t.ext_ginvdh = ext_family(fitted.ginvdh, fam);
    t.term = height_term(t.ext_gdh, t.ext_ginvdh);
    r.total = std::min(DBL_MAX, r.total + t.term);
    r.terms.push_back(t);
  }
  r.prevertices_gdh = free_prevertices(fitted.gdh, g);
  r.prevertices_ginvdh = free_prevertices(fitted.ginvdh, g);
  return r;
}

namespace {

// Unconstrained coordinates: log(l_k / l_g) for k < g, then log(b - c).
Eigen::VectorXd to_x(const GeometricCoords& c) {
  const int g = c.genus;
  const auto l = c.all_edges();
  Eigen::VectorXd x(g);
  for (int k = 0; k + 1 < g; ++k) x(k) = std::log(l[k] / l[g - 1]);
  x(g - 1) = std::log(c.b - c.diagonal_offset());
  return x;
}

GeometricCoords from_x(int g, const Eigen::VectorXd& x) {
  std::vector<double> w(g, 1.0);
  double total = 1.0;
  for (int k = 0; k + 1 < g; ++k) {
    w[k] = std::exp(x(k));
    total += w[k];
  }
  GeometricCoords c;
  c.genus = g;
  for (int k = 0; k + 1 < g; ++k) c.edges.push_back(0.5 * w[k] / total);
  c.b = 0.0;
  c.b = c.diagonal_offset() + std::exp(x(g - 1));
  return c;
}

}  // namespace

HeightReport total_height(const GeometricCoords& coords, FitCache* cache, bool with_gradient) {
  HeightReport r = height_report(fit_pair(coords, cache));
  if (with_gradient) {
    const int g = coords.genus;
    const Eigen::VectorXd x = to_x(coords);
    double n2 = 0.0;
    const double h = 1e-6;
    for (int k = 0; k < g; ++k) {
      Eigen::VectorXd xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      FitCache local = cache ? *cache : FitCache{};
      const double hp = height_report(fit_pair(from_x(g, xp), &local)).total;
      const double hm = height_report(fit_pair(from_x(g, xm), &local)).total;
      const double d = (hp - hm) / (2.0 * h);
      n2 += d * d;
    }
    r.gradient_norm = std::sqrt(n2);
  }
  return r;
}

double a_gdh(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("a_gdh: r must lie in (0, 1)");
  return 2.0 * std::sqrt(std::numbers::pi) * std::sqrt((1.0 - r) * (1.0 + r)) / std::sqrt(r) *
         gamma(0.75) / gamma(0.25) * hyp2f1(0.75, 1.0, 1.25, r * r);
}

double a_ginvdh(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("a_ginvdh: r must lie in (0, 1)");
  return std::sqrt(std::numbers::pi) * std::sqrt(r) / std::sqrt((1.0 - r) * (1.0 + r)) *
         gamma(1.25) / gamma(1.75) * hyp2f1(0.25, 1.0, 1.75, r * r);
}

ConformalPolygon karcher_polygon(double r, Domain d) {
  ConformalPolygon p;
  p.prevertices = {-1.0, -r, 0.0, r, 1.0};
  if (d == Domain::Gdh) {
    p.exponents = {-1, -2, 1, -2, -1};
    p.exponent_inf = 1;
  } else {
    p.exponents = {1, -2, -1, -2, 1};
    p.exponent_inf = -1;
  }
  p.labels = {"P", "E2", "P", "E1", "P"};
  validate(p);
  return p;
}

double a_gdh_quadrature(double r) {
  return std::abs(edge_period(karcher_polygon(r, Domain::Gdh), 4)) *
         std::sqrt((1.0 - r) * (1.0 + r)) / std::sqrt(r);
}

double a_ginvdh_quadrature(double r) {
  return std::abs(edge_period(karcher_polygon(r, Domain::GinvDh), 4)) * std::sqrt(r) /
         std::sqrt((1.0 - r) * (1.0 + r));
}

double solve_genus1() {
  // a_gdh - a_ginvdh runs from +infinity at r = 0 to -infinity at r = 1.
  double lo = 1e-6, hi = 1.0 - 1e-6;
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (a_gdh(mid) - a_ginvdh(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double flo = std::abs(a_gdh(lo) - a_ginvdh(lo));
  const double fhi = std::abs(a_gdh(hi) - a_ginvdh(hi));
  return flo <= fhi ? lo : hi;
}

GeometricCoords genus1_coords(double r_star) {
  const auto poly = symmetric_polygon(1, Domain::Gdh, {-r_star});
  const double b_over_l = std::numbers::pi * std::abs(strip_residue(poly, 4)) / std::abs(edge_period(poly, 1));
  GeometricCoords c;
  c.genus = 1;
  c.b = 0.5 * b_over_l;
  return c;
}

GeometricCoords regenerate_seed(const GeometricCoords& previous, double eta) {
  validate(previous);
  if (!(eta > 0.0)) throw ValidationError("regeneration edge must be positive");
  const auto l = previous.all_edges();
  GeometricCoords c;
  c.genus = previous.genus + 1;
  const double s = 1.0 / (1.0 + 2.0 * eta);
  for (int k = 0; k < previous.genus; ++k) c.edges.push_back(l[k] * s);
  c.b = previous.b * s;
  validate(c);
  return c;
}

namespace {

// |F(x3 + gap) - F(x3)| for the simplified map with exponent +1/2 (Gdh) or
// -1/2 (G^-1 dh) at the middle prevertex. With t = x3 + gap s the
// integrand is gap^(1/2) or gap^(3/2) times a Jacobi weight in s.
double collapsed_edge(double gap, double x3, bool gdh) {
  const double alpha = gdh ? -0.5 : 0.5;  // power of (1 - s)
  const double beta = gdh ? 0.5 : -0.5;   // power of s
  const auto& rule = gauss_jacobi(40, alpha, beta);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const double s = 0.5 * (1.0 + rule.x[i]);
    const double rest = gdh ? 1.0 / std::sqrt(1.0 + s) : std::sqrt(1.0 + s);
    sum += rule.w[i] * rest / (x3 + gap * s);
  }
  sum *= std::pow(0.5, alpha + beta + 1.0);
  return std::pow(gap, gdh ? 0.5 : 1.5) * sum;
}

double solve_gap(double eps, double x3, bool gdh) {
  double lo = std::log(1e-300), hi = std::log(0.45 * x3);
  if (collapsed_edge(std::exp(hi), x3, gdh) < eps)
    throw DomainError("degeneration_sample: eps too large for the simplified model");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (collapsed_edge(std::exp(mid), x3, gdh) < eps ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace

DegenerationSample degeneration_sample(double eps, double x3, double window) {
  if (!(eps > 0.0) || !(x3 > 0.0) || !(window > 0.0)) throw DomainError("degeneration_sample: bad parameters");
  DegenerationSample s;
  s.eps = eps;
  s.gap_gdh = solve_gap(eps, x3, true);
  s.gap_ginvdh = solve_gap(eps, x3, false);
  if (std::max(s.gap_gdh, s.gap_ginvdh) >= window) throw DomainError("degeneration_sample: gap exceeds window");
  s.ext_gdh = ext_four_point(x3 - window, x3 - s.gap_gdh, x3 + s.gap_gdh, x3 + window);
  s.ext_ginvdh = ext_four_point(x3 - window, x3 - s.gap_ginvdh, x3 + s.gap_ginvdh, x3 + window);
  return s;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("loglog_slope: need matching samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = std::log(x[i]), v = std::log(y[i]);
    sx += u, sy += v, sxx += u * u, sxy += u * v;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

struct Evaluator {
  int g;
  FitCache cache;

  // log ext ratios in the order gamma_1 .. gamma_{g-1}, delta.
  std::optional<Eigen::VectorXd> residual(const Eigen::VectorXd& x, HeightReport* rep = nullptr) {
    try {
      const GeometricCoords c = from_x(g, x);
      validate(c);
      FitCache trial = cache;
      HeightReport r = height_report(fit_pair(c, &trial));
      Eigen::VectorXd v(g);
      for (int i = 0; i < g; ++i) v(i) = std::log(r.terms[i].ext_gdh / r.terms[i].ext_ginvdh);
      if (!v.allFinite()) return std::nullopt;
      cache = trial;
      if (rep) *rep = r;
      return v;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
};

// Indices of the locus constraints: gamma_1 .. gamma_{g-2} and delta. The
// remaining family gamma_{g-1} is the descent term; the outer parameter is
// x_{g-2} = log(l_{g-1} / l_g).
std::vector<int> constraint_rows(int g) {
  std::vector<int> rows;
  for (int i = 0; i + 2 < g; ++i) rows.push_back(i);
  rows.push_back(g - 1);
  return rows;
}

std::vector<int> inner_columns(int g) {
  std::vector<int> cols;
  for (int i = 0; i + 2 < g; ++i) cols.push_back(i);
  cols.push_back(g - 1);
  return cols;
}

// Newton on the locus constraints with the outer parameter held fixed.
bool inner_solve(Evaluator& ev, Eigen::VectorXd& x, const SolveOptions& opts, Eigen::VectorXd& full) {
  const int g = ev.g;
  const auto rows = constraint_rows(g), cols = inner_columns(g);
  const int m = static_cast<int>(rows.size());
  auto pick = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(m);
    for (int i = 0; i < m; ++i) out(i) = v(rows[i]);
    return out;
  };
  auto r0 = ev.residual(x);
  if (!r0) return false;
  full = *r0;
  Eigen::VectorXd r = pick(full);
  for (int it = 0; it < opts.max_inner; ++it) {
    if (r.lpNorm<Eigen::Infinity>() < 1e-11) return true;
    Eigen::MatrixXd J(m, m);
    for (int k = 0; k < m; ++k) {
      Eigen::VectorXd xp = x, xm = x;
      xp(cols[k]) += opts.fd_step;
      xm(cols[k]) -= opts.fd_step;
      auto rp = ev.residual(xp), rm = ev.residual(xm);
      if (!rp || !rm) return false;
      J.col(k) = (pick(*rp) - pick(*rm)) / (2.0 * opts.fd_step);
    }
    Eigen::VectorXd step = J.colPivHouseholderQr().solve(-r);
    if (!step.allFinite()) return false;
    const double big = step.lpNorm<Eigen::Infinity>();
    if (big > 1.0) step /= big;
    double lam = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 25; ++ls) {
      Eigen::VectorXd trial = x;
      for (int k = 0; k < m; ++k) trial(cols[k]) += lam * step(k);
      auto rt = ev.residual(trial);
      if (rt && pick(*rt).norm() < (1.0 - 1e-4 * lam) * r.norm()) {
        x = trial;
        full = *rt;
        r = pick(full);
        accepted = true;
        break;
      }
      lam *= 0.5;
    }
    if (!accepted) return r.lpNorm<Eigen::Infinity>() < 1e-9;
  }
  return r.lpNorm<Eigen::Infinity>() < 1e-9;
}

}  // namespace

SolveResult solve_genus(int genus, const std::optional<GeometricCoords>& seed, const SolveOptions& opts) {
  if (genus < 1) throw ValidationError("genus must be at least 1");
  SolveResult out;
  if (genus == 1) {
    out.coords = genus1_coords(solve_genus1());
    out.report = total_height(out.coords);
    return out;
  }
  GeometricCoords start;
  if (seed && seed->genus == genus) {
    start = *seed;
  } else if (seed && seed->genus == genus - 1) {
    start = regenerate_seed(*seed, opts.eta);
  } else if (seed) {
    throw ValidationError("seed genus must be g or g-1");
  } else {
    start = regenerate_seed(solve_genus(genus - 1, std::nullopt, opts).coords, opts.eta);
  }
  validate(start);

  const int g = genus;
  const int outer = g - 2;  // index of the outer parameter and the descent row
  Evaluator ev{g, {}};
  Eigen::VectorXd x = to_x(start);
  Eigen::VectorXd full;
  HeightReport best;
  auto converged = [&](const Eigen::VectorXd& f, HeightReport& rep) {
    ev.residual(x, &rep);
    return rep.total <= opts.height_tol && f.lpNorm<Eigen::Infinity>() <= opts.ratio_tol;
  };
  if (!inner_solve(ev, x, opts, full))
    throw SolverError("could not reach the constraint locus from the seed", from_x(g, x),
                      total_height(from_x(g, x)));
  int it = 0;
  for (; it < opts.max_outer; ++it) {
    HeightReport rep;
    const bool done = converged(full, rep);
    out.trace.push_back({it, x(outer), full(outer), rep.total});
    best = rep;
    if (done) break;
    // Slope of the descent residual along the locus.
    const double h = 1e-5;
    Eigen::VectorXd xh = x;
    xh(outer) += h;
    Eigen::VectorXd fh;
    if (!inner_solve(ev, xh, opts, fh))
      throw SolverError("constraint locus lost while differentiating", from_x(g, x), rep);
    const double slope = (fh(outer) - full(outer)) / h;
    double ds = -full(outer) / slope;
    if (!std::isfinite(ds)) throw SolverError("flat descent direction", from_x(g, x), rep);
    ds = std::clamp(ds, -1.0, 1.0);
    double lam = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      Eigen::VectorXd trial = x;
      trial(outer) += lam * ds;
      Eigen::VectorXd ft;
      if (inner_solve(ev, trial, opts, ft) && std::abs(ft(outer)) < std::abs(full(outer))) {
        x = trial;
        full = ft;
        accepted = true;
        break;
      }
      lam *= 0.5;
    }
    if (!accepted || std::abs(lam * ds) < opts.step_tol) {
      ev.residual(x, &rep);
      if (rep.total <= opts.height_tol) break;
      throw SolverError("line search along the constraint locus stalled", from_x(g, x), rep);
    }
  }
  out.coords = from_x(g, x);
  out.report = best;
  out.outer_iterations = it;
  if (best.total > opts.height_tol)
    throw SolverError("outer iteration budget exhausted", out.coords, best);
  return out;
}

std::vector<std::string> boundary_strata(int genus) {
  std::vector<std::string> out;
  for (int k = 1; k <= genus; ++k) out.push_back("l" + std::to_string(k) + "->0");
  out.push_back("b->c");
  out.push_back("b->inf");
  return out;
}

double default_probe_depth(const std::string& stratum) {
  if (stratum == "b->c") return 0.625;
  if (stratum == "b->inf") return 4.5;
  if (stratum == "l1->0") return 4.0;
  return 5.0;
}

namespace {

GeometricCoords move_toward(const GeometricCoords& base, const std::string& stratum, double f, double* param) {
  GeometricCoords c = base;
  const int g = base.genus;
  if (stratum == "b->c") {
    const double off = base.diagonal_offset();
    c.b = off + (base.b - off) * f;
    *param = c.b - off;
    return c;
  }
  if (stratum == "b->inf") {
    c.b = base.b / f;
    *param = c.b;
    return c;
  }
  int k = 0;
  if (stratum.size() > 4 && stratum[0] == 'l' && stratum.ends_with("->0")) k = std::stoi(stratum.substr(1));
  if (k < 1 || k > g) throw ValidationError("unknown boundary stratum '" + stratum + "'");
  auto l = base.all_edges();
  std::vector<double> first(l.begin(), l.begin() + g);
  first[k - 1] *= f;
  *param = first[k - 1];
  // Renormalize the half staircase to length 1/2; b keeps its ratio to the
  // untouched edges.
  double sum = 0.0;
  for (double x : first) sum += x;
  const double s = 0.5 / sum;
  c.edges.assign(first.begin(), first.end() - 1);
  for (double& x : c.edges) x *= s;
  c.b = base.b * s;
  *param *= s;
  return c;
}

}  // namespace

ProbePath properness_path(const GeometricCoords& base, const std::string& stratum, int points,
                          std::optional<double> depth, int substeps, double fit_tol) {
  if (points < 2 || substeps < 1) throw ValidationError("properness_path: need at least two points");
  validate(base);
  const double d = depth.value_or(default_probe_depth(stratum));
  ProbePath path;
  path.stratum = stratum;
  FitCache cache;
  cache.fit_tol = fit_tol;
  const int steps = (points - 1) * substeps;
  for (int j = 0; j <= steps; ++j) {
    const double f = std::pow(10.0, -d * j / steps);
    double param = 0.0;
    const GeometricCoords c = move_toward(base, stratum, f, &param);
    const auto t0 = std::chrono::steady_clock::now();
    HeightReport rep;
    try {
      rep = total_height(c, &cache);
    } catch (const std::exception& e) {
      path.error = e.what();
      break;
    }
    if (j % substeps == 0)
      path.points.push_back(
          {param, c, rep, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
  }
  path.strictly_increasing = static_cast<int>(path.points.size()) == points;
  for (std::size_t i = 1; i < path.points.size(); ++i)
    if (!(path.points[i].report.total > path.points[i - 1].report.total)) path.strictly_increasing = false;
  return path;
}

ReflexivityResult reflexivity_check(const GeometricCoords& coords, double tol) {
  ReflexivityResult res;
  res.report = total_height(coords);
  for (const auto& t : res.report.terms)
    res.max_relative_difference = std::max(
        res.max_relative_difference, std::abs(t.ext_gdh - t.ext_ginvdh) / std::max(t.ext_gdh, t.ext_ginvdh));
  res.reflexive = res.max_relative_difference <= tol;
  return res;
}

MonodromyReport monodromy_test(const ConformalPolygon& poly, int turns) {
  validate(poly);
  MonodromyReport rep;
  const int n = poly.size();
  const auto& t = poly.prevertices;
  for (int j = 0; j + 1 < n; ++j) {
    // Choose the preimage of infinity on the complementary arc that gives
    // t_{j+1} the most room to circle t_j after sending (t_j, t_{j+1}) to (0, 1).
    std::vector<double> cands;
    const double spread = t[n - 1] - t[0] + 1.0;
    auto add_gap = [&](double u, double v) {
      for (double f : {0.02, 0.1, 0.3, 0.5, 0.7, 0.9, 0.98}) cands.push_back(u + f * (v - u));
    };
    for (int i = j + 1; i + 1 < n; ++i) add_gap(t[i], t[i + 1]);
    for (int i = 0; i + 1 < j + 1 && i + 1 <= j; ++i) add_gap(t[i], t[i + 1]);
    for (double f : {0.1, 1.0, 10.0}) {
      cands.push_back(t[n - 1] + f * spread);
      cands.push_back(t[0] - f * spread);
    }
    // Drop candidates inside the edge being continued.
    std::erase_if(cands, [&](double w) { return w > t[j] && w < t[j + 1]; });
    double best_clear = 0.0;
    Mobius best_m;
    for (double w : cands) {
      const double src[3] = {t[j], t[j + 1], w};
      const double dst[3] = {0.0, 1.0, INFINITY};
      Mobius fwd;
      try {
        fwd = Mobius::from_points(src, dst);
      } catch (const GeometryError&) {
        continue;
      }
      double clear = INFINITY;
      for (int i = 0; i < n; ++i)
        if (i != j && i != j + 1) clear = std::min(clear, std::abs(fwd(t[i])));
      if (poly.exponent_inf != 0) clear = std::min(clear, std::abs(fwd(INFINITY)));
      const double score = std::min(clear, 3.0);
      if (score > best_clear) {
        best_clear = score;
        best_m = fwd;
      }
    }
    if (best_clear <= 1.1) {
      rep.pairs_skipped++;
      continue;
    }
    ConformalPolygon q;
    try {
      q = mobius_pullback(poly, best_m.inverse());
    } catch (const GeometryError&) {
      rep.pairs_skipped++;
      continue;
    }
    int J = -1;
    for (int i = 0; i < q.size(); ++i)
      if (std::abs(q.prevertices[i]) < 1e-9) J = i;
    const Cycle gam = Cycle::connecting(J, J + 2), beta = Cycle::encircling(J);
    try {
      validate_cycle(q, gam);
      validate_cycle(q, beta);
      continuation_geometry(q, J);
    } catch (const std::exception&) {
      rep.pairs_skipped++;
      continue;
    }
    const cplx fg = cycle_period(q, gam), fb = cycle_period(q, beta);
    ContinuationOptions co;
    co.turns = turns;
    const cplx moved = continue_period(q, J, gam, co);
    const cplx expect = fg + 2.0 * static_cast<double>(turns) * fb;
    const double scale = std::max(std::abs(fg), std::abs(fb));
    rep.max_defect = std::max(rep.max_defect, std::abs(moved - expect) / scale);
    rep.pairs_tested++;
  }
  return rep;
}

MonodromyReport monodromy_test(int genus, const GeometricCoords& coords, int turns) {
  if (coords.genus != genus) throw ValidationError("monodromy_test: genus mismatch");
  const FittedPair f = fit_pair(coords);
  MonodromyReport a = monodromy_test(f.gdh, turns), b = monodromy_test(f.ginvdh, turns);
  return {std::max(a.max_defect, b.max_defect), a.pairs_tested + b.pairs_tested,
          a.pairs_skipped + b.pairs_skipped};
}

Json report_to_json(const HeightReport& r) {
  Json j;
  j["total"] = r.total;
  Json terms = Json::array();
  for (const auto& t : r.terms) {
    Json e;
    e["cycle"] = t.name;
    e["ext_gdh"] = t.ext_gdh;
    e["ext_ginvdh"] = t.ext_ginvdh;
    e["term"] = t.term;
    terms.push_back(e);
  }
  j["terms"] = terms;
  j["gradient_norm"] = r.gradient_norm;
  j["prevertices_gdh"] = r.prevertices_gdh;
  j["prevertices_ginvdh"] = r.prevertices_ginvdh;
  return j;
}

Json checkpoint_json(const GeometricCoords& coords, const HeightReport& r,
                     const std::vector<TraceEntry>& trace) {
  Json j;
  j["genus"] = coords.genus;
  j["edges"] = coords.edges;
  j["b"] = coords.b;
  j["prevertices_gdh"] = r.prevertices_gdh;
  j["prevertices_ginvdh"] = r.prevertices_ginvdh;
  j["height_report"] = report_to_json(r);
  Json tr = Json::array();
  for (const auto& e : trace)
    tr.push_back(Json{{"iteration", e.iteration},
                      {"outer_parameter", e.outer_parameter},
                      {"descent_residual", e.descent_residual},
                      {"total", e.total}});
  j["trace"] = tr;
  return j;
}

}  // namespace orthoscherk
