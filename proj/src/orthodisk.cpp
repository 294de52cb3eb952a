#include "orthoscherk/orthodisk.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "orthoscherk/errors.hpp"
#include "orthoscherk/json_io.hpp"

namespace orthoscherk {

const char* domain_name(Domain d) { return d == Domain::Gdh ? "Gdh" : "GinvDh"; }

std::vector<double> GeometricCoords::all_edges() const {
  std::vector<double> l(2 * genus);
  double used = 0.0;
  for (int k = 0; k + 1 < genus; ++k) {
    l[k] = edges[k];
    used += edges[k];
  }
  l[genus - 1] = 0.5 - used;
  for (int k = 0; k < genus; ++k) l[2 * genus - 1 - k] = l[k];
  return l;
}

double GeometricCoords::diagonal_offset() const {
  const auto l = all_edges();
  double c = 0.0;
  for (int k = 1; k <= genus; k += 2) c += l[k - 1];
  return c;
}

double GeometricCoords::corner_offset() const {
  const auto l = all_edges();
  double a = diagonal_offset();
  for (int k = 2; k <= genus; k += 2) a += l[k - 1];
  return a;
}

void validate(const GeometricCoords& coords) {
  if (coords.genus < 1) throw ValidationError("genus must be at least 1");
  if (static_cast<int>(coords.edges.size()) != coords.genus - 1)
    throw ValidationError("expected genus-1 free edge lengths");
  double sum = 0.0;
  for (double l : coords.edges) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError("edge lengths must be positive");
    sum += l;
  }
  if (!(0.5 - sum > 0.0))
    throw ValidationError("free edges leave no room for the central edge (sum must stay below 1/2)");
  if (!(coords.b > 0.0) || !std::isfinite(coords.b)) throw ValidationError("strip width must be positive");
  if (!(coords.b > coords.diagonal_offset()))
    throw BoundaryStratumError("strip width must exceed the diagonal offset c");
}

GeometricCoords coords_from_lengths(int genus, const std::vector<double>& lengths, double b) {
  if (genus < 1 || static_cast<int>(lengths.size()) != genus)
    throw ValidationError("coords_from_lengths: need one length per edge above the diagonal");
  double sum = 0.0;
  for (double l : lengths) {
    if (!(l > 0.0)) throw ValidationError("edge lengths must be positive");
    sum += l;
  }
  GeometricCoords c;
  c.genus = genus;
  for (int k = 0; k + 1 < genus; ++k) c.edges.push_back(0.5 * lengths[k] / sum);
  c.b = b;
  validate(c);
  return c;
}

namespace {

Orthodisk make_domain(const GeometricCoords& coords, bool upper_left) {
  const int g = coords.genus;
  const auto l = coords.all_edges();
  const double a = coords.corner_offset();
  Orthodisk d;
  d.upper_left = upper_left;
  cplx p(0.0, -a);
  std::vector<cplx> drawn = {p};
  for (int k = 1; k <= 2 * g; ++k) {
    p += (k % 2 == 1) ? cplx(l[k - 1], 0.0) : cplx(0.0, l[k - 1]);
    drawn.push_back(p);
  }
  for (int k = 0; k <= 2 * g; ++k) {
    d.vertices.push_back(upper_left ? drawn[k] : std::conj(drawn[k]));
    d.labels.push_back("P" + std::to_string(k));
    const bool even = (k % 2 == 0);
    d.angles.push_back(upper_left == even ? 3 : 1);
  }
  d.vertices.push_back(upper_left ? cplx(-coords.b, coords.b) : cplx(coords.b, coords.b));
  d.labels.push_back(upper_left ? "V+" : "V-");
  d.angles.push_back(upper_left ? 1 : 3);
  for (int k = 1; k <= 2 * g; ++k) {
    const cplx e = drawn[k] - drawn[k - 1];
    d.edge_vectors.push_back(upper_left ? e : std::conj(e));
  }
  d.strip_width = coords.b;
  return d;
}

bool gdh_is_upper_left(int genus) { return genus % 2 == 0; }

}  // namespace

OrthodiskPair build_pair(const GeometricCoords& coords) {
  validate(coords);
  OrthodiskPair pair;
  pair.coords = coords;
  pair.c = coords.diagonal_offset();
  pair.a = coords.corner_offset();
  const bool ul = gdh_is_upper_left(coords.genus);
  pair.gdh = make_domain(coords, ul);
  pair.ginvdh = make_domain(coords, !ul);
  return pair;
}

ExponentData vertex_exponents(int genus, Domain domain) {
  if (genus < 1) throw ValidationError("genus must be at least 1");
  ExponentData e;
  e.finite.push_back(-2);
  int sum = -2;
  for (int k = 0; k <= 2 * genus; ++k) {
    const bool same_parity = (k % 2) == (genus % 2);
    const int a = (same_parity == (domain == Domain::Gdh)) ? 1 : -1;
    e.finite.push_back(a);
    sum += a;
  }
  e.finite.push_back(-2);
  sum += -2;
  e.at_infinity = -4 - sum;
  return e;
}

ConformalPolygon symmetric_polygon(int genus, Domain domain, const std::vector<double>& p) {
  if (static_cast<int>(p.size()) != genus) throw ValidationError("need g free prevertices");
  const auto ex = vertex_exponents(genus, domain);
  ConformalPolygon poly;
  poly.prevertices.push_back(-1.0);
  for (double v : p) poly.prevertices.push_back(v);
  poly.prevertices.push_back(0.0);
  for (int k = genus - 1; k >= 0; --k) poly.prevertices.push_back(-p[k]);
  poly.prevertices.push_back(1.0);
  poly.exponents = ex.finite;
  poly.exponent_inf = ex.at_infinity;
  poly.labels.push_back("E2");
  for (int k = 0; k <= 2 * genus; ++k) poly.labels.push_back("P" + std::to_string(k));
  poly.labels.push_back("E1");
  const bool ul = gdh_is_upper_left(genus) == (domain == Domain::Gdh);
  poly.label_inf = ul ? "V+" : "V-";
  validate(poly);
  return poly;
}

std::vector<double> free_prevertices(const ConformalPolygon& poly, int genus) {
  return std::vector<double>(poly.prevertices.begin() + 1, poly.prevertices.begin() + 1 + genus);
}

std::vector<double> prevertex_gaps(const ConformalPolygon& poly, int genus) {
  std::vector<double> p = free_prevertices(poly, genus);
  std::vector<double> gaps;
  gaps.push_back(p[0] + 1.0);
  for (int k = 1; k < genus; ++k) gaps.push_back(p[k] - p[k - 1]);
  gaps.push_back(-p[genus - 1]);
  return gaps;
}

namespace {

// p from unconstrained log-gap coordinates u_0..u_{g-1} (u_g = 0).
std::vector<double> p_from_u(const Eigen::VectorXd& u) {
  const int g = static_cast<int>(u.size());
  const double umax = std::max(0.0, u.maxCoeff());
  std::vector<double> w(g + 1);
  double total = 0.0;
  for (int k = 0; k <= g; ++k) {
    w[k] = std::exp((k < g ? u(k) : 0.0) - umax);
    total += w[k];
  }
  std::vector<double> p(g);
  // Accumulate from the side nearer to each point to keep small gaps exact.
  double acc = -1.0;
  for (int k = 0; k < g; ++k) {
    acc += w[k] / total;
    p[k] = acc;
  }
  double tail = 0.0;
  for (int k = g; k >= 1; --k) {
    tail += w[k] / total;
    if (k - 1 < g && -tail > -0.5) p[k - 1] = -tail;
  }
  return p;
}

Eigen::VectorXd u_from_p(const std::vector<double>& p) {
  const int g = static_cast<int>(p.size());
  std::vector<double> gaps;
  gaps.push_back(p[0] + 1.0);
  for (int k = 1; k < g; ++k) gaps.push_back(p[k] - p[k - 1]);
  gaps.push_back(-p[g - 1]);
  Eigen::VectorXd u(g);
  for (int k = 0; k < g; ++k) u(k) = std::log(gaps[k]) - std::log(gaps[g]);
  return u;
}

struct Fitter {
  int g;
  Domain domain;
  Eigen::VectorXd target;  // log(l_k / b), k = 1..g

  // log(l_k / b) of the polygon with parameters u.
  Eigen::VectorXd shape(const Eigen::VectorXd& u) const {
    const auto poly = symmetric_polygon(g, domain, p_from_u(u));
    const double b = std::numbers::pi * std::abs(strip_residue(poly, 2 * g + 2));
    Eigen::VectorXd s(g);
    for (int k = 1; k <= g; ++k) s(k - 1) = std::log(std::abs(edge_period(poly, k)) / b);
    return s;
  }

  // Residual against an intermediate target; nullopt if the polygon is
  // numerically degenerate.
  std::optional<Eigen::VectorXd> residual(const Eigen::VectorXd& u, const Eigen::VectorXd& t) const {
    try {
      Eigen::VectorXd r = shape(u) - t;
      if (!r.allFinite()) return std::nullopt;
      return r;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  // Damped Newton toward target t. Returns true on convergence.
  bool newton(Eigen::VectorXd& u, const Eigen::VectorXd& t, double tol, int max_it, int& its,
              double& final_res) const {
    auto r0 = residual(u, t);
    if (!r0) return false;
    Eigen::VectorXd r = *r0;
    for (int it = 0; it < max_it; ++it) {
      its++;
      final_res = r.lpNorm<Eigen::Infinity>();
      if (final_res < tol) return true;
      Eigen::MatrixXd J(g, g);
      const double h = 1e-6;
      for (int k = 0; k < g; ++k) {
        Eigen::VectorXd up = u, um = u;
        up(k) += h;
        um(k) -= h;
        auto rp = residual(up, t), rm = residual(um, t);
        if (!rp || !rm) return false;
        J.col(k) = (*rp - *rm) / (2.0 * h);
      }
      Eigen::VectorXd step = J.colPivHouseholderQr().solve(-r);
      if (!step.allFinite()) return false;
      const double big = step.lpNorm<Eigen::Infinity>();
      if (big > 2.0) step *= 2.0 / big;
      double lam = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 30; ++ls) {
        Eigen::VectorXd trial = u + lam * step;
        auto rt = residual(trial, t);
        if (rt && rt->norm() < (1.0 - 1e-4 * lam) * r.norm()) {
          u = trial;
          r = *rt;
          accepted = true;
          break;
        }
        lam *= 0.5;
      }
      if (!accepted) {
        final_res = r.lpNorm<Eigen::Infinity>();
        return final_res < tol;
      }
    }
    final_res = r.lpNorm<Eigen::Infinity>();
    return final_res < tol;
  }
};

}  // namespace

ConformalPolygon fit_prevertices(const OrthodiskPair& pair, Domain domain, const FitOptions& opts,
                                 FitReport* report) {
  const int g = pair.coords.genus;
  const auto l = pair.coords.all_edges();
  Fitter f{g, domain, Eigen::VectorXd(g)};
  for (int k = 0; k < g; ++k) f.target(k) = std::log(l[k] / pair.coords.b);

  Eigen::VectorXd u = Eigen::VectorXd::Zero(g);
  if (opts.seed) {
    const auto& s = *opts.seed;
    bool ok = static_cast<int>(s.size()) == g && s.front() > -1.0 && s.back() < 0.0;
    for (int k = 1; ok && k < g; ++k) ok = s[k] > s[k - 1];
    if (ok) u = u_from_p(s);
  }
  FitReport rep;
  double res = INFINITY;
  Eigen::VectorXd u_try = u;
  bool ok = f.newton(u_try, f.target, opts.tol, opts.max_iterations, rep.iterations, res);
  if (!ok) {
    // Continuation in the target from the geometry the start point realizes.
    rep.used_continuation = true;
    auto s0 = f.residual(u, Eigen::VectorXd::Zero(g));
    if (!s0) {
      u = Eigen::VectorXd::Zero(g);
      s0 = f.residual(u, Eigen::VectorXd::Zero(g));
    }
    const Eigen::VectorXd start = *s0;
    double s = 0.0, ds = 0.125;
    int guard = 0;
    while (s < 1.0 && guard++ < 400) {
      const double s1 = std::min(1.0, s + ds);
      Eigen::VectorXd t = start + s1 * (f.target - start);
      Eigen::VectorXd trial = u;
      int its = 0;
      double r = INFINITY;
      const double tol = s1 < 1.0 ? 1e-8 : opts.tol;
      if (f.newton(trial, t, tol, 40, its, r)) {
        rep.iterations += its;
        u = trial;
        s = s1;
        ds = std::min(0.5, ds * 1.5);
      } else {
        ds *= 0.5;
        if (ds < 1e-6) break;
      }
    }
    ok = (s >= 1.0);
    u_try = u;
    if (ok) {
      int its = 0;
      ok = f.newton(u_try, f.target, opts.tol, opts.max_iterations, its, res);
      rep.iterations += its;
    }
  }
  if (!ok) {
    auto r = f.residual(u_try, f.target);
    std::vector<double> rv;
    if (r) rv.assign(r->data(), r->data() + r->size());
    throw FitError(std::string("prevertex fit did not converge for the ") + domain_name(domain) +
                       " domain",
                   rv);
  }
  rep.residual = res;
  if (report) *report = rep;

  ConformalPolygon poly = symmetric_polygon(g, domain, p_from_u(u_try));
  // Scale so that the developed image matches the drawn domain.
  const double b_fit = std::numbers::pi * std::abs(strip_residue(poly, 2 * g + 2));
  const Orthodisk& target = pair.domain(domain);
  const cplx want = target.edge_vectors[0] / std::abs(target.edge_vectors[0]);
  const cplx have = edge_direction(poly, 1);
  poly.scale = (pair.coords.b / b_fit) * want / have;
  return poly;
}

std::vector<cplx> develop(const ConformalPolygon& poly, const Orthodisk& target) {
  const int m = static_cast<int>(target.vertices.size()) - 1;  // P_0..P_{2g}
  std::vector<cplx> out;
  const cplx base(poly.prevertices[1], 0.0);
  for (int k = 0; k < m; ++k) {
    const cplx z(poly.prevertices[1 + k], 0.0);
    out.push_back(target.vertices[0] + eval_sc(poly, z, base));
  }
  return out;
}

double conjugacy_residual(const OrthodiskPair& pair) {
  double r = std::abs(pair.gdh.strip_width - pair.ginvdh.strip_width);
  const std::size_t n = std::min(pair.gdh.edge_vectors.size(), pair.ginvdh.edge_vectors.size());
  for (std::size_t k = 0; k < n; ++k)
    r = std::max(r, std::abs(pair.gdh.edge_vectors[k] - std::conj(pair.ginvdh.edge_vectors[k])));
  return r;
}

std::string coords_to_json(const GeometricCoords& coords, const std::vector<double>& pg,
                           const std::vector<double>& pi) {
  Json j;
  j["genus"] = coords.genus;
  j["edges"] = coords.edges;
  j["b"] = coords.b;
  j["prevertices_gdh"] = pg;
  j["prevertices_ginvdh"] = pi;
  return dump_json(j);
}

CheckpointData coords_from_json(const std::string& text) {
  CheckpointData d;
  try {
    const auto j = nlohmann::json::parse(text);
    d.coords.genus = j.at("genus").get<int>();
    d.coords.edges = j.at("edges").get<std::vector<double>>();
    d.coords.b = j.at("b").get<double>();
    if (j.contains("prevertices_gdh")) d.prevertices_gdh = j["prevertices_gdh"].get<std::vector<double>>();
    if (j.contains("prevertices_ginvdh"))
      d.prevertices_ginvdh = j["prevertices_ginvdh"].get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed coordinate document: ") + e.what());
  }
  validate(d.coords);
  return d;
}

}  // namespace orthoscherk
