#include "orthoscherk/extlen.hpp"

#include <cmath>
#include <numbers>

#include "orthoscherk/errors.hpp"

namespace orthoscherk {

namespace {

double agm(double a, double b) {
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double m = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = m;
  }
  return 0.5 * (a + b);
}

// Cross ratio CR = (c-b)(d-a)/((c-a)(d-b)) and its complement, each computed
// from its own product so neither loses digits near 0 or 1.
void cross_ratio(double a, double b, double c, double d, double& cr, double& ccr) {
  const bool ia = std::isinf(a), ib = std::isinf(b), ic = std::isinf(c), id = std::isinf(d);
  auto f = [](bool inf, double v) { return inf ? 1.0 : v; };
  const double cb = f(ib || ic, c - b), da = f(ia || id, d - a), ca = f(ia || ic, c - a),
               db = f(ib || id, d - b), ba = f(ia || ib, b - a), dc = f(ic || id, d - c);
  cr = (cb * da) / (ca * db);
  ccr = (ba * dc) / (ca * db);
}

int wrap(int e, int m) { return ((e % m) + m) % m; }

// Endpoints of an edge on the extended real line.
void edge_ends(const ConformalPolygon& poly, int e, double& s, double& t) {
  const int n = poly.size();
  e = wrap(e, n + 1);
  if (e == n) {
    s = -INFINITY;
    t = poly.prevertices[0];
  } else if (e == n - 1) {
    s = poly.prevertices[n - 1];
    t = INFINITY;
  } else {
    s = poly.prevertices[e];
    t = poly.prevertices[e + 1];
  }
}

}  // namespace

double elliptic_k(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw DomainError("elliptic_k: modulus must lie in [0, 1)");
  return std::numbers::pi / (2.0 * agm(1.0, std::sqrt((1.0 - k) * (1.0 + k))));
}

double ext_four_point(double a, double b, double c, double d) {
  double cr, ccr;
  cross_ratio(a, b, c, d, cr, ccr);
  if (!(cr > 0.0) || !(ccr > 0.0) || !std::isfinite(cr) || !std::isfinite(ccr))
    throw DegenerateError("degenerate quadrilateral: marked points coincide or are misordered");
  // Normal form -1/k, -1, 1, 1/k: the arcs join the short sides of a
  // 2K by K' rectangle, so ext = 2K/K'.
  const double s = std::sqrt(ccr);
  const double k = cr / ((1.0 + s) * (1.0 + s));
  const double kp = 2.0 * std::sqrt(s) / (1.0 + s);
  return 2.0 * agm(1.0, k) / agm(1.0, kp);
}

double ext_connecting(const ConformalPolygon& poly, const Cycle& c) {
  const int m = poly.edge_count();
  int ea = wrap(c.edge_a, m), eb = wrap(c.edge_b, m);
  if (ea == eb || wrap(ea + 1, m) == eb || wrap(eb + 1, m) == ea)
    throw DegenerateError("connecting family between adjacent edges");
  if (ea > eb) std::swap(ea, eb);
  double a, b, cc, d;
  edge_ends(poly, ea, a, b);
  edge_ends(poly, eb, cc, d);
  // Edge m-1 starts at -infinity; rotate so the points stay cyclically ordered.
  if (eb == m - 1) return ext_four_point(cc, d, a, b);
  return ext_four_point(a, b, cc, d);
}

double ext_encircling(const ConformalPolygon& poly, const Cycle& c) {
  const int m = poly.edge_count();
  if (m < 5) throw DegenerateError("encircling family needs at least five edges");
  const int e = wrap(c.edge_a, m);
  double s, t;
  edge_ends(poly, e, s, t);
  if (!(t > s)) throw DegenerateError("encircled edge has zero length");
  // Loops around the edge on the double are doubled arcs joining its two
  // neighbours on one sheet.
  return 2.0 * ext_connecting(poly, Cycle::connecting(e - 1, e + 1));
}

double ext_composite(const ConformalPolygon& poly, const CurveFamily& f) {
  const double e1 = ext_encircling(poly, f.cycle);
  const double e2 = ext_encircling(poly, f.partner);
  if (std::abs(e1 - e2) > 1e-8 * std::max(e1, e2))
    throw NotSupportedError("composite family with asymmetric constituents");
  // Two disjoint equal families in parallel.
  return 0.5 * e1;
}

double ext_family(const ConformalPolygon& poly, const CurveFamily& f) {
  if (f.composite) return ext_composite(poly, f);
  if (f.cycle.kind == Cycle::Kind::Encircling) return ext_encircling(poly, f.cycle);
  return ext_connecting(poly, f.cycle);
}

std::vector<CurveFamily> height_families(int genus, Domain domain) {
  std::vector<CurveFamily> out;
  for (int i = 1; i <= genus - 1; ++i) {
    CurveFamily f;
    f.cycle = Cycle::encircling(i);
    f.partner = Cycle::encircling(2 * genus + 1 - i);
    f.composite = true;
    f.domain = domain;
    f.name = "gamma_" + std::to_string(i);
    out.push_back(f);
  }
  CurveFamily d;
  d.cycle = Cycle::connecting(0, 2 * genus + 1);
  d.domain = domain;
  d.name = "delta";
  out.push_back(d);
  return out;
}

}  // namespace orthoscherk
