#include "orthoscherk/scmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "orthoscherk/errors.hpp"
#include "orthoscherk/quadrature.hpp"

namespace orthoscherk {
namespace {

constexpr double kPi = std::numbers::pi;

double alpha(int a) { return 0.5 * a; }

int normalize_edge(const ConformalPolygon& poly, int e) {
  const int n = poly.size();
  if (e == n) return -1;
  if (e < -1 || e > n) throw ValidationError("edge index out of range");
  return e;
}

double spread(const ConformalPolygon& poly) {
  const double s = poly.prevertices.back() - poly.prevertices.front();
  return s > 0.0 ? s : 1.0;
}

// Product over all factors except those listed in skip.
cplx product_except(const ConformalPolygon& poly, cplx t, int skip1, int skip2) {
  double logmag = 0.0, arg = 0.0;
  for (int i = 0; i < poly.size(); ++i) {
    if (i == skip1 || i == skip2 || poly.exponents[i] == 0) continue;
    const cplx w = t - poly.prevertices[i];
    const double al = alpha(poly.exponents[i]);
    logmag += al * std::log(std::abs(w));
    arg += al * arg_uhp(w);
  }
  return std::polar(std::exp(logmag), arg);
}

int prevertex_at(const ConformalPolygon& poly, cplx z) {
  if (std::abs(z.imag()) > 0.0) return -1;
  for (int i = 0; i < poly.size(); ++i)
    if (poly.prevertices[i] == z.real()) return i;
  return -1;
}

// Integral along one straight segment inside the closed upper half-plane.
cplx segment_sc(const ConformalPolygon& poly, cplx A, cplx B) {
  const int ia = prevertex_at(poly, A);
  const int ib = prevertex_at(poly, B);
  const double aa = ia >= 0 ? alpha(poly.exponents[ia]) : 0.0;
  const double ab = ib >= 0 ? alpha(poly.exponents[ib]) : 0.0;
  if (aa <= -1.0 || ab <= -1.0)
    throw SingularPathError("path ends at a prevertex with exponent <= -2");
  std::vector<cplx> sing;
  for (int i = 0; i < poly.size(); ++i)
    if (i != ia && i != ib && poly.exponents[i] != 0) sing.emplace_back(poly.prevertices[i], 0.0);
  auto h = [&](cplx t) { return product_except(poly, t, ia, ib); };
  return integrate_segment(h, A, B, aa, ab, sing).value;
}

// Tail integral over [w, inf) (right = true) or (-inf, w] after t = t_end +- 1/s.
double tail_integral(const ConformalPolygon& poly, bool right, double L) {
  const int n = poly.size();
  const double te = right ? poly.prevertices[n - 1] : poly.prevertices[0];
  const double ainf = alpha(poly.exponent_inf);
  if (ainf <= -1.0) throw DivergenceError("edge to infinity diverges (a_inf <= -2)");
  std::vector<double> d(n);
  std::vector<cplx> sing;
  for (int i = 0; i < n; ++i) {
    d[i] = right ? te - poly.prevertices[i] : poly.prevertices[i] - te;
    if (d[i] > 0.0 && poly.exponents[i] != 0) sing.emplace_back(-1.0 / d[i], 0.0);
  }
  auto h = [&](cplx s) {
    double lm = 0.0;
    for (int i = 0; i < n; ++i)
      if (d[i] > 0.0) lm += alpha(poly.exponents[i]) * std::log1p(s.real() * d[i]);
    return cplx(std::exp(lm), 0.0);
  };
  return integrate_segment(h, 0.0, 1.0 / L, ainf, 0.0, sing).value.real();
}

}  // namespace

void validate(const ConformalPolygon& poly) {
  const int n = poly.size();
  if (n == 0) throw ValidationError("polygon has no finite prevertex");
  if (static_cast<int>(poly.exponents.size()) != n)
    throw ValidationError("exponent list length differs from prevertex count");
  if (!poly.labels.empty() && static_cast<int>(poly.labels.size()) != n)
    throw ValidationError("label list length differs from prevertex count");
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(poly.prevertices[i])) throw ValidationError("prevertex not finite");
    if (i > 0 && !(poly.prevertices[i] > poly.prevertices[i - 1]))
      throw ValidationError("prevertices must be strictly increasing");
  }
  auto admissible = [](int a) { return a == -2 || a == 0 || (a % 2 != 0 && a > -2); };
  int sum = 0;
  bool finite_vertex = poly.exponent_inf > -2;
  for (int a : poly.exponents) {
    if (!admissible(a) || a == 0) {
      std::ostringstream os;
      os << "exponent " << a << " is neither odd (>= -1) nor a strip end (-2)";
      throw ValidationError(os.str());
    }
    sum += a;
    if (a > -2) finite_vertex = true;
  }
  // Any odd order is allowed at infinity; edges into a pole there diverge.
  if (poly.exponent_inf % 2 == 0 && poly.exponent_inf != -2 && poly.exponent_inf != 0)
    throw ValidationError("exponent at infinity must be odd, -2 or 0");
  const int expected = -4 - sum;
  if (poly.exponent_inf != expected) {
    std::ostringstream os;
    os << "exponent sum violated: a_inf is " << poly.exponent_inf << " but must equal "
       << expected << " (deficit " << poly.exponent_inf - expected << ")";
    throw ValidationError(os.str());
  }
  if (!finite_vertex) throw ValidationError("polygon has no finite vertex");
  if (!std::isfinite(std::abs(poly.scale)) || std::abs(poly.scale) == 0.0)
    throw ValidationError("scale must be finite and nonzero");
}

cplx sc_integrand(const ConformalPolygon& poly, cplx t) {
  return poly.scale * product_except(poly, t, -1, -1);
}

cplx eval_sc(const ConformalPolygon& poly, cplx z, cplx base) {
  if (z == base) return 0.0;
  if (z.imag() < 0.0 || base.imag() < 0.0)
    throw DomainError("eval_sc: points must lie in the closed upper half-plane");
  const double scale = std::max({std::abs(z), std::abs(base), spread(poly)});
  const bool both_real = std::abs(z.imag()) <= 1e-14 * scale &&
                         std::abs(base.imag()) <= 1e-14 * scale;
  bool blocked = false;
  if (both_real) {
    const double lo = std::min(z.real(), base.real()), hi = std::max(z.real(), base.real());
    for (double t : poly.prevertices)
      if (t > lo && t < hi) blocked = true;
  }
  cplx value;
  if (!blocked) {
    value = segment_sc(poly, base, z);
  } else {
    const cplx mid = 0.5 * (base + z) + cplx(0.0, 0.5 * std::abs(z - base));
    value = segment_sc(poly, base, mid) + segment_sc(poly, mid, z);
  }
  return poly.scale * value;
}

cplx edge_direction(const ConformalPolygon& poly, int edge) {
  const int e = normalize_edge(poly, edge);
  const int n = poly.size();
  double turn = 0.0;
  const int first = (e == -1) ? 0 : e + 1;
  for (int i = first; i < n; ++i) turn += alpha(poly.exponents[i]);
  return std::polar(1.0, kPi * turn + std::arg(poly.scale));
}

cplx edge_period(const ConformalPolygon& poly, int edge) {
  const int e = normalize_edge(poly, edge);
  const int n = poly.size();
  const cplx dir = edge_direction(poly, e);
  const double mag = std::abs(poly.scale);
  if (e >= 0 && e <= n - 2) {
    const int i = e, j = e + 1;
    const double ai = alpha(poly.exponents[i]), aj = alpha(poly.exponents[j]);
    if (ai <= -1.0 || aj <= -1.0) throw DivergenceError("edge ends at a pole of order >= 1");
    std::vector<cplx> sing;
    for (int k = 0; k < n; ++k)
      if (k != i && k != j && poly.exponents[k] != 0) sing.emplace_back(poly.prevertices[k], 0.0);
    // The integrand has constant phase on the edge; integrate its modulus.
    auto h = [&](cplx t) {
      double lm = 0.0;
      for (int k = 0; k < n; ++k)
        if (k != i && k != j) lm += alpha(poly.exponents[k]) * std::log(std::abs(t.real() - poly.prevertices[k]));
      return cplx(std::exp(lm), 0.0);
    };
    const double a = poly.prevertices[i], b = poly.prevertices[j];
    // The endpoint powers come back with the phase of (a-b)^aj attached;
    // the modulus integral is its absolute value.
    const auto res = integrate_segment(h, cplx(a), cplx(b), ai, aj, sing);
    const double modulus = std::abs(res.value);
    return mag * modulus * dir;
  }
  const double L = spread(poly);
  const bool right = (e == n - 1);
  const int iv = right ? n - 1 : 0;
  if (alpha(poly.exponents[iv]) <= -1.0) throw DivergenceError("edge ends at a pole");
  const double te = poly.prevertices[iv];
  const double w = right ? te + L : te - L;
  // Finite part between the end prevertex and w.
  std::vector<cplx> sing;
  for (int k = 0; k < n; ++k)
    if (k != iv && poly.exponents[k] != 0) sing.emplace_back(poly.prevertices[k], 0.0);
  auto h = [&](cplx t) {
    double lm = 0.0;
    for (int k = 0; k < n; ++k)
      if (k != iv) lm += alpha(poly.exponents[k]) * std::log(std::abs(t.real() - poly.prevertices[k]));
    return cplx(std::exp(lm), 0.0);
  };
  const double near = std::abs(integrate_segment(h, te, w, alpha(poly.exponents[iv]), 0.0, sing).value);
  const double far = tail_integral(poly, right, L);
  return mag * (near + far) * dir;
}

cplx strip_residue(const ConformalPolygon& poly, int vertex) {
  if (vertex < 0 || vertex >= poly.size() || poly.exponents[vertex] != -2)
    throw ValidationError("strip_residue: vertex is not a strip end");
  return poly.scale * product_except(poly, cplx(poly.prevertices[vertex], 0.0), vertex, -1);
}

double crossing_point(const ConformalPolygon& poly, int edge) {
  const int e = normalize_edge(poly, edge);
  const int n = poly.size();
  const double L = spread(poly);
  if (e == -1) return poly.prevertices[0] - 0.5 * L;
  if (e == n - 1) return poly.prevertices[n - 1] + 0.5 * L;
  return 0.5 * (poly.prevertices[e] + poly.prevertices[e + 1]);
}

std::pair<int, int> cycle_edges(const ConformalPolygon& poly, const Cycle& c) {
  int a, b;
  if (c.kind == Cycle::Kind::Encircling) {
    const int e = normalize_edge(poly, c.edge_a);
    const int n = poly.size();
    a = (e == -1) ? n - 1 : e - 1;
    b = (e == n - 1) ? -1 : e + 1;
  } else {
    a = normalize_edge(poly, c.edge_a);
    b = normalize_edge(poly, c.edge_b);
  }
  if (a > b) std::swap(a, b);
  return {a, b};
}

void validate_cycle(const ConformalPolygon& poly, const Cycle& c) {
  const int n = poly.size();
  if (c.edge_a < -1 || c.edge_a > n || c.edge_b < -1 || c.edge_b > n)
    throw ValidationError("cycle references a non-existent edge");
  if (c.orientation != 1 && c.orientation != -1)
    throw ValidationError("cycle orientation must be +1 or -1");
  const auto [a, b] = cycle_edges(poly, c);
  if (b - a < 2) throw ValidationError("connecting cycle joins adjacent edges");
  if (a == -1 && b == n - 1) throw ValidationError("connecting cycle joins adjacent edges");
  int odd = 0;
  for (int k = a + 1; k <= b; ++k) odd += (poly.exponents[k] % 2 != 0);
  if (odd % 2 != 0) throw ValidationError("cycle edges are not parallel; doubled cycle does not close");
}

cplx cycle_period(const ConformalPolygon& poly, const Cycle& c) {
  validate(poly);
  validate_cycle(poly, c);
  const auto [a, b] = cycle_edges(poly, c);
  const double x1 = crossing_point(poly, a), x2 = crossing_point(poly, b);
  const cplx D = eval_sc(poly, x2, x1);
  const cplx dir = edge_direction(poly, b);
  const cplx value = cplx(0.0, 1.0) * dir * std::imag(std::conj(dir) * D);

  // Bookkeeping from the developed staircase.
  bool finite = true;
  cplx sum = 0.0;
  for (int k = a + 1; k <= b - 1 && finite; ++k) {
    try {
      sum += edge_period(poly, k);
    } catch (const DivergenceError&) {
      finite = false;
    }
  }
  if (finite) {
    const cplx alt = cplx(0.0, 1.0) * dir * std::imag(std::conj(dir) * sum);
    const double tol = 1e-9 * std::max({std::abs(value), std::abs(sum), 1e-300});
    if (std::abs(alt - value) > tol && std::abs(alt - value) > 1e-12 * std::abs(poly.scale))
      throw std::logic_error("cycle_period: path and edge-sum periods disagree");
  }
  return static_cast<double>(c.orientation) * value;
}

Loop rectangle_loop(double x1, double x2, double height) {
  if (!(x1 < x2) || !(height > 0.0)) throw ValidationError("rectangle_loop: bad geometry");
  const cplx ih(0.0, height);
  const cplx top_mid = cplx(0.5 * (x1 + x2), height);
  return Loop{{top_mid, x2 + ih, cplx(x2, 0.0), x2 - ih, x1 - ih, cplx(x1, 0.0), x1 + ih}};
}

Loop circle_loop(cplx center, double radius, int segments) {
  Loop l;
  for (int k = 0; k < segments; ++k)
    l.points.push_back(center + std::polar(radius, 0.5 * kPi + 2.0 * kPi * k / segments));
  return l;
}

namespace {

struct Branch {
  std::vector<cplx> pts;   // singular points (may move)
  std::vector<double> al;  // exponents / 2
};

// Integral around a closed polygon with every factor continued along the
// path; logs0 holds log(z0 - p_i) at the first loop point.
cplx loop_integral(const Branch& br, const std::vector<cplx>& loop, std::vector<cplx> logs) {
  const std::size_t m = loop.size();
  cplx total = 0.0;
  std::vector<cplx> active;
  for (std::size_t i = 0; i < br.pts.size(); ++i)
    if (br.al[i] != 0.0) active.push_back(br.pts[i]);
  for (std::size_t k = 0; k < m; ++k) {
    const cplx A = loop[k], B = loop[(k + 1) % m];
    auto h = [&](cplx t) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < br.pts.size(); ++i) {
        if (br.al[i] == 0.0) continue;
        s += br.al[i] * (logs[i] + std::log((t - br.pts[i]) / (A - br.pts[i])));
      }
      return std::exp(s);
    };
    total += integrate_segment(h, A, B, 0.0, 0.0, active).value;
    for (std::size_t i = 0; i < br.pts.size(); ++i)
      logs[i] += std::log((B - br.pts[i]) / (A - br.pts[i]));
  }
  return total;
}

Branch make_branch(const ConformalPolygon& poly) {
  Branch b;
  for (int i = 0; i < poly.size(); ++i) {
    b.pts.emplace_back(poly.prevertices[i], 0.0);
    b.al.push_back(alpha(poly.exponents[i]));
  }
  return b;
}

std::vector<cplx> principal_logs(const Branch& br, cplx z0) {
  std::vector<cplx> logs;
  for (const cplx& p : br.pts) {
    const cplx w = z0 - p;
    logs.emplace_back(std::log(std::abs(w)), arg_uhp(w));
  }
  return logs;
}

}  // namespace

cplx half_loop_integral(const ConformalPolygon& poly, const Loop& loop) {
  if (loop.points.size() < 3 || !(loop.points[0].imag() > 0.0))
    throw ValidationError("loop must start in the open upper half-plane");
  const Branch br = make_branch(poly);
  return 0.5 * poly.scale * loop_integral(br, loop.points, principal_logs(br, loop.points[0]));
}

ContinuationGeometry continuation_geometry(const ConformalPolygon& poly, int j) {
  const int n = poly.size();
  if (j < 0 || j + 1 >= n) throw GeometryError("continuation needs prevertices j and j+1");
  const double tj = poly.prevertices[j];
  const double rho = poly.prevertices[j + 1] - tj;
  double clear = INFINITY;
  for (int i = 0; i < n; ++i)
    if (i != j && i != j + 1) clear = std::min(clear, std::abs(poly.prevertices[i] - tj));
  if (!(clear > 1.05 * rho))
    throw GeometryError("circle of t_{j+1} around t_j meets another prevertex");
  const double finger = std::min(0.2 * rho, 0.3 * (clear - rho));
  return {rho, finger, clear};
}

namespace {

double bump(double s) {
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const double u = s - 1.0;
  return 1.0 - u * u * (3.0 - 2.0 * u);
}

double dist_to_segment(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double l2 = std::norm(ab);
  double s = l2 > 0.0 ? std::real((p - a) * std::conj(ab)) / l2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::abs(p - (a + s * ab));
}

void refine_near(std::vector<cplx>& loop, cplx center, double radius, double max_len) {
  std::vector<cplx> out;
  out.reserve(loop.size() * 2);
  const std::size_t m = loop.size();
  for (std::size_t k = 0; k < m; ++k) {
    const cplx a = loop[k], b = loop[(k + 1) % m];
    out.push_back(a);
    if (dist_to_segment(center, a, b) < radius) {
      const int pieces = static_cast<int>(std::ceil(std::abs(b - a) / max_len));
      for (int q = 1; q < pieces; ++q) out.push_back(a + (b - a) * (double(q) / pieces));
    }
  }
  loop.swap(out);
}

cplx run_continuation(const ConformalPolygon& poly, int j, const Loop& loop0, int steps,
                      int turns) {
  const auto geo = continuation_geometry(poly, j);
  const double r = geo.finger;
  const cplx tj(poly.prevertices[j], 0.0);
  Branch br = make_branch(poly);
  std::vector<cplx> loop = loop0.points;
  const cplx z0 = loop[0];
  std::vector<cplx> logs = principal_logs(br, z0);
  if (turns == 0) return loop_integral(br, loop, logs);

  refine_near(loop, tj, geo.rho + 3.0 * r, 0.25 * r);
  const int total = steps * std::abs(turns);
  const double dir = turns > 0 ? 1.0 : -1.0;
  cplx tau = br.pts[j + 1];
  for (int k = 0; k < total; ++k) {
    const double th1 = dir * 2.0 * kPi * (k + 1) / steps;
    const cplx target = (k + 1 == total) ? br.pts[j + 1] : tj + std::polar(geo.rho, th1);
    const cplx start = tau;
    const double th0 = dir * 2.0 * kPi * k / steps;
    const int sub = std::max(1, static_cast<int>(std::ceil(std::abs(target - start) / (0.1 * r))));
    for (int q = 1; q <= sub; ++q) {
      const double th = th0 + (th1 - th0) * q / sub;
      const cplx next = (q == sub) ? target : tj + std::polar(geo.rho, th);
      const cplx delta = next - tau;
      for (cplx& z : loop) z += delta * bump(std::abs(z - tau) / r);
      if (std::abs(z0 - tau) < 2.5 * r || std::abs(loop[0] - z0) > 0.0)
        throw GeometryError("loop anchor lies in the path of the moving prevertex");
      logs[j + 1] += std::log((z0 - next) / (z0 - tau));
      tau = next;
      refine_near(loop, tau, 3.0 * r, 0.25 * r);
      double closest = INFINITY;
      for (std::size_t s = 0; s < loop.size(); ++s)
        closest = std::min(closest, dist_to_segment(tau, loop[s], loop[(s + 1) % loop.size()]));
      if (closest < 0.25 * r) throw GeometryError("dragged loop collapsed onto the moving prevertex");
    }
  }
  br.pts[j + 1] = tau;
  return loop_integral(br, loop, logs);
}

}  // namespace

cplx continue_loop(const ConformalPolygon& poly, int j, const Loop& loop,
                   const ContinuationOptions& opts) {
  validate(poly);
  if (loop.points.size() < 3 || !(loop.points[0].imag() > 0.0))
    throw ValidationError("loop must start in the open upper half-plane");
  if (opts.turns == 0) return half_loop_integral(poly, loop);
  int steps = std::max(opts.steps, 8);
  cplx prev = run_continuation(poly, j, loop, steps, opts.turns);
  while (steps < opts.max_steps) {
    steps *= 2;
    const cplx cur = run_continuation(poly, j, loop, steps, opts.turns);
    const bool agree = std::abs(cur - prev) <= opts.tol * std::max(std::abs(cur), 1.0);
    prev = cur;
    if (agree) break;
  }
  return 0.5 * poly.scale * prev;
}

Loop cycle_loop(const ConformalPolygon& poly, const Cycle& c, int j) {
  validate_cycle(poly, c);
  const auto [a, b] = cycle_edges(poly, c);
  const double x1 = crossing_point(poly, a), x2 = crossing_point(poly, b);
  double h = 0.5 * (x2 - x1);
  if (j >= 0) {
    const auto geo = continuation_geometry(poly, j);
    h = std::max(h, geo.rho + 3.0 * geo.finger + 0.5 * geo.rho);
  }
  Loop l = rectangle_loop(x1, x2, h);
  if (c.orientation < 0) std::reverse(l.points.begin() + 1, l.points.end());
  return l;
}

cplx continue_period(const ConformalPolygon& poly, int j, const Cycle& c,
                     const ContinuationOptions& opts) {
  const Loop l = cycle_loop(poly, c, j);
  return continue_loop(poly, j, l, opts);
}

double Mobius::operator()(double t) const {
  if (std::isinf(t)) return c == 0.0 ? (a / d > 0 ? t : -t) : a / c;
  const double den = c * t + d;
  if (den == 0.0) return INFINITY;
  return (a * t + b) / den;
}

namespace {
struct M2 {
  double a, b, c, d;
};
M2 mul(const M2& x, const M2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}
// Sends z1 -> 0, z2 -> 1, z3 -> inf.
M2 to_standard(const double z[3]) {
  const bool i1 = std::isinf(z[0]), i2 = std::isinf(z[1]), i3 = std::isinf(z[2]);
  if (i1) return {0.0, z[1] - z[2], 1.0, -z[2]};
  if (i2) return {1.0, -z[0], 1.0, -z[2]};
  if (i3) return {1.0, -z[0], 0.0, z[1] - z[0]};
  return {z[1] - z[2], -z[0] * (z[1] - z[2]), z[1] - z[0], -z[2] * (z[1] - z[0])};
}
}  // namespace

Mobius Mobius::from_points(const double src[3], const double dst[3]) {
  const M2 s = to_standard(src);
  const M2 t = to_standard(dst);
  const M2 tinv{t.d, -t.b, -t.c, t.a};
  M2 m = mul(tinv, s);
  const double det = m.a * m.d - m.b * m.c;
  if (!(det != 0.0)) throw GeometryError("degenerate Moebius data");
  if (det < 0.0) throw GeometryError("Moebius map would reverse orientation");
  const double k = 1.0 / std::sqrt(det);
  return {m.a * k, m.b * k, m.c * k, m.d * k};
}

ConformalPolygon mobius_pullback(const ConformalPolygon& poly, const Mobius& m) {
  validate(poly);
  const Mobius inv = m.inverse();
  struct Pt {
    double s;
    int a;
    std::string label;
  };
  std::vector<Pt> pts;
  for (int i = 0; i < poly.size(); ++i) {
    const double s = inv(poly.prevertices[i]);
    if (!std::isfinite(s)) throw GeometryError("Moebius pullback sends a prevertex to infinity");
    pts.push_back({s, poly.exponents[i], poly.labels.empty() ? "" : poly.labels[i]});
  }
  int a_inf_new = 0;
  if (m.c != 0.0) {
    if (poly.exponent_inf != 0) pts.push_back({-m.d / m.c, poly.exponent_inf, poly.label_inf});
  } else {
    a_inf_new = poly.exponent_inf;
  }
  std::sort(pts.begin(), pts.end(), [](const Pt& x, const Pt& y) { return x.s < y.s; });
  ConformalPolygon out;
  for (const Pt& p : pts) {
    out.prevertices.push_back(p.s);
    out.exponents.push_back(p.a);
    out.labels.push_back(p.label);
  }
  out.exponent_inf = a_inf_new;
  out.label_inf = m.c != 0.0 ? "" : poly.label_inf;
  bool any_label = false;
  for (const auto& l : out.labels) any_label |= !l.empty();
  if (!any_label) out.labels.clear();
  validate(out);
  return out;
}

}  // namespace orthoscherk
