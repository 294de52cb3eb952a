#include "orthoscherk/weierstrass.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include "orthoscherk/errors.hpp"
#include "orthoscherk/extlen.hpp"
#include "orthoscherk/orthodisk.hpp"
#include "orthoscherk/parallel.hpp"
#include "orthoscherk/quadrature.hpp"
#include "orthoscherk/specfun.hpp"

namespace orthoscherk {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I{0.0, 1.0};

using Form3 = std::array<cplx, 3>;

Form3 add(const Form3& a, const Form3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Form3 sub(const Form3& a, const Form3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double norm3(const Form3& a) { return std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2])); }

Form3 combine(cplx gdh, cplx ginvdh, cplx dh, double t) {
  const cplx e = std::polar(1.0, t);
  return {e * 0.5 * (ginvdh - gdh), e * 0.5 * I * (ginvdh + gdh), e * dh};
}

// Strip coordinate: zeta = log((t-1)/(t+1)) on the closed upper half-plane.
cplx zeta_of(cplx t) {
  const cplx w = (t - 1.0) / (t + 1.0);
  return {std::log(std::abs(w)), arg_uhp(w)};
}

// Where a strip point sits: on the lower line (t real, |t| > 1), the upper
// line (t in (-1, 1)) or inside.
enum class Side { Inside, Bottom, Top };

cplx t_of(cplx z, Side side) {
  if (side == Side::Bottom) return {-1.0 / std::tanh(0.5 * z.real()), 0.0};
  if (side == Side::Top) return {-std::tanh(0.5 * z.real()), 0.0};
  const cplx E = std::exp(z);
  const double den = std::norm(1.0 - E);
  return {(1.0 - std::norm(E)) / den, 2.0 * E.imag() / den};
}

// Product over the P prevertices of (t - p)^{a/2}. Together with the strip
// Jacobian the end factors collapse to 1/2, so the forms per dzeta are
//   Gdh = s1/2 * prod,  G^{-1}dh = s2/2 / prod,  dh = k/2.
cplx p_product(const ConformalPolygon& poly, cplx t) {
  cplx out{1.0, 0.0};
  for (int i = 1; i + 1 < poly.size(); ++i) out *= pow_uhp(t - poly.prevertices[i], 0.5 * poly.exponents[i]);
  return out;
}

}  // namespace

cplx WeierstrassData::gdh_at(cplx t) const { return sc_integrand(gdh, t); }
cplx WeierstrassData::ginvdh_at(cplx t) const { return sc_integrand(ginvdh, t); }
cplx WeierstrassData::dh_at(cplx t) const { return k / ((t - 1.0) * (t + 1.0)); }
cplx WeierstrassData::g_at(cplx t) const { return gdh.scale * p_product(gdh, t) / k; }

std::array<cplx, 3> WeierstrassData::omega(cplx t) const {
  return combine(gdh_at(t), ginvdh_at(t), dh_at(t), this->t);
}

cplx genus0_sphere_dh(double phi, cplx z) {
  const double psi = 0.5 * phi;
  return I / (z * (z * z + 1.0 / (z * z) - 2.0 * std::cos(2.0 * psi)));
}

WeierstrassData genus0_data(double phi) {
  if (!(phi > 0.0 && phi <= kPi / 2 + 1e-6)) throw ValidationError("phi must lie in (0, pi/2]");
  WeierstrassData d;
  d.genus = 0;
  d.phi = std::abs(phi - kPi / 2) <= 1e-6 ? kPi / 2 : phi;
  d.has_half_plane = d.phi == kPi / 2;
  if (d.has_half_plane) {
    // Chart w = -i z^2 on the sector pi/4 <= arg z <= 3pi/4, bounded by the
    // two planar symmetry rays; the punctures e^{i pi/4}, e^{3i pi/4} land on
    // w = 1, -1 and z = 0 (P_0), z = infinity (V) on w = 0, infinity.
    // There G = e^{i pi/4} w^{1/2} and dh = dw / (2 (w^2 - 1)).
    d.gdh.prevertices = {-1.0, 0.0, 1.0};
    d.gdh.exponents = {-2, 1, -2};
    d.gdh.exponent_inf = -1;
    d.gdh.labels = {"E2", "P0", "E1"};
    d.gdh.label_inf = "V";
    d.gdh.scale = std::polar(0.5, kPi / 4);
    d.ginvdh = d.gdh;
    d.ginvdh.exponents = {-2, -1, -2};
    d.ginvdh.exponent_inf = 1;
    d.ginvdh.scale = std::polar(0.5, -kPi / 4);
    d.k = 0.5;
  }
  return d;
}

WeierstrassData recover_data(const FittedPair& fitted, double reflexive_tol) {
  const int g = fitted.pair.coords.genus;
  const auto pg = free_prevertices(fitted.gdh, g);
  const auto pi = free_prevertices(fitted.ginvdh, g);
  std::vector<double> p(pg.size());
  double gap = 0.0;
  for (std::size_t i = 0; i < pg.size(); ++i) {
    gap = std::max(gap, std::abs(pg[i] - pi[i]));
    p[i] = 0.5 * (pg[i] + pi[i]);
  }
  if (gap > reflexive_tol)
    throw ValidationError("recover_data: the pair is not reflexive (prevertex gap " + std::to_string(gap) + ")");

  WeierstrassData d;
  d.genus = g;
  d.gdh = symmetric_polygon(g, Domain::Gdh, p);
  d.ginvdh = symmetric_polygon(g, Domain::GinvDh, p);
  // Same base edge, same base direction: the developed images are exact
  // conjugates of each other.
  d.gdh.scale = fitted.pair.gdh.edge_vectors[0] / edge_period(d.gdh, 1);
  d.ginvdh.scale = fitted.pair.ginvdh.edge_vectors[0] / edge_period(d.ginvdh, 1);
  // Rotate about the vertical axis so the arc P_{2g} E_1 carries the same
  // Gdh direction as the genus-0 chart. Conjugate factors keep the period
  // conditions and dh unchanged.
  const int last = 2 * g + 1;
  const cplx dir = edge_direction(d.gdh, last);
  const cplx u = -std::polar(1.0, kPi / 4) / dir;
  d.gdh.scale *= u;
  d.ginvdh.scale *= std::conj(u);
  cplx kk = std::sqrt(d.gdh.scale * d.ginvdh.scale);
  if (kk.real() < 0) kk = -kk;
  if (std::abs(kk.imag()) > 1e-8 * std::abs(kk))
    throw GeometryError("recover_data: scale product is not real; dh would not be real on the boundary");
  d.k = kk.real();
  return d;
}

WeierstrassData recover_data(const GeometricCoords& coords, double reflexive_tol) {
  return recover_data(fit_pair(coords), reflexive_tol);
}

WeierstrassData associate_family(const WeierstrassData& data, double t) {
  WeierstrassData out = data;
  out.t = data.t + t;
  return out;
}

double conjugacy_residual(const WeierstrassData& data) {
  double worst = 0.0, size = 0.0;
  for (int e = 1; e <= 2 * data.genus; ++e) {
    const cplx a = edge_period(data.gdh, e);
    const cplx b = edge_period(data.ginvdh, e);
    worst = std::max(worst, std::abs(a - std::conj(b)));
    size = std::max(size, std::abs(a));
  }
  return size > 0 ? worst / size : 0.0;
}

Vec3 normal_from_g(cplx g) {
  const double m = std::norm(g);
  if (!std::isfinite(m) || m > 1e300) return {0.0, 0.0, 1.0};
  return {2.0 * g.real() / (m + 1.0), 2.0 * g.imag() / (m + 1.0), (m - 1.0) / (m + 1.0)};
}

namespace {

// Nodes on [0, 1] crowding quadratically toward 0.
std::vector<double> graded(int n) {
  std::vector<double> s(n + 1);
  for (int j = 0; j <= n; ++j) s[j] = std::pow(static_cast<double>(j) / n, 2);
  return s;
}

struct StripGrid {
  std::vector<double> x, y;
  std::vector<int> top_singular;  // x indices of P prevertices
  int bottom_singular = -1;       // x index of V
};

StripGrid make_grid(const WeierstrassData& d, int half, double X) {
  std::vector<double> centers{0.0};
  for (int i = 1; i + 1 < d.gdh.size(); ++i) {
    const double p = d.gdh.prevertices[i];
    centers.push_back(std::log((1.0 - p) / (1.0 + p)));
  }
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                centers.end());
  X = std::max(X, std::max(std::abs(centers.front()), std::abs(centers.back())) + kPi);

  // Pieces are graded toward their center end; a piece's cell count is a
  // fixed multiple of `half`, so doubling the resolution halves every cell.
  std::vector<double> xs;
  auto piece = [&](double c, double e, bool reversed) {
    const int m = std::max(1, static_cast<int>(std::ceil(std::abs(e - c) / kPi)));
    const auto s = graded(half * m);
    std::vector<double> pts;
    for (double v : s) pts.push_back(c + (e - c) * v);
    if (reversed) std::reverse(pts.begin(), pts.end());
    for (double v : pts)
      if (xs.empty() || v > xs.back() + 1e-15) xs.push_back(v);
  };
  piece(centers.front(), -X, true);
  for (std::size_t i = 0; i + 1 < centers.size(); ++i) {
    const double mid = 0.5 * (centers[i] + centers[i + 1]);
    piece(centers[i], mid, false);
    piece(centers[i + 1], mid, true);
  }
  piece(centers.back(), X, false);

  StripGrid grid;
  grid.x = xs;
  const auto s = graded(half);
  for (double v : s) grid.y.push_back(0.5 * kPi * v);
  for (int j = half - 1; j >= 0; --j) grid.y.push_back(kPi - 0.5 * kPi * s[j]);
  auto index_of = [&](double v) {
    const auto it = std::min_element(xs.begin(), xs.end(),
                                      [&](double a, double b) { return std::abs(a - v) < std::abs(b - v); });
    return static_cast<int>(it - xs.begin());
  };
  for (int i = 1; i + 1 < d.gdh.size(); ++i) {
    const double p = d.gdh.prevertices[i];
    grid.top_singular.push_back(index_of(std::log((1.0 - p) / (1.0 + p))));
  }
  grid.bottom_singular = index_of(0.0);
  return grid;
}

// Coordinate forms per dzeta at a strip point.
struct StripForms {
  const WeierstrassData& d;
  Form3 operator()(cplx z, Side side) const {
    const cplx t = t_of(z, side);
    const cplx pg = p_product(d.gdh, t);
    const cplx pi = p_product(d.ginvdh, t);
    return combine(0.5 * d.gdh.scale * pg, 0.5 * d.ginvdh.scale * pi, 0.5 * d.k, d.t);
  }
  cplx g(cplx z, Side side) const { return d.gdh.scale * p_product(d.gdh, t_of(z, side)) / d.k; }
};

// Integral along the straight strip segment a -> b. A singular endpoint (a
// prevertex where the forms behave like (zeta - c)^{+-1/2}) is handled with
// zeta = c + u^2 e, which makes the integrand smooth in u.
Form3 edge_integral(const StripForms& f, cplx a, cplx b, Side side, bool sing_a, bool sing_b,
                    const std::vector<cplx>& singular) {
  if (sing_b && !sing_a) {
    const Form3 r = edge_integral(f, b, a, side, true, false, singular);
    return {-r[0], -r[1], -r[2]};
  }
  const double len = std::abs(b - a);
  const cplx e = (b - a) / len;
  Form3 acc{};
  if (sing_a) {
    const auto& rule = gauss_legendre(20);
    const double su = std::sqrt(len);
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
      const double u = 0.5 * su * (rule.x[q] + 1.0);
      const Form3 v = f(a + u * u * e, side);
      const double w = rule.w[q] * 0.5 * su * 2.0 * u;
      for (int c = 0; c < 3; ++c) acc[c] += w * v[c] * e;
    }
    return acc;
  }
  double near = INFINITY;
  const cplx mid = 0.5 * (a + b);
  for (const cplx& s : singular) near = std::min(near, std::abs(mid - s));
  const int n = near < 4.0 * len ? 24 : 10;
  const auto& rule = gauss_legendre(n);
  for (std::size_t q = 0; q < rule.x.size(); ++q) {
    const cplx z = mid + 0.5 * len * rule.x[q] * e;
    const Form3 v = f(z, side);
    const double w = rule.w[q] * 0.5 * len;
    for (int c = 0; c < 3; ++c) acc[c] += w * v[c] * e;
  }
  return acc;
}

int boundary_edge_index(const ConformalPolygon& poly, double t) {
  int k = 0;
  while (k < poly.size() && poly.prevertices[k] < t) ++k;
  // t lies between prevertex k-1 and k, which is edge k-1 (edge n for k = 0).
  return k == 0 ? poly.size() : k - 1;
}


using EdgeGrid = std::vector<std::vector<Form3>>;

// Structured grid of nx x ny cells, some of which may be cut away. h[j][i]
// is the integral along row j from column i to i+1, v[j][i] along column i
// from row j to j+1. Positions accumulate along a breadth-first spanning
// tree of the kept edges; every kept cell is then checked for closure.
struct GridPatch {
  int nx = 0, ny = 0;
  EdgeGrid h, v;
  std::vector<char> keep;  // per cell, row-major
  std::function<Vec3(int, int)> normal;
  std::function<int(int, int)> tag;

  bool cell(int j, int i) const { return j >= 0 && j < ny && i >= 0 && i < nx && keep[j * nx + i]; }
};

// Orient the triangles so the geometric normals agree with G. The normal of
// a minimal immersion from Re int omega is the stereographic image of G up to
// one global sign fixed by the chart orientation.
void orient_by_normals(SurfaceMesh& mesh) {
  const auto geo = vertex_normals(mesh);
  double s = 0.0;
  for (std::size_t i = 0; i < geo.size(); ++i)
    s += geo[i][0] * mesh.normals[i][0] + geo[i][1] * mesh.normals[i][1] + geo[i][2] * mesh.normals[i][2];
  if (s < 0)
    for (auto& t : mesh.triangles) std::swap(t[1], t[2]);
}

SurfaceMesh finish_grid(const GridPatch& g, double& worst) {
  const int cols = g.nx + 1;
  const int nv = (g.ny + 1) * cols;
  auto used = [&](int j, int i) {
    return g.cell(j, i) || g.cell(j - 1, i) || g.cell(j, i - 1) || g.cell(j - 1, i - 1);
  };
  std::vector<Form3> F(nv);
  std::vector<char> seen(nv, 0);
  std::vector<int> queue;
  for (int id = 0; id < nv && queue.empty(); ++id)
    if (used(id / cols, id % cols)) {
      seen[id] = 1;
      queue.push_back(id);
    }
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const int j = queue[q] / cols, i = queue[q] % cols;
    auto visit = [&](int jj, int ii, const Form3& step) {
      const int id = jj * cols + ii;
      if (seen[id]) return;
      seen[id] = 1;
      F[id] = add(F[queue[q]], step);
      queue.push_back(id);
    };
    if (i < g.nx && (g.cell(j, i) || g.cell(j - 1, i))) visit(j, i + 1, g.h[j][i]);
    if (i > 0 && (g.cell(j, i - 1) || g.cell(j - 1, i - 1))) visit(j, i - 1, sub({}, g.h[j][i - 1]));
    if (j < g.ny && (g.cell(j, i) || g.cell(j, i - 1))) visit(j + 1, i, g.v[j][i]);
    if (j > 0 && (g.cell(j - 1, i) || g.cell(j - 1, i - 1))) visit(j - 1, i, sub({}, g.v[j - 1][i]));
  }

  SurfaceMesh mesh;
  mesh.rows = g.ny + 1;
  mesh.cols = cols;
  std::vector<int> index(nv, -1);
  for (int id = 0; id < nv; ++id) {
    if (!seen[id]) continue;
    const int j = id / cols, i = id % cols;
    index[id] = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back({F[id][0].real(), F[id][1].real(), F[id][2].real()});
    mesh.normals.push_back(g.normal(j, i));
    mesh.boundary_segment.push_back(g.tag(j, i));
  }
  const double diam = diameter(mesh);
  worst = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!g.cell(j, i)) continue;
      const Form3 loop = sub(add(g.h[j][i], g.v[j][i + 1]), add(g.h[j + 1][i], g.v[j][i]));
      worst = std::max(worst, norm3(loop));
      const int a = index[j * cols + i], b = index[j * cols + i + 1];
      const int c = index[(j + 1) * cols + i + 1], d = index[(j + 1) * cols + i];
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  worst /= diam;
  orient_by_normals(mesh);
  mesh.provenance = {"patch"};
  mesh.triangle_block.assign(mesh.triangles.size(), 0);
  return mesh;
}

GridPatch strip_patch(const WeierstrassData& data, int resolution, double h_cut) {
  const int half = std::max(1, (resolution + 1) / 2);
  // Height is (k/2) Re zeta, so |height| <= h_cut means |Re zeta| <= 2 h_cut / k.
  const StripGrid grid = make_grid(data, half, 2.0 * h_cut / std::abs(data.k));
  GridPatch g;
  g.nx = static_cast<int>(grid.x.size()) - 1;
  g.ny = static_cast<int>(grid.y.size()) - 1;
  const int nx = g.nx, ny = g.ny;
  auto zeta = [grid](int j, int i) { return cplx{grid.x[i], grid.y[j]}; };
  auto side_of_row = [ny](int j) { return j == 0 ? Side::Bottom : (j == ny ? Side::Top : Side::Inside); };
  std::vector<char> top_sing(nx + 1, 0);
  for (int i : grid.top_singular) top_sing[i] = 1;
  const int vcol = grid.bottom_singular;
  auto singular = [top_sing, ny, vcol](int j, int i) { return (j == ny && top_sing[i]) || (j == 0 && i == vcol); };
  std::vector<cplx> sing_pts;
  for (int i : grid.top_singular) sing_pts.push_back(zeta(ny, i));
  sing_pts.push_back(zeta(0, vcol));

  const StripForms forms{data};
  g.h.assign(ny + 1, std::vector<Form3>(nx));
  g.v.assign(ny, std::vector<Form3>(nx + 1));
  parallel_for(ny + 1, [&](int j) {
    for (int i = 0; i < nx; ++i)
      g.h[j][i] = edge_integral(forms, zeta(j, i), zeta(j, i + 1), side_of_row(j), singular(j, i),
                                singular(j, i + 1), sing_pts);
    if (j < ny)
      for (int i = 0; i <= nx; ++i)
        g.v[j][i] = edge_integral(forms, zeta(j, i), zeta(j + 1, i), Side::Inside, singular(j, i),
                                  singular(j + 1, i), sing_pts);
  });
  g.keep.assign(nx * ny, 1);
  g.normal = [=](int j, int i) {
    cplx z = zeta(j, i);
    Side side = side_of_row(j);
    if (singular(j, i)) {
      // G is 0 or infinite there; sample just inside.
      z += cplx{0.0, j == 0 ? 1e-13 : -1e-13};
      side = Side::Inside;
    }
    return normal_from_g(forms.g(z, side));
  };
  const ConformalPolygon poly = data.gdh;
  g.tag = [=](int j, int i) {
    if (singular(j, i)) return -2;
    if (j == 0 || j == ny) return boundary_edge_index(poly, t_of(zeta(j, i), side_of_row(j)).real());
    if (i == 0 || i == nx) return -3;
    return -1;
  };
  return g;
}

// Genus 0 square chart. With u = sl(q/2) (lemniscate sine) and t = u^2 the
// square [0, w]^2, w the lemniscate constant, maps conformally onto the
// half-plane with corners P_0 = 0, E_1 = w, V = w(1 + i), E_2 = i w. P_0 and V
// are genuine right-angle corners of the surface there, so a tensor grid is
// smooth up to them; the two end corners are cut away. In Jacobi terms
// (m = 1/2, argument q / sqrt 2) the forms per dq are
//   Gdh = -s_G sn^2 / (2 cn),  G^{-1}dh = -s_I dn^2 / cn,  dh = -k sn dn / (sqrt2 cn).
struct SquareForms {
  const WeierstrassData& d;
  Form3 operator()(cplx q) const {
    const JacobiValues j = jacobi(q / std::sqrt(2.0), 0.5);
    const cplx gdh = -d.gdh.scale * j.sn * j.sn / (2.0 * j.cn);
    const cplx ginv = -d.ginvdh.scale * j.dn * j.dn / j.cn;
    const cplx dh = -d.k * j.sn * j.dn / (std::sqrt(2.0) * j.cn);
    return combine(gdh, ginv, dh, d.t);
  }
  cplx g(cplx q) const {
    const JacobiValues j = jacobi(q / std::sqrt(2.0), 0.5);
    return d.gdh.scale / d.k * j.sn / (std::sqrt(2.0) * j.dn);
  }
};

Form3 straight_integral(const SquareForms& f, cplx a, cplx b) {
  const auto& rule = gauss_legendre(10);
  const cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Form3 acc{};
  for (std::size_t q = 0; q < rule.x.size(); ++q) {
    const Form3 v = f(mid + rule.x[q] * half);
    for (int c = 0; c < 3; ++c) acc[c] += rule.w[q] * half * v[c];
  }
  return acc;
}

// A triangulated chart region: vertex parameters, tags and triangles
// (counterclockwise in the chart).
struct ChartMesh {
  std::vector<cplx> q;
  std::vector<int> tag;
  std::vector<std::array<int, 3>> tris;

  int add(cplx p, int t) {
    q.push_back(p);
    tag.push_back(t);
    return static_cast<int>(q.size()) - 1;
  }
  void tri(int a, int b, int c) {
    const double s = std::imag(std::conj(q[b] - q[a]) * (q[c] - q[a]));
    if (s > 0) tris.push_back({a, b, c});
    else tris.push_back({a, c, b});
  }
};

// Positions from straight-segment edge integrals accumulated along a
// breadth-first tree from vertex 0; every triangle is checked for closure.
SurfaceMesh finish_chart(const ChartMesh& cm, const SquareForms& forms, double& worst) {
  const int nv = static_cast<int>(cm.q.size());
  std::map<std::pair<int, int>, int> edge_id;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<std::pair<int, int>>> adj(nv);
  for (const auto& t : cm.tris)
    for (int k = 0; k < 3; ++k) {
      const int a = std::min(t[k], t[(k + 1) % 3]), b = std::max(t[k], t[(k + 1) % 3]);
      if (edge_id.emplace(std::make_pair(a, b), static_cast<int>(edges.size())).second) {
        adj[a].push_back({b, static_cast<int>(edges.size())});
        adj[b].push_back({a, static_cast<int>(edges.size())});
        edges.push_back({a, b});
      }
    }
  std::vector<Form3> I(edges.size());
  parallel_for(static_cast<int>(edges.size()), [&](int e) {
    I[e] = straight_integral(forms, cm.q[edges[e].first], cm.q[edges[e].second]);
  });
  auto along = [&](int a, int b) {
    const Form3& v = I[edge_id.at({std::min(a, b), std::max(a, b)})];
    return a < b ? v : sub({}, v);
  };
  std::vector<Form3> F(nv);
  std::vector<char> seen(nv, 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const int a = queue[k];
    for (const auto& [b, e] : adj[a]) {
      if (seen[b]) continue;
      seen[b] = 1;
      F[b] = add(F[a], along(a, b));
      queue.push_back(b);
    }
  }
  if (static_cast<int>(queue.size()) != nv) throw TopologyError("integrate_patch: chart mesh is disconnected");

  SurfaceMesh mesh;
  for (int i = 0; i < nv; ++i) {
    mesh.vertices.push_back({F[i][0].real(), F[i][1].real(), F[i][2].real()});
    mesh.normals.push_back(normal_from_g(forms.g(cm.q[i])));
    mesh.boundary_segment.push_back(cm.tag[i]);
  }
  worst = 0.0;
  for (const auto& t : cm.tris) {
    const Form3 loop = add(add(along(t[0], t[1]), along(t[1], t[2])), along(t[2], t[0]));
    worst = std::max(worst, norm3(loop));
    mesh.triangles.push_back(t);
  }
  worst /= diameter(mesh);
  orient_by_normals(mesh);
  mesh.provenance = {"patch"};
  mesh.triangle_block.assign(mesh.triangles.size(), 0);
  return mesh;
}

// Square chart mesh: a uniform n x n grid with an m x m notch at each end
// corner, log-polar rings around the end corners down to the cut radius (on
// the strip these are straight grid lines), and a zipper triangulation
// between the outer ring and the notch. The only irregular triangles are at
// distance ~ m h from an end, where the surface is flat to O(h^2).
SurfaceMesh square_mesh(const WeierstrassData& data, int resolution, double h_cut, double& worst, int& cells) {
  const double side = std::sqrt(2.0) * elliptic_k(std::sqrt(0.5));
  const int n = 2 * resolution;
  const int m = 2;
  const int n_theta = 8;
  const double h = side / n;
  // Near E_1, t - 1 ~ -(q - w)^2 / 2 and the height is k log(|q - w| / 2) up
  // to O(|q - w|^2); the cut ring sits where that reaches -h_cut.
  const double rho = 2.0 * std::exp(-h_cut / std::abs(data.k));
  const double r0 = m * h;
  if (n < 4 * m || !(r0 > rho)) throw ValidationError("integrate_patch: resolution out of range");

  ChartMesh cm;
  auto coord = [&](int i) { return i == n ? side : i * h; };
  auto notch = [&](int j, int i) { return (i >= n - m && j < m) || (i < m && j >= n - m); };
  auto used = [&](int j, int i) {
    for (int dj = -1; dj <= 0; ++dj)
      for (int di = -1; di <= 0; ++di) {
        const int jj = j + dj, ii = i + di;
        if (jj >= 0 && jj < n && ii >= 0 && ii < n && !notch(jj, ii)) return true;
      }
    return false;
  };
  std::vector<int> id((n + 1) * (n + 1), -1);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      if (!used(j, i)) continue;
      int t = -1;
      if ((i == 0 && j == 0) || (i == n && j == n)) t = -2;  // P_0, V
      else if (j == 0) t = 1;                                 // P_0 E_1, t in (0, 1)
      else if (i == n) t = 2;                                 // E_1 V, t > 1
      else if (j == n) t = 3;                                 // V E_2, t < -1
      else if (i == 0) t = 0;                                 // E_2 P_0, t in (-1, 0)
      id[j * (n + 1) + i] = cm.add({coord(i), coord(j)}, t);
    }
  auto vid = [&](int j, int i) { return id[j * (n + 1) + i]; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (notch(j, i)) continue;
      cm.tri(vid(j, i), vid(j, i + 1), vid(j + 1, i + 1));
      cm.tri(vid(j, i), vid(j + 1, i + 1), vid(j + 1, i));
    }
  cells = n;

  struct End {
    cplx corner;
    double theta0;
    int tag0, tag1;
    std::vector<int> notch_path;
  };
  End ends[2];
  ends[0] = {cplx{side, 0.0}, kPi, 1, 2, {}};
  for (int j = 0; j <= m; ++j) ends[0].notch_path.push_back(vid(j, n - m));
  for (int i = n - m + 1; i <= n; ++i) ends[0].notch_path.push_back(vid(m, i));
  ends[1] = {cplx{0.0, side}, 0.0, 3, 0, {}};
  for (int j = n; j >= n - m; --j) ends[1].notch_path.push_back(vid(j, m));
  for (int i = m - 1; i >= 0; --i) ends[1].notch_path.push_back(vid(n - m, i));

  const double dtheta = 0.5 * kPi / n_theta;
  const int rings = std::max(1, static_cast<int>(std::ceil(std::log(r0 / rho) / dtheta)));
  for (const End& e : ends) {
    std::vector<std::vector<int>> ring(rings + 1, std::vector<int>(n_theta + 1));
    for (int l = 0; l <= rings; ++l) {
      const double r = r0 * std::pow(rho / r0, static_cast<double>(l) / rings);
      for (int k = 0; k <= n_theta; ++k) {
        if (l == 0 && k == 0) {
          ring[l][k] = e.notch_path.front();
          continue;
        }
        if (l == 0 && k == n_theta) {
          ring[l][k] = e.notch_path.back();
          continue;
        }
        cplx p = e.corner + std::polar(r, e.theta0 - k * dtheta);
        // Keep the edge points exactly on the square's sides.
        if (k == 0) p = e.corner + (e.theta0 == kPi ? cplx{-r, 0.0} : cplx{r, 0.0});
        if (k == n_theta) p = e.corner + (e.theta0 == kPi ? cplx{0.0, r} : cplx{0.0, -r});
        const int t = k == 0 ? e.tag0 : (k == n_theta ? e.tag1 : (l == rings ? -3 : -1));
        ring[l][k] = cm.add(p, t);
      }
    }
    for (int l = 0; l < rings; ++l)
      for (int k = 0; k < n_theta; ++k) {
        cm.tri(ring[l][k], ring[l][k + 1], ring[l + 1][k + 1]);
        cm.tri(ring[l][k], ring[l + 1][k + 1], ring[l + 1][k]);
      }
    // Zipper between the outer ring A and the notch path B; they share their
    // end points, so start on the edge A_0 B_1 and stop once the last pair is
    // a segment of one chain.
    const auto& A = ring[0];
    const auto& B = e.notch_path;
    const int na = n_theta, nb = static_cast<int>(B.size()) - 1;
    int i = 0, j = 1;
    while (i + j < na + nb - 1) {
      bool adv_a;
      if (i == na) adv_a = false;
      else if (j == nb) adv_a = true;
      else adv_a = std::abs(cm.q[A[i + 1]] - cm.q[B[j]]) < std::abs(cm.q[A[i]] - cm.q[B[j + 1]]);
      if (adv_a) {
        cm.tri(A[i], A[i + 1], B[j]);
        ++i;
      } else {
        cm.tri(A[i], B[j + 1], B[j]);
        ++j;
      }
    }
  }
  return finish_chart(cm, SquareForms{data}, worst);
}

}  // namespace

SurfaceMesh integrate_patch(const WeierstrassData& data, int resolution, const PatchOptions& opts,
                            PatchReport* report) {
  if (!data.has_half_plane) throw NotSupportedError("integrate_patch: no half-plane chart for this data");
  if (resolution < 1) throw ValidationError("resolution must be positive");
  const double lattice = kPi * std::abs(data.k);
  const double h_cut = opts.h_cut_lattice * lattice;
  double worst = 0.0;
  SurfaceMesh mesh;
  int nx = 0, ny = 0;
  if (data.genus == 0) {
    mesh = square_mesh(data, resolution, h_cut, worst, nx);
    ny = nx;
  } else {
    const GridPatch grid = strip_patch(data, resolution, h_cut);
    mesh = finish_grid(grid, worst);
    nx = grid.nx;
    ny = grid.ny;
  }
  if (report) {
    report->max_loop_residual = worst;
    report->diameter = diameter(mesh);
    report->lattice_length = lattice;
    report->h_cut = h_cut;
    report->nx = nx;
    report->ny = ny;
  }
  if (worst > opts.closure_tol)
    throw PeriodClosureError("integrate_patch: loop residual " + std::to_string(worst) + " exceeds tolerance");
  return mesh;
}

Vec3 straight_line_bisector(const SurfaceMesh& patch) {
  std::map<int, std::vector<int>> groups;
  for (std::size_t i = 0; i < patch.boundary_segment.size(); ++i)
    if (patch.boundary_segment[i] >= 0) groups[patch.boundary_segment[i]].push_back(static_cast<int>(i));
  struct Arc {
    std::vector<int> ids;
    double z = 0.0, length = 0.0;
  };
  std::vector<Arc> arcs;
  for (const auto& [seg, ids] : groups) {
    if (ids.size() < 2) continue;
    Arc a{ids, 0.0, 0.0};
    double zmin = 1e300, zmax = -1e300;
    for (int i : ids) {
      zmin = std::min(zmin, patch.vertices[i][2]);
      zmax = std::max(zmax, patch.vertices[i][2]);
      for (int j : ids)
        a.length = std::max(a.length, std::hypot(patch.vertices[i][0] - patch.vertices[j][0],
                                                 patch.vertices[i][1] - patch.vertices[j][1]));
    }
    a.z = 0.5 * (zmin + zmax);
    // Horizontal straight lines only.
    if (zmax - zmin <= 1e-6 * std::max(1.0, a.length)) arcs.push_back(std::move(a));
  }
  // Best pair: two long, non-parallel lines at one height sharing an endpoint.
  double best = -1.0;
  Vec3 dir{0.0, 1.0, 0.0};
  for (std::size_t a = 0; a < arcs.size(); ++a)
    for (std::size_t b = a + 1; b < arcs.size(); ++b) {
      const Arc &A = arcs[a], &B = arcs[b];
      double scale = std::max(A.length, B.length);
      if (std::abs(A.z - B.z) > 1e-6 * scale) continue;
      double gap = 1e300;
      int ca = A.ids[0], cb = B.ids[0];
      for (int i : A.ids)
        for (int j : B.ids) {
          double d = std::hypot(patch.vertices[i][0] - patch.vertices[j][0],
                                patch.vertices[i][1] - patch.vertices[j][1]);
          if (d < gap) gap = d, ca = i, cb = j;
        }
      if (gap > 0.05 * scale) continue;
      auto away = [&](const Arc& arc, int c) {
        double far = -1.0;
        double ux = 0.0, uy = 0.0;
        for (int i : arc.ids) {
          double dx = patch.vertices[i][0] - patch.vertices[c][0], dy = patch.vertices[i][1] - patch.vertices[c][1];
          double d = std::hypot(dx, dy);
          if (d > far) far = d, ux = dx / d, uy = dy / d;
        }
        return std::array<double, 2>{ux, uy};
      };
      auto ua = away(A, ca), ub = away(B, cb);
      if (std::abs(ua[0] * ub[1] - ua[1] * ub[0]) < 0.5) continue;  // near parallel
      double score = A.length + B.length;
      if (score > best) {
        best = score;
        double bx = ua[0] + ub[0], by = ua[1] + ub[1], n = std::hypot(bx, by);
        dir = {bx / n, by / n, 0.0};
      }
    }
  if (best < 0.0) throw GeometryError("straight_line_bisector: no pair of meeting horizontal lines");
  return dir;
}

std::vector<SymmetryPlane> symmetry_planes(const SurfaceMesh& patch, double tol) {
  std::map<int, std::vector<int>> groups;
  for (std::size_t i = 0; i < patch.boundary_segment.size(); ++i)
    if (patch.boundary_segment[i] >= 0) groups[patch.boundary_segment[i]].push_back(static_cast<int>(i));
  std::vector<SymmetryPlane> planes;
  std::optional<Vec3> ref[2];
  for (const auto& [seg, ids] : groups) {
    if (ids.size() < 2) continue;
    double mx = 0, my = 0;
    for (int i : ids) {
      mx += patch.vertices[i][0];
      my += patch.vertices[i][1];
    }
    mx /= ids.size();
    my /= ids.size();
    double sxx = 0, sxy = 0, syy = 0;
    for (int i : ids) {
      const double dx = patch.vertices[i][0] - mx, dy = patch.vertices[i][1] - my;
      sxx += dx * dx;
      sxy += dx * dy;
      syy += dy * dy;
    }
    // Principal direction of the horizontal trace; the plane normal is
    // perpendicular to it.
    const double ang = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    Vec3 n{-std::sin(ang), std::cos(ang), 0.0};
    int fam = 0;
    if (!ref[0]) {
      ref[0] = n;
    } else if (std::abs(n[0] * (*ref[0])[0] + n[1] * (*ref[0])[1]) > 0.9) {
      fam = 0;
    } else {
      fam = 1;
      if (!ref[1]) ref[1] = n;
    }
    if (n[0] * (*ref[fam])[0] + n[1] * (*ref[fam])[1] < 0) n = {-n[0], -n[1], 0.0};
    const double off = n[0] * mx + n[1] * my;
    double dev = 0.0;
    for (int i : ids) dev = std::max(dev, std::abs(n[0] * patch.vertices[i][0] + n[1] * patch.vertices[i][1] - off));
    auto it = std::find_if(planes.begin(), planes.end(), [&](const SymmetryPlane& p) {
      return p.family == fam && std::abs(p.offset - off) < tol;
    });
    if (it == planes.end()) {
      planes.push_back({n, off, fam, {seg}, dev});
    } else {
      it->segments.push_back(seg);
      it->max_deviation = std::max(it->max_deviation, dev);
    }
  }
  std::sort(planes.begin(), planes.end(), [](const SymmetryPlane& a, const SymmetryPlane& b) {
    return a.family != b.family ? a.family < b.family : a.offset < b.offset;
  });
  return planes;
}

namespace {

Vec3 reflect(const Vec3& x, const SymmetryPlane& p) {
  const double s = 2.0 * (p.normal[0] * x[0] + p.normal[1] * x[1] - p.offset);
  return {x[0] - s * p.normal[0], x[1] - s * p.normal[1], x[2]};
}
Vec3 reflect_dir(const Vec3& v, const SymmetryPlane& p) {
  const double s = 2.0 * (p.normal[0] * v[0] + p.normal[1] * v[1]);
  return {v[0] - s * p.normal[0], v[1] - s * p.normal[1], v[2]};
}

}  // namespace

SurfaceMesh assemble(const SurfaceMesh& patch, int n1, int n2, AssemblyReport* report, double seam_tol) {
  if (n1 < 1 || n2 < 1) throw ValidationError("assemble: extent must be at least 1x1");
  const double diam = diameter(patch);
  const auto planes = symmetry_planes(patch, 1e-6 * diam);
  std::vector<const SymmetryPlane*> fam[2];
  for (const auto& p : planes) fam[p.family].push_back(&p);
  if (fam[0].size() != 2 || fam[1].size() != 2)
    throw AssemblyError("assemble: expected two parallel symmetry planes in each direction", INFINITY);
  double gap = 0.0;
  for (const auto& p : planes) gap = std::max(gap, 2.0 * p.max_deviation);
  const SymmetryPlane& A = *fam[0][0];
  const SymmetryPlane& B = *fam[1][0];
  Vec3 L[2];
  for (int f = 0; f < 2; ++f) {
    const double s = 2.0 * (fam[f][1]->offset - fam[f][0]->offset);
    L[f] = {s * fam[f][0]->normal[0], s * fam[f][0]->normal[1], 0.0};
  }
  if (report) {
    report->planes = planes;
    report->max_seam_gap = gap;
    const double l0 = std::hypot(L[0][0], L[0][1]), l1 = std::hypot(L[1][0], L[1][1]);
    report->lattice_angle = std::acos(std::clamp((L[0][0] * L[1][0] + L[0][1] * L[1][1]) / (l0 * l1), -1.0, 1.0));
    report->lattice_length_ratio = l0 / l1;
  }
  if (gap > seam_tol * diam) throw AssemblyError("assemble: seam mismatch", gap);

  SurfaceMesh out;
  out.lattice = {L[0], L[1]};
  const int nv = static_cast<int>(patch.vertices.size());
  const bool nrm = patch.normals.size() == patch.vertices.size();
  static const char* names[4] = {"I", "R_A", "R_B", "R_A R_B"};
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n2; ++b)
      for (int r = 0; r < 4; ++r) {
        const int base = static_cast<int>(out.vertices.size());
        const Vec3 shift{a * L[0][0] + b * L[1][0], a * L[0][1] + b * L[1][1], 0.0};
        for (int i = 0; i < nv; ++i) {
          Vec3 x = patch.vertices[i];
          Vec3 n = nrm ? patch.normals[i] : Vec3{0, 0, 0};
          if (r & 1) {
            x = reflect(x, A);
            n = reflect_dir(n, A);
          }
          if (r & 2) {
            x = reflect(x, B);
            n = reflect_dir(n, B);
          }
          out.vertices.push_back({x[0] + shift[0], x[1] + shift[1], x[2]});
          if (nrm) out.normals.push_back(n);
          out.boundary_segment.push_back(patch.boundary_segment.empty() ? -1 : patch.boundary_segment[i]);
        }
        // One reflection reverses orientation; flip the winding to keep the
        // normals consistent across seams.
        const bool flip = (r == 1 || r == 2);
        const int block = static_cast<int>(out.provenance.size());
        out.provenance.push_back(std::to_string(a) + "," + std::to_string(b) + ":" + names[r]);
        for (const auto& t : patch.triangles) {
          out.triangles.push_back(flip ? std::array<int, 3>{base + t[0], base + t[2], base + t[1]}
                                       : std::array<int, 3>{base + t[0], base + t[1], base + t[2]});
          out.triangle_block.push_back(block);
        }
      }
  return out;
}

std::vector<Cycle> handle_cycles(const WeierstrassData& data) {
  std::vector<Cycle> out;
  for (int e = 1; e <= 2 * data.genus; ++e) out.push_back(Cycle::encircling(e));
  return out;
}

namespace {

// Full period over the doubled cycle crossing parallel edges with developed
// direction c, given D = F(x_after) - F(x_before).
cplx doubled(cplx c, cplx D) { return 2.0 * I * c * std::imag(std::conj(c) * D); }

cplx dh_direction(const WeierstrassData& d, double x) {
  return (x * x > 1.0 ? 1.0 : -1.0) * d.k / std::abs(d.k);
}

PeriodResidual make_row(const WeierstrassData& d, const std::string& name, bool end, cplx pg, cplx pi, cplx pd) {
  PeriodResidual row;
  row.name = name;
  row.end = end;
  const Form3 w = combine(pg, pi, pd, d.t);
  row.period = {w[0].real(), w[1].real(), w[2].real()};
  row.vertical = std::abs(w[2].real());
  row.horizontal = std::abs(pg - std::conj(pi));
  return row;
}

}  // namespace

std::vector<PeriodResidual> verify_periods(const WeierstrassData& data, const std::vector<Cycle>& cycles) {
  std::vector<PeriodResidual> out;
  for (const Cycle& c : cycles) {
    validate_cycle(data.gdh, c);
    const cplx pg = 2.0 * cycle_period(data.gdh, c);
    const cplx pi = 2.0 * cycle_period(data.ginvdh, c);
    const auto [ei, ej] = cycle_edges(data.gdh, c);
    const double xi = crossing_point(data.gdh, ei);
    const double xj = crossing_point(data.gdh, ej);
    const cplx D = 0.5 * data.k * (zeta_of(xj) - zeta_of(xi));
    const cplx pd = static_cast<double>(c.orientation) * doubled(dh_direction(data, xi), D);
    std::string name = c.kind == Cycle::Kind::Encircling ? "encircle(" + std::to_string(c.edge_a) + ")"
                                                         : "connect(" + std::to_string(c.edge_a) + "," +
                                                               std::to_string(c.edge_b) + ")";
    out.push_back(make_row(data, name, false, pg, pi, pd));
  }
  return out;
}

std::vector<PeriodResidual> end_periods(const WeierstrassData& data) {
  std::vector<PeriodResidual> out;
  const int n = data.gdh.size();
  for (int v : {n - 1, 0}) {
    const int before = v == 0 ? n : v - 1;
    const int after = v;
    const double xb = crossing_point(data.gdh, before);
    const double xa = crossing_point(data.gdh, after);
    auto period = [&](const ConformalPolygon& poly) {
      return doubled(edge_direction(poly, before), eval_sc(poly, xa, xb));
    };
    const cplx D = 0.5 * data.k * (zeta_of(xa) - zeta_of(xb));
    const cplx pd = doubled(dh_direction(data, xb), D);
    out.push_back(make_row(data, data.gdh.labels.empty() ? "E" : data.gdh.labels[v], true, period(data.gdh),
                           period(data.ginvdh), pd));
  }
  return out;
}

Genus0Check genus0_periods(double phi) {
  const WeierstrassData d = genus0_data(phi);
  const double psi = 0.5 * d.phi;
  const cplx q[4] = {std::polar(1.0, psi), -std::polar(1.0, -psi), -std::polar(1.0, psi), std::polar(1.0, -psi)};
  Genus0Check out;
  const double r = 0.25 * std::min({1.0, 2.0 * std::sin(psi), 2.0 * std::cos(psi)});
  const int N = 512;
  for (int m = 0; m < 4; ++m) {
    Form3 acc{};
    for (int s = 0; s < N; ++s) {
      const cplx e = std::polar(1.0, 2.0 * kPi * s / N);
      const cplx z = q[m] + r * e;
      const cplx dz = I * r * e * (2.0 * kPi / N);
      const cplx dh = genus0_sphere_dh(d.phi, z) * dz;
      acc = add(acc, combine(z * dh, dh / z, dh, 0.0));
    }
    out.residue[m] = (acc[2] / (2.0 * kPi * I)).real();
    out.period[m] = {acc[0].real(), acc[1].real(), acc[2].real()};
    out.max_vertical = std::max(out.max_vertical, std::abs(acc[2].real()));
  }
  const Vec3& a = out.period[0];
  const Vec3& b = out.period[1];
  const double la = std::hypot(a[0], a[1]), lb = std::hypot(b[0], b[1]);
  out.angle = std::acos(std::clamp((a[0] * b[0] + a[1] * b[1]) / (la * lb), -1.0, 1.0));
  out.length_ratio = la / lb;
  return out;
}

Json periods_to_json(const std::vector<PeriodResidual>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["cycle"] = r.name;
    j["end"] = r.end;
    j["vertical_residual"] = r.vertical;
    j["horizontal_residual"] = r.horizontal;
    j["period"] = {r.period[0], r.period[1], r.period[2]};
    arr.push_back(j);
  }
  return arr;
}

}  // namespace orthoscherk
