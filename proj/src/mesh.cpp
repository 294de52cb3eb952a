#include "orthoscherk/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "orthoscherk/errors.hpp"

namespace orthoscherk {

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

using EdgeKey = std::pair<int, int>;
EdgeKey key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

std::map<EdgeKey, int> edge_use(const SurfaceMesh& m) {
  std::map<EdgeKey, int> use;
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) use[key(t[k], t[(k + 1) % 3])]++;
  return use;
}

}  // namespace

void write_obj(const SurfaceMesh& mesh, std::ostream& out, const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  for (const auto& v : mesh.vertices) out << "v " << fmt12(v[0]) << ' ' << fmt12(v[1]) << ' ' << fmt12(v[2]) << "\n";
  const bool nrm = mesh.normals.size() == mesh.vertices.size();
  if (nrm)
    for (const auto& n : mesh.normals) out << "vn " << fmt12(n[0]) << ' ' << fmt12(n[1]) << ' ' << fmt12(n[2]) << "\n";
  for (const auto& t : mesh.triangles) {
    out << 'f';
    for (int k = 0; k < 3; ++k) {
      out << ' ' << t[k] + 1;
      if (nrm) out << "//" << t[k] + 1;
    }
    out << "\n";
  }
}

void write_ply(const SurfaceMesh& mesh, std::ostream& out, const std::string& comment) {
  const bool nrm = mesh.normals.size() == mesh.vertices.size();
  out << "ply\nformat binary_little_endian 1.0\n";
  if (!comment.empty()) out << "comment " << comment << "\n";
  out << "element vertex " << mesh.vertices.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  if (nrm) out << "property double nx\nproperty double ny\nproperty double nz\n";
  out << "element face " << mesh.triangles.size() << "\n";
  out << "property list uchar int vertex_indices\nend_header\n";
  auto put = [&](const void* p, std::size_t n) {
    // Bytes are emitted least significant first regardless of host order.
    const auto* b = static_cast<const unsigned char*>(p);
    unsigned char tmp[8];
    for (std::size_t i = 0; i < n; ++i) tmp[i] = b[i];
    const std::uint16_t probe = 1;
    if (*reinterpret_cast<const unsigned char*>(&probe) == 0) std::reverse(tmp, tmp + n);
    out.write(reinterpret_cast<const char*>(tmp), static_cast<std::streamsize>(n));
  };
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    for (double c : mesh.vertices[i]) put(&c, 8);
    if (nrm)
      for (double c : mesh.normals[i]) put(&c, 8);
  }
  for (const auto& t : mesh.triangles) {
    const unsigned char three = 3;
    out.write(reinterpret_cast<const char*>(&three), 1);
    for (int k = 0; k < 3; ++k) {
      const std::int32_t v = t[k];
      put(&v, 4);
    }
  }
}

std::vector<Vec3> vertex_normals(const SurfaceMesh& mesh) {
  std::vector<Vec3> n(mesh.vertices.size(), Vec3{0, 0, 0});
  for (const auto& t : mesh.triangles) {
    const Vec3 c = cross(sub(mesh.vertices[t[1]], mesh.vertices[t[0]]), sub(mesh.vertices[t[2]], mesh.vertices[t[0]]));
    for (int k = 0; k < 3; ++k)
      for (int d = 0; d < 3; ++d) n[t[k]][d] += c[d];
  }
  for (auto& v : n) {
    const double l = norm(v);
    if (l > 0)
      for (auto& c : v) c /= l;
  }
  return n;
}

std::vector<double> mean_curvature_field(const SurfaceMesh& mesh) {
  const auto use = edge_use(mesh);
  std::vector<char> boundary(mesh.vertices.size(), 0);
  for (const auto& [e, n] : use) {
    if (n > 2) throw TopologyError("non-manifold edge in mesh");
    if (n == 1) boundary[e.first] = boundary[e.second] = 1;
  }
  const std::size_t nv = mesh.vertices.size();
  std::vector<Vec3> lap(nv, Vec3{0, 0, 0});
  std::vector<double> area(nv, 0.0);
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    const double A = 0.5 * norm(cross(sub(b, a), sub(c, a)));
    if (!(A > 0.0)) continue;
    for (int k = 0; k < 3; ++k) {
      // Angle at vertex k weights the opposite edge.
      const int i = t[k], j = t[(k + 1) % 3], l = t[(k + 2) % 3];
      const Vec3 u = sub(mesh.vertices[j], mesh.vertices[i]);
      const Vec3 v = sub(mesh.vertices[l], mesh.vertices[i]);
      const double cot = dot(u, v) / norm(cross(u, v));
      for (int d = 0; d < 3; ++d) {
        const double w = 0.5 * cot * (mesh.vertices[j][d] - mesh.vertices[l][d]);
        lap[j][d] += w;
        lap[l][d] -= w;
      }
      area[i] += A / 3.0;
    }
  }
  std::vector<double> out(nv, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < nv; ++i)
    if (!boundary[i] && area[i] > 0.0) out[i] = norm(lap[i]) / area[i];
  return out;
}

double mean_curvature_residual(const SurfaceMesh& mesh) {
  double worst = 0.0;
  for (double h : mean_curvature_field(mesh))
    if (!std::isnan(h)) worst = std::max(worst, h);
  return worst;
}

double diameter(const SurfaceMesh& mesh) {
  if (mesh.vertices.empty()) return 0.0;
  Vec3 lo = mesh.vertices[0], hi = lo;
  for (const auto& v : mesh.vertices)
    for (int d = 0; d < 3; ++d) {
      lo[d] = std::min(lo[d], v[d]);
      hi[d] = std::max(hi[d], v[d]);
    }
  return norm(sub(hi, lo));
}

double relative_mean_curvature(const SurfaceMesh& mesh) {
  return mean_curvature_residual(mesh) * diameter(mesh);
}

int euler_characteristic(const SurfaceMesh& mesh, double tol, bool modulo_lattice) {
  // Reduce positions to lattice coordinates when identifying modulo periods.
  const Vec3& l1 = mesh.lattice[0];
  const Vec3& l2 = mesh.lattice[1];
  const double det = l1[0] * l2[1] - l1[1] * l2[0];
  if (modulo_lattice && !(std::abs(det) > 0.0)) throw ValidationError("lattice vectors are degenerate");
  std::map<std::array<long long, 3>, int> ids;
  std::vector<int> id(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    Vec3 p = mesh.vertices[i];
    if (modulo_lattice) {
      double s = (p[0] * l2[1] - p[1] * l2[0]) / det;
      double t = (l1[0] * p[1] - l1[1] * p[0]) / det;
      s -= std::floor(s + 1e-9);
      t -= std::floor(t + 1e-9);
      if (s > 1.0 - 1e-9) s = 0.0;
      if (t > 1.0 - 1e-9) t = 0.0;
      p = {s * l1[0] + t * l2[0], s * l1[1] + t * l2[1], p[2]};
    }
    // Quantize; look at the neighbouring cells too so points straddling a cell
    // boundary still merge.
    std::array<long long, 3> q{};
    for (int d = 0; d < 3; ++d) q[d] = std::llround(p[d] / tol);
    int found = -1;
    for (int dx = -1; dx <= 1 && found < 0; ++dx)
      for (int dy = -1; dy <= 1 && found < 0; ++dy)
        for (int dz = -1; dz <= 1 && found < 0; ++dz) {
          auto it = ids.find({q[0] + dx, q[1] + dy, q[2] + dz});
          if (it != ids.end()) found = it->second;
        }
    if (found < 0) {
      found = static_cast<int>(ids.size());
      ids[q] = found;
    }
    id[i] = found;
  }
  std::set<EdgeKey> edges;
  std::set<std::array<int, 3>> faces;
  for (const auto& t : mesh.triangles) {
    std::array<int, 3> f{id[t[0]], id[t[1]], id[t[2]]};
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) continue;
    for (int k = 0; k < 3; ++k) edges.insert(key(f[k], f[(k + 1) % 3]));
    std::sort(f.begin(), f.end());
    faces.insert(f);
  }
  std::set<int> used;
  for (const auto& e : edges) {
    used.insert(e.first);
    used.insert(e.second);
  }
  return static_cast<int>(used.size()) - static_cast<int>(edges.size()) + static_cast<int>(faces.size());
}

GraphCheck graph_check(const SurfaceMesh& mesh, const Vec3& direction) {
  const double dl = norm(direction);
  if (!(dl > 0.0)) throw ValidationError("projection direction must be nonzero");
  const Vec3 n{direction[0] / dl, direction[1] / dl, direction[2] / dl};
  // Orthonormal frame of the projection plane.
  Vec3 e1 = std::abs(n[2]) < 0.9 ? cross(n, Vec3{0, 0, 1}) : cross(n, Vec3{1, 0, 0});
  const double l1 = norm(e1);
  for (auto& c : e1) c /= l1;
  const Vec3 e2 = cross(n, e1);
  std::vector<std::array<double, 2>> p(mesh.vertices.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = {dot(mesh.vertices[i], e1), dot(mesh.vertices[i], e2)};
  auto orient = [&](int a, int b, int c) {
    return (p[b][0] - p[a][0]) * (p[c][1] - p[a][1]) - (p[b][1] - p[a][1]) * (p[c][0] - p[a][0]);
  };
  GraphCheck res;
  int pos = 0, neg = 0;
  for (const auto& t : mesh.triangles) {
    const double o = orient(t[0], t[1], t[2]);
    if (o > 0)
      pos++;
    else
      neg++;
  }
  res.flipped_triangles = std::min(pos, neg);
  // Boundary edges of the triangulation.
  std::vector<EdgeKey> bnd;
  for (const auto& [e, c] : edge_use(mesh))
    if (c == 1) bnd.push_back(e);
  auto seg_dist = [&](const EdgeKey& a, const EdgeKey& b) {
    auto pd = [&](int q, int s0, int s1) {
      const double vx = p[s1][0] - p[s0][0], vy = p[s1][1] - p[s0][1];
      const double wx = p[q][0] - p[s0][0], wy = p[q][1] - p[s0][1];
      const double L = vx * vx + vy * vy;
      const double u = L > 0 ? std::clamp((wx * vx + wy * vy) / L, 0.0, 1.0) : 0.0;
      return std::hypot(wx - u * vx, wy - u * vy);
    };
    return std::min({pd(a.first, b.first, b.second), pd(a.second, b.first, b.second),
                     pd(b.first, a.first, a.second), pd(b.second, a.first, a.second)});
  };
  auto crosses = [&](const EdgeKey& a, const EdgeKey& b) {
    const double o1 = orient(a.first, a.second, b.first), o2 = orient(a.first, a.second, b.second);
    const double o3 = orient(b.first, b.second, a.first), o4 = orient(b.first, b.second, a.second);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
  };
  double sep = INFINITY;
  for (std::size_t i = 0; i < bnd.size(); ++i)
    for (std::size_t j = i + 1; j < bnd.size(); ++j) {
      const auto& a = bnd[i];
      const auto& b = bnd[j];
      if (a.first == b.first || a.first == b.second || a.second == b.first || a.second == b.second) continue;
      if (crosses(a, b)) res.boundary_crossings++;
      sep = std::min(sep, seg_dist(a, b));
    }
  res.min_separation = std::isfinite(sep) ? sep : 0.0;
  res.injective = res.flipped_triangles == 0 && res.boundary_crossings == 0;
  return res;
}

}  // namespace orthoscherk
