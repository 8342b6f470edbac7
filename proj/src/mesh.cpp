#include "scherk/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

namespace scherk {

namespace {

double cross2(const Point2& a, const Point2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& q1,
                        const Point2& q2) {
  const double d1 = cross2(q2 - q1, p1 - q1);
  const double d2 = cross2(q2 - q1, p2 - q1);
  const double d3 = cross2(p2 - p1, q1 - p1);
  const double d4 = cross2(p2 - p1, q2 - p1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 &&
         d3 != 0 && d4 != 0;
}

// Deduplicates generated points so that shared edges between sub-patches
// produce shared vertices.
class VertexPool {
 public:
  explicit VertexPool(double scale) : quantum_(1e-9 * scale) {}

  int add(const Point2& p) {
    const Key k{std::llround(p.x() / quantum_), std::llround(p.y() / quantum_)};
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = index_.find(Key{k.x + dx, k.y + dy});
        if (it != index_.end() && (points_[it->second] - p).norm() < quantum_) {
          return it->second;
        }
      }
    }
    const int id = static_cast<int>(points_.size());
    points_.push_back(p);
    index_.emplace(k, id);
    return id;
  }

  std::vector<Point2> take() { return std::move(points_); }

 private:
  struct Key {
    long long x, y;
    bool operator==(const Key& o) const { return x == o.x && y == o.y; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<long long>()(k.x * 73856093LL ^ k.y * 19349663LL);
    }
  };
  double quantum_;
  std::vector<Point2> points_;
  std::unordered_map<Key, int, KeyHash> index_;
};

void subdivide_triangle(VertexPool& pool, std::vector<Tri>& tris, const Point2& v0,
                        const Point2& v1, const Point2& v2, int m) {
  std::vector<std::vector<int>> id(m + 1);
  for (int i = 0; i <= m; ++i) {
    id[i].resize(m + 1 - i);
    for (int j = 0; i + j <= m; ++j) {
      const double s = static_cast<double>(i) / m;
      const double t = static_cast<double>(j) / m;
      id[i][j] = pool.add(v0 + s * (v1 - v0) + t * (v2 - v0));
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; i + j < m; ++j) {
      tris.push_back({id[i][j], id[i + 1][j], id[i][j + 1]});
      if (i + j + 1 < m) tris.push_back({id[i + 1][j], id[i + 1][j + 1], id[i][j + 1]});
    }
  }
}

void subdivide_quad(VertexPool& pool, std::vector<Tri>& tris,
                    const std::vector<Point2>& q, int nx, int ny) {
  std::vector<std::vector<int>> id(nx + 1, std::vector<int>(ny + 1));
  for (int i = 0; i <= nx; ++i) {
    for (int j = 0; j <= ny; ++j) {
      const double s = static_cast<double>(i) / nx;
      const double t = static_cast<double>(j) / ny;
      const Point2 p = (1 - s) * (1 - t) * q[0] + s * (1 - t) * q[1] + s * t * q[2] +
                       (1 - s) * t * q[3];
      id[i][j] = pool.add(p);
    }
  }
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      tris.push_back({id[i][j], id[i + 1][j], id[i + 1][j + 1]});
      tris.push_back({id[i][j], id[i + 1][j + 1], id[i][j + 1]});
    }
  }
}

double edge_length(const DomainPolygon& d, std::size_t i) {
  const std::size_t n = d.vertices.size();
  return (d.vertices[(i + 1) % n] - d.vertices[i]).norm();
}

}  // namespace

double DomainPolygon::signed_area() const {
  double s = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) s += cross2(vertices[i], vertices[(i + 1) % n]);
  return 0.5 * s;
}

bool DomainPolygon::convex() const {
  const std::size_t n = vertices.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, edge_length(*this, i));
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e0 = vertices[(i + 1) % n] - vertices[i];
    const Point2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    if (cross2(e0, e1) < -1e-12 * scale * scale) return false;
  }
  return true;
}

void DomainPolygon::validate() const {
  const std::size_t n = vertices.size();
  if (n < 3) throw Error(ErrorCode::InvalidConfig, "polygon needs >= 3 vertices");
  if (heights.size() != n) {
    throw Error(ErrorCode::InvalidConfig, "one height assignment per edge");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!vertices[i].allFinite() || !std::isfinite(heights[i].start) ||
        !std::isfinite(heights[i].end)) {
      throw Error(ErrorCode::NonFinite, "polygon data must be finite");
    }
    if (edge_length(*this, i) <= 0.0) {
      throw Error(ErrorCode::InvalidConfig, "polygon has a zero-length edge");
    }
  }
  if (!(signed_area() > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "polygon must be counter-clockwise");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j],
                             vertices[(j + 1) % n])) {
        throw Error(ErrorCode::InvalidConfig, "polygon is self-intersecting");
      }
    }
  }
}

DomainPolygon resolve_contour(const ContourSpec& spec) {
  auto check = [](double a, double c) {
    if (!std::isfinite(a) || !std::isfinite(c) || !(a > 0.0) || !(c > 0.0)) {
      throw Error(ErrorCode::InvalidPreset, "preset parameters must be positive");
    }
  };
  return std::visit(
      [&](const auto& s) -> DomainPolygon {
        using T = std::decay_t<decltype(s)>;
        DomainPolygon d;
        if constexpr (std::is_same_v<T, DoublyPc>) {
          check(s.a, s.c);
          // legs alpha_1, alpha_2 at height 0; hypotenuse is the shadow of
          // alpha_5^c at height c.
          d.vertices = {{0.0, 0.0}, {s.a, 0.0}, {0.0, s.a}};
          d.heights = {EdgeHeight::constant(0.0), EdgeHeight::constant(s.c),
                       EdgeHeight::constant(0.0)};
        } else if constexpr (std::is_same_v<T, SinglyPc>) {
          check(s.a, s.c);
          d.vertices = {{0.0, 0.0}, {s.c, 0.0}, {s.c, s.a}, {0.0, s.a}};
          d.heights = {EdgeHeight::constant(0.0), EdgeHeight::constant(0.0),
                       EdgeHeight::constant(0.0), EdgeHeight::constant(s.c)};
        } else {
          d = s;
        }
        d.validate();
        return d;
      },
      spec);
}

double Triangulation::min_angle_degrees() const {
  double worst = 180.0;
  for (const Tri& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      const Point2 u = vertices[t[(k + 1) % 3]] - vertices[t[k]];
      const Point2 v = vertices[t[(k + 2) % 3]] - vertices[t[k]];
      const double ang = std::atan2(std::abs(cross2(u, v)), u.dot(v));
      worst = std::min(worst, ang * 180.0 / std::numbers::pi);
    }
  }
  return worst;
}

double Triangulation::max_edge_length() const {
  double longest = 0.0;
  for (const Tri& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      longest = std::max(longest, (vertices[t[(k + 1) % 3]] - vertices[t[k]]).norm());
    }
  }
  return longest;
}

Triangulation triangulate(const DomainPolygon& domain, double h) {
  domain.validate();
  const std::size_t n = domain.vertices.size();
  double shortest = edge_length(domain, 0);
  double longest = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    shortest = std::min(shortest, edge_length(domain, i));
    longest = std::max(longest, edge_length(domain, i));
  }
  if (!std::isfinite(h) || !(h > 0.0) || !(h < 0.5 * shortest)) {
    throw Error(ErrorCode::MeshFailure, "need 0 < h < half the shortest edge");
  }
  if (!domain.convex()) {
    throw Error(ErrorCode::MeshFailure, "only convex domains are supported");
  }

  VertexPool pool(longest);
  Triangulation tri;
  tri.h = h;
  const auto& V = domain.vertices;
  if (n == 3) {
    const int m = static_cast<int>(std::ceil(longest / h));
    subdivide_triangle(pool, tri.triangles, V[0], V[1], V[2], m);
  } else if (n == 4) {
    const int nx = static_cast<int>(
        std::ceil(std::max(edge_length(domain, 0), edge_length(domain, 2)) / h));
    const int ny = static_cast<int>(
        std::ceil(std::max(edge_length(domain, 1), edge_length(domain, 3)) / h));
    subdivide_quad(pool, tri.triangles, V, nx, ny);
  } else {
    Point2 centroid = Point2::Zero();
    for (const auto& v : V) centroid += v;
    centroid /= static_cast<double>(n);
    double reach = longest;
    for (const auto& v : V) reach = std::max(reach, (v - centroid).norm());
    const int m = static_cast<int>(std::ceil(reach / h));
    for (std::size_t i = 0; i < n; ++i) {
      subdivide_triangle(pool, tri.triangles, centroid, V[i], V[(i + 1) % n], m);
    }
  }
  tri.vertices = pool.take();

  const std::size_t nv = tri.vertices.size();
  tri.boundary.assign(nv, false);
  tri.boundary_height.assign(nv, 0.0);
  const double tol = 1e-9 * longest;
  for (std::size_t v = 0; v < nv; ++v) {
    const Point2& p = tri.vertices[v];
    for (std::size_t i = 0; i < n; ++i) {
      if ((p - V[i]).norm() < tol) {
        const double before = domain.heights[(i + n - 1) % n].at(1.0);
        const double after = domain.heights[i].at(0.0);
        tri.boundary[v] = true;
        tri.boundary_height[v] = before == after ? after : 0.5 * (before + after);
        break;
      }
      const Point2 e = V[(i + 1) % n] - V[i];
      const double t = (p - V[i]).dot(e) / e.squaredNorm();
      if (t > 0.0 && t < 1.0 && std::abs(cross2(e, p - V[i])) / e.norm() < tol) {
        tri.boundary[v] = true;
        tri.boundary_height[v] = domain.heights[i].at(t);
        break;
      }
    }
  }

  if (tri.max_edge_length() > 1.5 * h + tol || tri.min_angle_degrees() < 20.0) {
    throw Error(ErrorCode::MeshFailure, "mesh quality bound unreachable");
  }
  return tri;
}

GraphSurface initial_graph(const Triangulation& tri, double interior) {
  GraphSurface s{tri, std::vector<double>(tri.size(), interior)};
  for (std::size_t i = 0; i < tri.size(); ++i) {
    if (tri.boundary[i]) s.heights[i] = tri.boundary_height[i];
  }
  return s;
}

ImmersedMesh graph_to_mesh(const GraphSurface& s) {
  ImmersedMesh m;
  m.vertices.reserve(s.mesh.size());
  for (std::size_t i = 0; i < s.mesh.size(); ++i) {
    m.vertices.emplace_back(s.mesh.vertices[i].x(), s.mesh.vertices[i].y(), s.heights[i]);
  }
  m.triangles = s.mesh.triangles;
  m.fixed = s.mesh.boundary;
  return m;
}

std::vector<EdgeUse> edge_uses(const std::vector<Tri>& triangles) {
  std::map<std::pair<int, int>, int> count;
  for (const Tri& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::vector<EdgeUse> out;
  out.reserve(count.size());
  for (const auto& [e, c] : count) out.push_back({e.first, e.second, c});
  return out;
}

std::vector<bool> mesh_boundary_vertices(const std::vector<Tri>& triangles,
                                         std::size_t n_vertices) {
  std::vector<bool> b(n_vertices, false);
  for (const auto& e : edge_uses(triangles)) {
    if (e.count == 1) b[e.a] = b[e.b] = true;
  }
  return b;
}

}  // namespace scherk
