#include "scherk/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <array>
#include <unordered_map>

#include "scherk/energy.hpp"

namespace scherk {

namespace {

constexpr double kWeldTol = 1e-9;

// Merges points closer than kWeldTol. Buckets are 1e-7 wide, so a match is
// always in the 3x3x3 block around the query.
class Welder {
 public:
  int insert(const Vec3& p) {
    const int found = find(p);
    if (found >= 0) {
      ++hits_[found];
      return found;
    }
    const int id = static_cast<int>(points_.size());
    points_.push_back(p);
    hits_.push_back(1);
    buckets_[hash(cell(p))].push_back(id);
    return id;
  }

  int find(const Vec3& p) const {
    const auto key = cell(p);
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dz = -1; dz <= 1; ++dz) {
          auto it = buckets_.find(hash({key[0] + dx, key[1] + dy, key[2] + dz}));
          if (it == buckets_.end()) continue;
          for (int id : it->second) {
            if ((points_[id] - p).cwiseAbs().maxCoeff() <= kWeldTol) return id;
          }
        }
      }
    }
    return -1;
  }

  const std::vector<Vec3>& points() const { return points_; }
  const std::vector<int>& hits() const { return hits_; }

 private:
  static std::array<long long, 3> cell(const Vec3& p) {
    return {static_cast<long long>(std::floor(p.x() * 1e7)),
            static_cast<long long>(std::floor(p.y() * 1e7)),
            static_cast<long long>(std::floor(p.z() * 1e7))};
  }
  static std::size_t hash(const std::array<long long, 3>& k) {
    std::size_t h = 1469598103934665603ull;
    for (long long v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    return h;
  }

  std::vector<Vec3> points_;
  std::vector<int> hits_;
  std::unordered_map<std::size_t, std::vector<int>> buckets_;
};

Vec3 apply(const ModelMatrix& A, const IsometryDescriptor& iso, const Vec3& p) {
  return apply_isometry(A, iso, GroupPoint::from(p)).point.vec();
}

// Adds a transformed copy of m to the welder and returns its triangles in
// welded indices.
std::vector<int> add_copy(const ModelMatrix& A, const ImmersedMesh& m,
                          const IsometryDescriptor& iso, bool flip, Welder& welder,
                          std::vector<Tri>& triangles) {
  std::vector<int> ids(m.vertices.size());
  for (std::size_t v = 0; v < m.vertices.size(); ++v) ids[v] = welder.insert(apply(A, iso, m.vertices[v]));
  for (const Tri& t : m.triangles) {
    if (flip) {
      triangles.push_back({ids[t[0]], ids[t[2]], ids[t[1]]});
    } else {
      triangles.push_back({ids[t[0]], ids[t[1]], ids[t[2]]});
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

PeriodicAssembly finish(std::vector<AssemblyCell> cells, const Welder& welder,
                        std::vector<Tri> triangles, std::vector<Vec3> generators,
                        int copies, const std::vector<int>& piece_seams, double scale) {
  PeriodicAssembly out;
  out.scale = scale;
  out.mesh.vertices = welder.points();
  out.mesh.triangles = std::move(triangles);
  out.mesh.fixed = mesh_boundary_vertices(out.mesh.triangles, out.mesh.vertices.size());
  out.generators = std::move(generators);
  out.copies = copies;
  out.cells = std::move(cells);
  std::vector<bool> seam(out.mesh.vertices.size(), false);
  for (std::size_t v = 0; v < seam.size(); ++v) seam[v] = welder.hits()[v] > 1;
  for (int v : piece_seams) seam[v] = true;
  for (std::size_t v = 0; v < seam.size(); ++v) {
    if (seam[v] && !out.mesh.fixed[v]) out.seam_vertices.push_back(static_cast<int>(v));
  }
  if (!edge_manifold(out.mesh)) throw Error(ErrorCode::WeldFailure, "assembly is not edge-manifold");
  return out;
}

// Seam vertices of a cell built by reflect_mesh: vertices on any of the
// given axes. Returned as positions so they survive re-indexing.
std::vector<Vec3> on_axes(const ImmersedMesh& m, const std::vector<ReflectionAxis>& axes) {
  std::vector<Vec3> out;
  for (const Vec3& p : m.vertices) {
    for (const ReflectionAxis& ax : axes) {
      if (ax.distance(p) <= kWeldTol) {
        out.push_back(p);
        break;
      }
    }
  }
  return out;
}

std::pair<double, double> piece_extent(const GraphSurface& piece) {
  double xmax = -std::numeric_limits<double>::infinity();
  double ymax = xmax;
  for (const Point2& p : piece.mesh.vertices) {
    xmax = std::max(xmax, p.x());
    ymax = std::max(ymax, p.y());
  }
  if (!(xmax > 0.0) || !(ymax > 0.0)) throw Error(ErrorCode::InvalidConfig, "piece has no extent");
  return {xmax, ymax};
}

std::vector<int> copy_range(int copies) {
  if (copies < 1) throw Error(ErrorCode::InvalidConfig, "copies must be >= 1");
  std::vector<int> r;
  const int lo = -(copies - 1) / 2;
  for (int k = 0; k < copies; ++k) r.push_back(lo + k);
  return r;
}

std::vector<int> seam_ids(const std::vector<Vec3>& positions, const ModelMatrix& A,
                          const IsometryDescriptor& iso, const Welder& welder) {
  std::vector<int> ids;
  for (const Vec3& p : positions) {
    const int id = welder.find(apply(A, iso, p));
    if (id >= 0) ids.push_back(id);
  }
  return ids;
}

// Closest point on triangle abc to p (Euclidean), by Voronoi regions.
Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + d1 / (d1 - d3) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + d2 / (d2 - d6) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0) {
    return b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

Matrix3 full_metric_at(const ModelMatrix& A, double z) {
  Matrix3 g = Matrix3::Zero();
  g.topLeftCorner<2, 2>() = metric_block(A, z);
  g(2, 2) = 1.0;
  return g;
}

}  // namespace

IsometryDescriptor ReflectionAxis::isometry() const {
  switch (kind) {
    case Kind::Vertical:
      return VerticalRotation{x0, y0};
    case Kind::HorizontalX:
      return HorizontalRotationParallelX{y0};
    case Kind::HorizontalY:
      return HorizontalRotationParallelY{x0};
  }
  return VerticalRotation{x0, y0};
}

Vec3 ReflectionAxis::project(const Vec3& p) const {
  switch (kind) {
    case Kind::Vertical:
      return {x0, y0, p.z()};
    case Kind::HorizontalX:
      return {p.x(), y0, 0.0};
    case Kind::HorizontalY:
      return {x0, p.y(), 0.0};
  }
  return p;
}

double ReflectionAxis::distance(const Vec3& p) const { return (p - project(p)).norm(); }

ImmersedMesh reflect_mesh(const ModelMatrix& A, const ImmersedMesh& m,
                          const ReflectionAxis& axis) {
  const IsometryDescriptor iso = axis.isometry();
  if (requires_antidiagonal(iso) && !A.antidiagonal()) {
    throw Error(ErrorCode::InvalidForModel, "horizontal rotation needs an antidiagonal A");
  }
  const std::size_t n = m.vertices.size();
  const std::vector<bool> boundary = mesh_boundary_vertices(m.triangles, n);
  ImmersedMesh out;
  out.vertices = m.vertices;
  std::vector<int> image(n, -1);
  int welded = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (boundary[v] && axis.distance(m.vertices[v]) <= kWeldTol) {
      out.vertices[v] = axis.project(m.vertices[v]);
      image[v] = static_cast<int>(v);
      ++welded;
    }
  }
  if (welded == 0) throw Error(ErrorCode::WeldFailure, "no boundary vertex on the axis");
  for (std::size_t v = 0; v < n; ++v) {
    if (image[v] >= 0) continue;
    image[v] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(apply(A, iso, m.vertices[v]));
  }
  out.triangles = m.triangles;
  for (const Tri& t : m.triangles) out.triangles.push_back({image[t[0]], image[t[2]], image[t[1]]});
  out.fixed = mesh_boundary_vertices(out.triangles, out.vertices.size());
  return out;
}

PeriodicAssembly build_doubly(const ModelMatrix& A, const GraphSurface& piece, int copies) {
  const std::vector<int> range = copy_range(copies);
  const double a = piece_extent(piece).first;
  const std::vector<ReflectionAxis> legs = {ReflectionAxis::horizontal_x(0.0),
                                            ReflectionAxis::horizontal_y(0.0)};
  const ImmersedMesh half = reflect_mesh(A, graph_to_mesh(piece), legs[0]);
  const ImmersedMesh cell = reflect_mesh(A, half, legs[1]);
  const std::vector<Vec3> leg_points = on_axes(cell, legs);

  Welder welder;
  std::vector<Tri> triangles;
  std::vector<AssemblyCell> cells;
  std::vector<std::pair<IsometryDescriptor, bool>> placed;
  for (int i : range) {
    for (int j : range) {
      // The rotation about the vertical line through a(i, j) moves the cell
      // centre to 2a(i, j); an odd number of rotations reverses orientation.
      const IsometryDescriptor iso = VerticalRotation{i * a, j * a};
      const bool flip = (i + j) % 2 != 0;
      AssemblyCell c;
      c.offset = Vec3(2.0 * i * a, 2.0 * j * a, 0.0);
      c.vertices = add_copy(A, cell, iso, flip, welder, triangles);
      cells.push_back(std::move(c));
      placed.emplace_back(iso, flip);
    }
  }
  std::vector<int> piece_seams;
  for (const auto& [iso, flip] : placed) {
    const std::vector<int> ids = seam_ids(leg_points, A, iso, welder);
    piece_seams.insert(piece_seams.end(), ids.begin(), ids.end());
  }
  return finish(std::move(cells), welder, std::move(triangles),
                {Vec3(-2.0 * a, 2.0 * a, 0.0), Vec3(2.0 * a, 2.0 * a, 0.0)}, copies,
                piece_seams, a);
}

PeriodicAssembly build_singly(const ModelMatrix& A, const GraphSurface& piece, int copies) {
  const std::vector<int> range = copy_range(copies);
  const double a = piece_extent(piece).second;
  const ReflectionAxis leg = ReflectionAxis::horizontal_x(0.0);
  const ReflectionAxis spine = ReflectionAxis::vertical(0.0, 0.0);
  const ImmersedMesh half = reflect_mesh(A, graph_to_mesh(piece), leg);
  const ImmersedMesh cell = reflect_mesh(A, half, spine);
  const std::vector<Vec3> leg_points = on_axes(cell, {leg});

  Welder welder;
  std::vector<Tri> triangles;
  std::vector<AssemblyCell> cells;
  std::vector<IsometryDescriptor> placed;
  for (int k : range) {
    // Translation by k(0, 2a, 0), a composition of two vertical rotations.
    const IsometryDescriptor iso = LeftTranslation{{0.0, 2.0 * k * a, 0.0}};
    AssemblyCell c;
    c.offset = Vec3(0.0, 2.0 * k * a, 0.0);
    c.vertices = add_copy(A, cell, iso, false, welder, triangles);
    cells.push_back(std::move(c));
    placed.push_back(iso);
  }
  std::vector<int> piece_seams;
  for (const auto& iso : placed) {
    const std::vector<int> ids = seam_ids(leg_points, A, iso, welder);
    piece_seams.insert(piece_seams.end(), ids.begin(), ids.end());
  }
  return finish(std::move(cells), welder, std::move(triangles), {Vec3(0.0, 2.0 * a, 0.0)},
                copies, piece_seams, a);
}

double periodicity_defect(const ModelMatrix& A, const PeriodicAssembly& assembly,
                          const Vec3& t) {
  const auto& cells = assembly.cells;
  const ImmersedMesh& m = assembly.mesh;
  if (cells.empty() || m.triangles.empty()) throw Error(ErrorCode::InvalidConfig, "empty assembly");
  Vec3 centre = Vec3::Zero();
  for (const auto& c : cells) centre += c.offset;
  centre /= static_cast<double>(cells.size());
  const double scale = 1.0 + (cells.back().offset - cells.front().offset).norm();

  int best = -1, fallback = 0;
  double best_d = std::numeric_limits<double>::infinity();
  double fallback_d = best_d;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const double d = (cells[i].offset - centre).norm();
    if (d < fallback_d) {
      fallback_d = d;
      fallback = static_cast<int>(i);
    }
    const Vec3 moved = cells[i].offset + Vec3(t.x(), t.y(), 0.0);
    const bool present = std::any_of(cells.begin(), cells.end(), [&](const AssemblyCell& c) {
      return (c.offset - moved).norm() <= 1e-9 * scale;
    });
    if (present && d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  const AssemblyCell& src = cells[best >= 0 ? best : fallback];

  // Triangles bucketed by their xy bounding boxes.
  double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
  double hi_x = -lo_x, hi_y = -lo_x, edge_sum = 0.0;
  for (const Tri& tr : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = m.vertices[tr[k]];
      lo_x = std::min(lo_x, p.x());
      lo_y = std::min(lo_y, p.y());
      hi_x = std::max(hi_x, p.x());
      hi_y = std::max(hi_y, p.y());
      edge_sum += (m.vertices[tr[(k + 1) % 3]] - p).head<2>().norm();
    }
  }
  const double span = std::max(hi_x - lo_x, hi_y - lo_y);
  const double cell = std::clamp(4.0 * edge_sum / (3.0 * m.triangles.size()), span / 512.0,
                                 std::max(span, 1e-12));
  const int nx = static_cast<int>((hi_x - lo_x) / cell) + 1;
  const int ny = static_cast<int>((hi_y - lo_y) / cell) + 1;
  std::vector<std::vector<int>> grid(static_cast<std::size_t>(nx) * ny);
  auto ix = [&](double x) { return std::clamp(static_cast<int>((x - lo_x) / cell), 0, nx - 1); };
  auto iy = [&](double y) { return std::clamp(static_cast<int>((y - lo_y) / cell), 0, ny - 1); };
  for (std::size_t f = 0; f < m.triangles.size(); ++f) {
    const Tri& tr = m.triangles[f];
    double x0 = hi_x, x1 = lo_x, y0 = hi_y, y1 = lo_y;
    for (int k = 0; k < 3; ++k) {
      x0 = std::min(x0, m.vertices[tr[k]].x());
      x1 = std::max(x1, m.vertices[tr[k]].x());
      y0 = std::min(y0, m.vertices[tr[k]].y());
      y1 = std::max(y1, m.vertices[tr[k]].y());
    }
    for (int i = ix(x0); i <= ix(x1); ++i) {
      for (int j = iy(y0); j <= iy(y1); ++j) grid[static_cast<std::size_t>(j) * nx + i].push_back(static_cast<int>(f));
    }
  }

  std::vector<int> stamp(m.triangles.size(), -1);
  double defect = 0.0;
  int query = 0;
  for (int v : src.vertices) {
    if (m.fixed[v]) continue;
    const Vec3 q = group_multiply(A, GroupPoint::from(t), GroupPoint::from(m.vertices[v])).vec();
    const Matrix3 g = full_metric_at(A, q.z());
    const Eigen::LLT<Matrix3> llt(g);
    const Matrix3 U = llt.matrixU();
    const double lmin = std::sqrt(Eigen::SelfAdjointEigenSolver<Matrix3>(g).eigenvalues().minCoeff());
    double dist = std::numeric_limits<double>::infinity();
    double radius = cell;
    ++query;
    while (true) {
      for (int i = ix(q.x() - radius); i <= ix(q.x() + radius); ++i) {
        for (int j = iy(q.y() - radius); j <= iy(q.y() + radius); ++j) {
          for (int f : grid[static_cast<std::size_t>(j) * nx + i]) {
            if (stamp[f] == query) continue;
            stamp[f] = query;
            const Tri& tr = m.triangles[f];
            const Vec3 c = closest_on_triangle(U * q, U * m.vertices[tr[0]], U * m.vertices[tr[1]],
                                               U * m.vertices[tr[2]]);
            dist = std::min(dist, (c - U * q).norm());
          }
        }
      }
      // Metric distance d bounds the coordinate distance by d / sqrt(lmin).
      const double need = dist / lmin;
      if (need <= radius || radius > 2.0 * span + 1.0) break;
      radius = std::isfinite(need) ? need : 2.0 * radius;
    }
    defect = std::max(defect, dist);
  }
  return defect;
}

double seam_curvature(const ModelMatrix& A, const PeriodicAssembly& assembly,
                      double keep_out) {
  const ImmersedMesh& m = assembly.mesh;
  const std::vector<double> H = mesh_mean_curvature(A, m);
  const double r = keep_out * assembly.scale;
  std::vector<Eigen::Vector2d> rim;
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    if (m.fixed[v]) rim.push_back(m.vertices[v].head<2>());
  }
  double worst = 0.0;
  for (int v : assembly.seam_vertices) {
    const Eigen::Vector2d p = m.vertices[v].head<2>();
    const bool near_rim = std::any_of(rim.begin(), rim.end(),
                                      [&](const Eigen::Vector2d& q) { return (p - q).norm() < r; });
    if (!near_rim) worst = std::max(worst, H[v]);
  }
  return worst;
}

int euler_characteristic(const ImmersedMesh& m) {
  std::vector<bool> used(m.vertices.size(), false);
  for (const Tri& t : m.triangles) {
    for (int v : t) used[v] = true;
  }
  const int V = static_cast<int>(std::count(used.begin(), used.end(), true));
  const int E = static_cast<int>(edge_uses(m.triangles).size());
  return V - E + static_cast<int>(m.triangles.size());
}

bool edge_manifold(const ImmersedMesh& m) {
  for (const EdgeUse& e : edge_uses(m.triangles)) {
    if (e.count < 1 || e.count > 2) return false;
  }
  return true;
}

}  // namespace scherk
