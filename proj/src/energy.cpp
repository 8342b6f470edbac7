#include "scherk/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace scherk {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

Matrix2 adj(const Matrix2& m) {
  Matrix2 r;
  r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return r;
}

// det of the leaf metric block, det(e^{-zA})^2, without the cancellation
// of forming N^T N first.
double leaf_det(const ModelMatrix& A, double z) { return std::exp(-2.0 * z * A.trace()); }

// Per-triangle pieces shared by the graph energy, its gradient and the
// stiffness matrix.
struct GraphTriangle {
  double area2d;
  std::array<Eigen::Vector2d, 3> grad_phi;
  Eigen::Vector2d slope;
  double z;
};

GraphTriangle graph_triangle(const Triangulation& tri, const Tri& t,
                             std::span<const double> u) {
  const Point2& p0 = tri.vertices[t[0]];
  const Point2 d1 = tri.vertices[t[1]] - p0;
  const Point2 d2 = tri.vertices[t[2]] - p0;
  const double det = d1.x() * d2.y() - d1.y() * d2.x();
  GraphTriangle g;
  g.area2d = 0.5 * std::abs(det);
  g.grad_phi[1] = Eigen::Vector2d(d2.y(), -d2.x()) / det;
  g.grad_phi[2] = Eigen::Vector2d(-d1.y(), d1.x()) / det;
  g.grad_phi[0] = -g.grad_phi[1] - g.grad_phi[2];
  g.slope = u[t[0]] * g.grad_phi[0] + u[t[1]] * g.grad_phi[1] + u[t[2]] * g.grad_phi[2];
  g.z = (u[t[0]] + u[t[1]] + u[t[2]]) / 3.0;
  return g;
}

Matrix3 full_metric(const Matrix2& block) {
  Matrix3 g = Matrix3::Zero();
  g.topLeftCorner<2, 2>() = block;
  g(2, 2) = 1.0;
  return g;
}

Matrix3 full_metric_derivative(const Matrix2& dblock) {
  Matrix3 g = Matrix3::Zero();
  g.topLeftCorner<2, 2>() = dblock;
  return g;
}

}  // namespace

std::vector<double> graph_triangle_areas(const ModelMatrix& A,
                                         const Triangulation& tri,
                                         std::span<const double> heights) {
  std::vector<double> out;
  out.reserve(tri.triangles.size());
  for (const Tri& t : tri.triangles) {
    const GraphTriangle g = graph_triangle(tri, t, heights);
    const Matrix2 gb = metric_block(A, g.z);
    out.push_back(g.area2d * std::sqrt(leaf_det(A, g.z) + g.slope.dot(adj(gb) * g.slope)));
  }
  return out;
}

GraphEnergy graph_energy(const ModelMatrix& A, const Triangulation& tri,
                         std::span<const double> heights, bool with_gradient) {
  GraphEnergy e;
  std::vector<double> areas;
  areas.reserve(tri.triangles.size());
  if (with_gradient) e.gradient.assign(tri.size(), 0.0);
  for (const Tri& t : tri.triangles) {
    const GraphTriangle g = graph_triangle(tri, t, heights);
    const Matrix2 gb = metric_block(A, g.z);
    const Matrix2 J = adj(gb);
    const Eigen::Vector2d Jp = J * g.slope;
    const double S = std::sqrt(leaf_det(A, g.z) + g.slope.dot(Jp));
    areas.push_back(g.area2d * S);
    if (!with_gradient) continue;
    const Matrix2 dgb = metric_block_derivative(A, g.z);
    const double dD = -2.0 * A.trace() * leaf_det(A, g.z);
    const double dz_term = (dD + g.slope.dot(adj(dgb) * g.slope)) / (2.0 * S) / 3.0;
    for (int k = 0; k < 3; ++k) {
      e.gradient[t[k]] += g.area2d * (Jp.dot(g.grad_phi[k]) / S + dz_term);
    }
  }
  e.area = pairwise_sum(areas);
  return e;
}

Eigen::SparseMatrix<double> graph_stiffness(const ModelMatrix& A,
                                            const Triangulation& tri,
                                            std::span<const double> heights) {
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(tri.triangles.size() * 9);
  for (const Tri& t : tri.triangles) {
    const GraphTriangle g = graph_triangle(tri, t, heights);
    const Matrix2 gb = metric_block(A, g.z);
    const Matrix2 J = adj(gb);
    const double S = std::sqrt(leaf_det(A, g.z) + g.slope.dot(J * g.slope));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        entries.emplace_back(t[i], t[j],
                             g.area2d * g.grad_phi[i].dot(J * g.grad_phi[j]) / S);
      }
    }
  }
  Eigen::SparseMatrix<double> K(static_cast<int>(tri.size()), static_cast<int>(tri.size()));
  K.setFromTriplets(entries.begin(), entries.end());
  return K;
}

MeshEnergy mesh_energy(const ModelMatrix& A, const ImmersedMesh& m,
                       bool with_gradient) {
  MeshEnergy e;
  e.min_triangle_area = std::numeric_limits<double>::infinity();
  std::vector<double> areas;
  areas.reserve(m.triangles.size());
  if (with_gradient) e.gradient.assign(m.vertices.size(), Vec3::Zero());
  for (const Tri& t : m.triangles) {
    const Vec3& p0 = m.vertices[t[0]];
    const Vec3 e1 = m.vertices[t[1]] - p0;
    const Vec3 e2 = m.vertices[t[2]] - p0;
    const double zc = (p0.z() + m.vertices[t[1]].z() + m.vertices[t[2]].z()) / 3.0;
    const Matrix3 G = full_metric(metric_block(A, zc));
    const Vec3 Ge1 = G * e1;
    const Vec3 Ge2 = G * e2;
    const double a = e1.dot(Ge1);
    const double b = e1.dot(Ge2);
    const double c = e2.dot(Ge2);
    const double Q = std::max(a * c - b * b, 0.0);
    const double area = 0.5 * std::sqrt(Q);
    areas.push_back(area);
    e.min_triangle_area = std::min(e.min_triangle_area, area);
    if (!with_gradient || Q <= 0.0) continue;
    const Matrix3 dG = full_metric_derivative(metric_block_derivative(A, zc));
    const double da = e1.dot(dG * e1);
    const double db = e1.dot(dG * e2);
    const double dc = e2.dot(dG * e2);
    const double inv = 1.0 / (4.0 * std::sqrt(Q));
    const Vec3 g1 = (2.0 * c * Ge1 - 2.0 * b * Ge2) * inv;
    const Vec3 g2 = (2.0 * a * Ge2 - 2.0 * b * Ge1) * inv;
    const double gz = (da * c + a * dc - 2.0 * b * db) * inv / 3.0;
    e.gradient[t[1]] += g1;
    e.gradient[t[2]] += g2;
    e.gradient[t[0]] -= g1 + g2;
    for (int k = 0; k < 3; ++k) e.gradient[t[k]].z() += gz;
  }
  e.area = pairwise_sum(areas);
  return e;
}

std::vector<double> mesh_triangle_areas(const ModelMatrix& A,
                                        const ImmersedMesh& m) {
  std::vector<double> out;
  out.reserve(m.triangles.size());
  for (const Tri& t : m.triangles) {
    const Vec3& p0 = m.vertices[t[0]];
    const Vec3 e1 = m.vertices[t[1]] - p0;
    const Vec3 e2 = m.vertices[t[2]] - p0;
    const double zc = (p0.z() + m.vertices[t[1]].z() + m.vertices[t[2]].z()) / 3.0;
    const Matrix3 G = full_metric(metric_block(A, zc));
    const double a = e1.dot(G * e1);
    const double b = e1.dot(G * e2);
    const double c = e2.dot(G * e2);
    out.push_back(0.5 * std::sqrt(std::max(a * c - b * b, 0.0)));
  }
  return out;
}

std::vector<VertexValue> mean_curvature_graph(const ModelMatrix& A,
                                              const GraphSurface& s) {
  const Triangulation& tri = s.mesh;
  const GraphEnergy e = graph_energy(A, tri, s.heights, true);
  // <N, E3> = 1 / W and the metric area element is sqrt(D) W |T|, so the
  // weighted lumped area is sum sqrt(D) |T| / 3.
  std::vector<double> weight(tri.size(), 0.0);
  for (const Tri& t : tri.triangles) {
    const GraphTriangle g = graph_triangle(tri, t, s.heights);
    const double w = g.area2d * std::sqrt(leaf_det(A, g.z)) / 3.0;
    for (int k = 0; k < 3; ++k) weight[t[k]] += w;
  }
  std::vector<VertexValue> out;
  for (std::size_t i = 0; i < tri.size(); ++i) {
    if (tri.boundary[i]) continue;
    if (!(weight[i] > 0.0)) {
      throw Error(ErrorCode::DegenerateTriangle, "vertex with zero lumped area");
    }
    out.push_back({static_cast<int>(i), -e.gradient[i] / (2.0 * weight[i])});
  }
  return out;
}

double max_abs(const std::vector<VertexValue>& values) {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v.value));
  return m;
}

std::vector<double> mesh_mean_curvature(const ModelMatrix& A,
                                        const ImmersedMesh& m) {
  const MeshEnergy e = mesh_energy(A, m, true);
  const std::vector<double> areas = mesh_triangle_areas(A, m);
  std::vector<double> lumped(m.vertices.size(), 0.0);
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    for (int k = 0; k < 3; ++k) lumped[m.triangles[t][k]] += areas[t] / 3.0;
  }
  std::vector<double> out(m.vertices.size(), 0.0);
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    if (!(lumped[v] > 0.0)) continue;
    const Matrix3 ginv = full_metric(metric_block(A, m.vertices[v].z())).inverse();
    const Vec3& G = e.gradient[v];
    out[v] = std::sqrt(std::max(G.dot(ginv * G), 0.0)) / (2.0 * lumped[v]);
  }
  return out;
}

double flux(const ModelMatrix& A, const ImmersedMesh& m, const KillingField& X) {
  // Each boundary edge belongs to exactly one triangle; orient it by the
  // triangle's third vertex.
  std::map<std::pair<int, int>, std::pair<int, int>> owner;  // edge -> (count, third)
  for (const Tri& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      auto& slot = owner[{std::min(a, b), std::max(a, b)}];
      ++slot.first;
      slot.second = t[(k + 2) % 3];
    }
  }
  std::vector<double> terms;
  const Vec3 field = X.vec();
  for (const auto& [edge, info] : owner) {
    if (info.first != 1) continue;
    const Vec3& p = m.vertices[edge.first];
    const Vec3& q = m.vertices[edge.second];
    const Vec3& r = m.vertices[info.second];
    const Vec3 mid = 0.5 * (p + q);
    const Matrix3 G = full_metric(metric_block(A, mid.z()));
    const Vec3 e = q - p;
    const Vec3 f = r - p;
    const double ee = e.dot(G * e);
    Vec3 nu = -(f - (e.dot(G * f) / ee) * e);
    const double nn = nu.dot(G * nu);
    if (!(nn > 0.0)) continue;
    nu /= std::sqrt(nn);
    terms.push_back(nu.dot(G * field) * std::sqrt(ee));
  }
  return pairwise_sum(terms);
}

double flux(const ModelMatrix& A, const GraphSurface& s, const KillingField& X) {
  // Variational form: pair the area gradient with X over the boundary
  // vertices and their one-ring. A vertical wall compressed into one cell
  // spoils the per-edge conormal but not this sum.
  const ImmersedMesh m = graph_to_mesh(s);
  const MeshEnergy e = mesh_energy(A, m, true);
  std::vector<bool> collar = s.mesh.boundary;
  for (const Tri& t : m.triangles) {
    if (s.mesh.boundary[t[0]] || s.mesh.boundary[t[1]] || s.mesh.boundary[t[2]]) {
      for (int k = 0; k < 3; ++k) collar[t[k]] = true;
    }
  }
  const Vec3 field = X.vec();
  std::vector<double> terms;
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    if (collar[v]) terms.push_back(e.gradient[v].dot(field));
  }
  return pairwise_sum(terms);
}

}  // namespace scherk
