#include "scherk/plateau.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include <Eigen/SparseCholesky>

#include "scherk/energy.hpp"

namespace scherk {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;

int iteration_cap(const SolveOptions& opts, std::size_t n) {
  if (opts.max_iters > 0) return opts.max_iters;
  return static_cast<int>(std::min<std::size_t>(200 * n, std::numeric_limits<int>::max()));
}

void check_options(const SolveOptions& opts) {
  if (!std::isfinite(opts.tol) || !(opts.tol > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "tol must be positive");
  }
  if (!(opts.pinch_ratio >= 0.0) || !(opts.pinch_ratio < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "pinch_ratio must be in [0, 1)");
  }
}

// Interior unknowns of a triangulation and the inverse map.
struct Unknowns {
  std::vector<int> ids;
  std::vector<int> slot;  // -1 for boundary vertices
};

Unknowns interior_unknowns(const Triangulation& tri) {
  Unknowns u;
  u.slot.assign(tri.size(), -1);
  for (std::size_t i = 0; i < tri.size(); ++i) {
    if (!tri.boundary[i]) {
      u.slot[i] = static_cast<int>(u.ids.size());
      u.ids.push_back(static_cast<int>(i));
    }
  }
  return u;
}

Eigen::SparseMatrix<double> restrict_interior(const Eigen::SparseMatrix<double>& K,
                                              const Unknowns& u,
                                              Eigen::VectorXd* coupling,
                                              std::span<const double> heights) {
  const int n = static_cast<int>(u.ids.size());
  std::vector<Eigen::Triplet<double>> entries;
  if (coupling) coupling->setZero(n);
  for (int col = 0; col < K.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it; ++it) {
      const int r = u.slot[it.row()];
      const int c = u.slot[it.col()];
      if (r < 0) continue;
      if (c >= 0) {
        entries.emplace_back(r, c, it.value());
      } else if (coupling) {
        (*coupling)[r] += it.value() * heights[it.col()];
      }
    }
  }
  Eigen::SparseMatrix<double> out(n, n);
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

double sup_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

void finish_graph_report(const ModelMatrix& A, const GraphSurface& s, SolveReport& r) {
  r.area = r.energy_history.back();
  r.max_mean_curvature = max_abs(mean_curvature_graph(A, s));
}

}  // namespace

GraphSolution solve_graph(const ModelMatrix& A, const Triangulation& tri,
                          const SolveOptions& opts) {
  check_options(opts);
  GraphSurface s = initial_graph(tri, 0.0);
  // Harmonic extension in the metric of the flat leaf through the data.
  const Unknowns unk = interior_unknowns(tri);
  if (!unk.ids.empty()) {
    Eigen::VectorXd coupling;
    const Eigen::SparseMatrix<double> K =
        restrict_interior(graph_stiffness(A, tri, s.heights), unk, &coupling, s.heights);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
    if (ldlt.info() == Eigen::Success) {
      const Eigen::VectorXd u0 = ldlt.solve(-coupling);
      if (u0.allFinite()) {
        for (std::size_t k = 0; k < unk.ids.size(); ++k) s.heights[unk.ids[k]] = u0[k];
      }
    }
  }
  return solve_graph(A, std::move(s), opts);
}

GraphSolution solve_graph(const ModelMatrix& A, GraphSurface init,
                          const SolveOptions& opts) {
  check_options(opts);
  const Triangulation& tri = init.mesh;
  if (init.heights.size() != tri.size()) {
    throw Error(ErrorCode::InvalidConfig, "one height per vertex");
  }
  for (std::size_t i = 0; i < tri.size(); ++i) {
    if (tri.boundary[i]) init.heights[i] = tri.boundary_height[i];
    if (!std::isfinite(init.heights[i])) throw Error(ErrorCode::NonFinite, "initial height");
  }
  const Unknowns unk = interior_unknowns(tri);
  const int n = static_cast<int>(unk.ids.size());
  const int cap = iteration_cap(opts, tri.size());

  std::vector<double>& u = init.heights;
  GraphEnergy E = graph_energy(A, tri, u, true);
  SolveReport report;
  report.energy_history.push_back(E.area);

  auto interior_gradient = [&](const GraphEnergy& e) {
    Eigen::VectorXd g(n);
    for (int k = 0; k < n; ++k) g[k] = e.gradient[unk.ids[k]];
    return g;
  };

  Eigen::VectorXd g = interior_gradient(E);
  Eigen::VectorXd prev_step, prev_grad;
  std::vector<double> trial(u.size());
  int it = 0;
  for (; it < cap; ++it) {
    if (!std::isfinite(E.area) || !g.allFinite()) {
      throw Error(ErrorCode::NonFinite, "graph energy became non-finite");
    }
    if (sup_norm(g) < opts.tol) {
      report.converged = true;
      break;
    }
    // Lagged-diffusivity preconditioner: the area Hessian with the
    // integrand's square root frozen.
    const Eigen::SparseMatrix<double> K =
        restrict_interior(graph_stiffness(A, tri, u), unk, nullptr, u);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
    Eigen::VectorXd d;
    if (ldlt.info() == Eigen::Success) d = -ldlt.solve(g);
    if (d.size() != n || !d.allFinite() || !(g.dot(d) < 0.0)) d = -g;
    const double slope = g.dot(d);

    double alpha = 1.0;
    if (prev_step.size() == n) {
      const double sy = prev_step.dot(g - prev_grad);
      const double sKs = prev_step.dot(K * prev_step);
      const double dKd = d.dot(K * d);
      // Barzilai-Borwein step in the K-norm, rescaled to the new direction.
      if (sy > 0.0 && dKd > 0.0) alpha = std::clamp(sKs / sy, 1e-3, 1e3);
    }

    bool accepted = false;
    GraphEnergy next;
    Eigen::VectorXd next_g;
    for (int halving = 0; halving < kMaxHalvings; ++halving, alpha *= 0.5) {
      trial = u;
      for (int k = 0; k < n; ++k) trial[unk.ids[k]] += alpha * d[k];
      next = graph_energy(A, tri, trial, true);
      if (!std::isfinite(next.area)) continue;
      if (next.area <= E.area + kArmijo * alpha * slope) {
        accepted = true;
      } else if (next.area - E.area <= 1e-15 * std::abs(E.area) * std::sqrt(n + 1.0)) {
        // Energy differences at roundoff level; fall back on the gradient.
        next_g = interior_gradient(next);
        accepted = sup_norm(next_g) < sup_norm(g);
      }
      if (accepted) break;
    }
    if (!accepted) break;
    if (next_g.size() != n) next_g = interior_gradient(next);
    prev_step = alpha * d;
    prev_grad = g;
    u.swap(trial);
    E = std::move(next);
    g = std::move(next_g);
    report.energy_history.push_back(E.area);
  }
  report.iterations = it;
  report.gradient_norm = sup_norm(g);
  if (!report.converged && report.gradient_norm < opts.tol) report.converged = true;
  finish_graph_report(A, init, report);
  return {std::move(init), std::move(report)};
}

namespace {

std::vector<double> lumped_areas(const ModelMatrix& A, const ImmersedMesh& m) {
  const std::vector<double> areas = mesh_triangle_areas(A, m);
  std::vector<double> lumped(m.vertices.size(), 0.0);
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    for (int k = 0; k < 3; ++k) lumped[m.triangles[t][k]] += areas[t] / 3.0;
  }
  return lumped;
}

// Moves each free vertex halfway toward its neighbour average, with the
// component along the coordinate normal removed.
ImmersedMesh tangential_smoothing(const ImmersedMesh& m) {
  const std::size_t nv = m.vertices.size();
  std::vector<Vec3> normal(nv, Vec3::Zero());
  std::vector<Vec3> sum(nv, Vec3::Zero());
  std::vector<int> count(nv, 0);
  for (const Tri& t : m.triangles) {
    const Vec3 n = (m.vertices[t[1]] - m.vertices[t[0]]).cross(m.vertices[t[2]] - m.vertices[t[0]]);
    for (int k = 0; k < 3; ++k) {
      normal[t[k]] += n;
      sum[t[k]] += m.vertices[t[(k + 1) % 3]] + m.vertices[t[(k + 2) % 3]];
      count[t[k]] += 2;
    }
  }
  ImmersedMesh out = m;
  for (std::size_t v = 0; v < nv; ++v) {
    if (m.fixed[v] || count[v] == 0) continue;
    Vec3 delta = sum[v] / count[v] - m.vertices[v];
    const double nn = normal[v].norm();
    if (nn > 0.0) {
      const Vec3 n = normal[v] / nn;
      delta -= delta.dot(n) * n;
    }
    out.vertices[v] += 0.5 * delta;
  }
  return out;
}

// Metric cotangent Laplacian on the free vertices, metric frozen at each
// triangle's centroid. Row v of L X approximates dA/dX_v with the index
// raised.
Eigen::SparseMatrix<double> cotan_laplacian(const ModelMatrix& A, const ImmersedMesh& m,
                                            const std::vector<int>& slot, int n) {
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(m.triangles.size() * 9);
  for (const Tri& t : m.triangles) {
    const double zc = (m.vertices[t[0]].z() + m.vertices[t[1]].z() + m.vertices[t[2]].z()) / 3.0;
    Matrix3 G = Matrix3::Zero();
    G.topLeftCorner<2, 2>() = metric_block(A, zc);
    G(2, 2) = 1.0;
    const Vec3 e1 = m.vertices[t[1]] - m.vertices[t[0]];
    const Vec3 e2 = m.vertices[t[2]] - m.vertices[t[0]];
    const double twice_area =
        std::sqrt(std::max(e1.dot(G * e1) * e2.dot(G * e2) - std::pow(e1.dot(G * e2), 2), 0.0));
    if (!(twice_area > 0.0)) continue;
    for (int k = 0; k < 3; ++k) {
      const int i = t[k], j = t[(k + 1) % 3], o = t[(k + 2) % 3];
      const Vec3 u = m.vertices[i] - m.vertices[o];
      const Vec3 v = m.vertices[j] - m.vertices[o];
      const double w = 0.5 * u.dot(G * v) / twice_area;  // half the cotangent at o
      const int si = slot[i], sj = slot[j];
      if (si >= 0) entries.emplace_back(si, si, w);
      if (sj >= 0) entries.emplace_back(sj, sj, w);
      if (si >= 0 && sj >= 0) {
        entries.emplace_back(si, sj, -w);
        entries.emplace_back(sj, si, -w);
      }
    }
  }
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(entries.begin(), entries.end());
  return L;
}

Matrix3 vertex_metric(const ModelMatrix& A, double z) {
  Matrix3 g = Matrix3::Zero();
  g.topLeftCorner<2, 2>() = metric_block(A, z);
  g(2, 2) = 1.0;
  return g;
}

}  // namespace

MeshSolution solve_mesh(const ModelMatrix& A, ImmersedMesh init, const SolveOptions& opts) {
  check_options(opts);
  const std::size_t nv = init.vertices.size();
  if (init.fixed.size() != nv) throw Error(ErrorCode::InvalidConfig, "one flag per vertex");
  for (const Vec3& p : init.vertices) {
    if (!p.allFinite()) throw Error(ErrorCode::NonFinite, "initial vertex");
  }
  const int cap = iteration_cap(opts, nv);
  std::vector<int> slot(nv, -1), free_ids;
  for (std::size_t v = 0; v < nv; ++v) {
    if (!init.fixed[v]) {
      slot[v] = static_cast<int>(free_ids.size());
      free_ids.push_back(static_cast<int>(v));
    }
  }
  const int n = static_cast<int>(free_ids.size());

  double floor_area = opts.pinch_area;
  auto pinch_check = [&](const MeshEnergy& e) {
    if (e.min_triangle_area < floor_area) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "triangle area element %.3e below %.3e",
                    e.min_triangle_area, floor_area);
      throw Error(ErrorCode::PinchDetected, buf);
    }
  };

  ImmersedMesh& m = init;
  MeshEnergy E = mesh_energy(A, m, true);
  pinch_check(E);
  floor_area = std::max(opts.pinch_area, opts.pinch_ratio * E.min_triangle_area);
  SolveReport report;
  report.energy_history.push_back(E.area);

  // Directions live on the free vertices as an n x 3 block.
  using Block = Eigen::Matrix<double, Eigen::Dynamic, 3>;
  // Only the normal part of the gradient moves the surface; tangential parts
  // reparametrize it and collapse small triangles near boundary corners.
  // nu is the covector normal (sum of coordinate face normals), so the
  // metric normal vector is g^-1 nu.
  auto normals = [&](const ImmersedMesh& mesh) {
    std::vector<Vec3> nu(nv, Vec3::Zero());
    for (const Tri& t : mesh.triangles) {
      const Vec3 c = (mesh.vertices[t[1]] - mesh.vertices[t[0]])
                         .cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]);
      for (int k = 0; k < 3; ++k) nu[t[k]] += c;
    }
    return nu;
  };
  auto gather = [&](const ImmersedMesh& mesh, const std::vector<Vec3>& G) {
    const std::vector<Vec3> nu = normals(mesh);
    Block b(n, 3);
    for (int k = 0; k < n; ++k) {
      const int v = free_ids[k];
      const Vec3 up = vertex_metric(A, mesh.vertices[v].z()).inverse() * nu[v];
      const double nn = nu[v].dot(up);
      b.row(k) = (nn > 0.0 ? Vec3(G[v].dot(up) / nn * nu[v]) : G[v]).transpose();
    }
    return b;
  };
  auto to_normal = [&](const ImmersedMesh& mesh, Block& d) {
    const std::vector<Vec3> nu = normals(mesh);
    for (int k = 0; k < n; ++k) {
      const int v = free_ids[k];
      const Vec3 up = vertex_metric(A, mesh.vertices[v].z()).inverse() * nu[v];
      const double nn = nu[v].dot(up);
      if (nn > 0.0) d.row(k) = (nu[v].dot(d.row(k).transpose()) / nn * up).transpose();
    }
  };
  auto pair = [](const Block& x, const Block& y) { return (x.array() * y.array()).sum(); };

  Block g = gather(m, E.gradient), prev_step, prev_grad;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  ImmersedMesh trial = m;
  int it = 0;
  for (; it < cap; ++it) {
    if (!std::isfinite(E.area)) throw Error(ErrorCode::NonFinite, "mesh energy");
    if (n == 0 || g.cwiseAbs().maxCoeff() < opts.tol) {
      report.converged = true;
      break;
    }
    // Preconditioner P = g_v L: raise the index at each vertex, then invert
    // the cotangent Laplacian. Falls back to lumped area times metric.
    Block raised(n, 3);
    std::vector<Matrix3> gv(n);
    for (int k = 0; k < n; ++k) {
      gv[k] = vertex_metric(A, m.vertices[free_ids[k]].z());
      raised.row(k) = (gv[k].inverse() * g.row(k).transpose()).transpose();
    }
    const Eigen::SparseMatrix<double> L = cotan_laplacian(A, m, slot, n);
    Block d;
    ldlt.compute(L);
    if (ldlt.info() == Eigen::Success) d = -ldlt.solve(raised);
    Eigen::SparseMatrix<double> Lused = L;
    if (d.rows() != n || !d.allFinite() || !(pair(g, d) < 0.0)) {
      const std::vector<double> lumped = lumped_areas(A, m);
      Lused.resize(n, n);
      Lused.setIdentity();
      for (int k = 0; k < n; ++k) Lused.coeffRef(k, k) = lumped[free_ids[k]];
      d = -(Lused.diagonal().cwiseInverse().asDiagonal() * raised);
    }
    to_normal(m, d);
    const double slope = pair(g, d);

    double alpha = 1.0;
    if (prev_step.rows() == n) {
      Block Ps = Lused * prev_step;
      for (int k = 0; k < n; ++k) Ps.row(k) = (gv[k] * Ps.row(k).transpose()).transpose();
      const double sPs = pair(prev_step, Ps);
      const double sy = pair(prev_step, g - prev_grad);
      if (sy > 0.0 && sPs > 0.0) alpha = std::clamp(sPs / sy, 1e-6, 1e6);
    }

    bool accepted = false;
    MeshEnergy next;
    for (int halving = 0; halving < kMaxHalvings; ++halving, alpha *= 0.5) {
      trial.vertices = m.vertices;
      for (int k = 0; k < n; ++k) trial.vertices[free_ids[k]] += alpha * d.row(k).transpose();
      next = mesh_energy(A, trial, true);
      if (!std::isfinite(next.area)) continue;
      if (next.area <= E.area + kArmijo * alpha * slope) {
        accepted = true;
      } else if (next.area - E.area <= 1e-15 * std::abs(E.area) * std::sqrt(nv + 1.0)) {
        accepted = gather(trial, next.gradient).cwiseAbs().maxCoeff() < g.cwiseAbs().maxCoeff();
      }
      if (accepted) break;
    }
    if (!accepted) break;
    pinch_check(next);
    prev_step = alpha * d;
    prev_grad = g;
    std::swap(m.vertices, trial.vertices);
    E = std::move(next);
    g = gather(m, E.gradient);
    report.energy_history.push_back(E.area);

    if (opts.smoothing_every > 0 && (it + 1) % opts.smoothing_every == 0) {
      ImmersedMesh smooth = tangential_smoothing(m);
      MeshEnergy es = mesh_energy(A, smooth, true);
      if (std::isfinite(es.area) && es.area <= E.area &&
          es.min_triangle_area >= floor_area) {
        m.vertices = std::move(smooth.vertices);
        E = std::move(es);
        g = gather(m, E.gradient);
        report.energy_history.push_back(E.area);
        prev_step.resize(0, 3);
      }
    }
  }
  report.iterations = it;
  report.gradient_norm = n ? g.cwiseAbs().maxCoeff() : 0.0;
  if (!report.converged && report.gradient_norm < opts.tol) report.converged = true;
  report.area = E.area;
  const std::vector<double> H = mesh_mean_curvature(A, m);
  for (std::size_t v = 0; v < nv; ++v) {
    if (!m.fixed[v]) report.max_mean_curvature = std::max(report.max_mean_curvature, H[v]);
  }
  return {std::move(init), std::move(report)};
}

GraphSampler::GraphSampler(const GraphSurface& s) : s_(&s) {
  const auto& V = s.mesh.vertices;
  if (V.empty()) return;
  Point2 lo = V[0], hi = V[0];
  for (const Point2& p : V) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double span = std::max((hi - lo).maxCoeff(), 1e-300);
  const double ntri = static_cast<double>(std::max<std::size_t>(s.mesh.triangles.size(), 1));
  cell_ = std::max(span / std::sqrt(ntri), span * 1e-6);
  lo_ = lo;
  nx_ = static_cast<int>((hi.x() - lo.x()) / cell_) + 1;
  ny_ = static_cast<int>((hi.y() - lo.y()) / cell_) + 1;
  buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  for (std::size_t t = 0; t < s.mesh.triangles.size(); ++t) {
    const Tri& tr = s.mesh.triangles[t];
    Point2 a = V[tr[0]].cwiseMin(V[tr[1]]).cwiseMin(V[tr[2]]);
    Point2 b = V[tr[0]].cwiseMax(V[tr[1]]).cwiseMax(V[tr[2]]);
    const int i0 = std::clamp(static_cast<int>((a.x() - lo_.x()) / cell_), 0, nx_ - 1);
    const int i1 = std::clamp(static_cast<int>((b.x() - lo_.x()) / cell_), 0, nx_ - 1);
    const int j0 = std::clamp(static_cast<int>((a.y() - lo_.y()) / cell_), 0, ny_ - 1);
    const int j1 = std::clamp(static_cast<int>((b.y() - lo_.y()) / cell_), 0, ny_ - 1);
    for (int i = i0; i <= i1; ++i) {
      for (int j = j0; j <= j1; ++j) buckets_[static_cast<std::size_t>(i) * ny_ + j].push_back(static_cast<int>(t));
    }
  }
}

std::optional<double> GraphSampler::operator()(const Point2& q) const {
  if (buckets_.empty()) return std::nullopt;
  const int i = static_cast<int>(std::floor((q.x() - lo_.x()) / cell_));
  const int j = static_cast<int>(std::floor((q.y() - lo_.y()) / cell_));
  const auto& V = s_->mesh.vertices;
  for (int di = -1; di <= 1; ++di) {
    for (int dj = -1; dj <= 1; ++dj) {
      const int ii = i + di, jj = j + dj;
      if (ii < 0 || jj < 0 || ii >= nx_ || jj >= ny_) continue;
      for (int t : buckets_[static_cast<std::size_t>(ii) * ny_ + jj]) {
        const Tri& tr = s_->mesh.triangles[t];
        const Point2 e1 = V[tr[1]] - V[tr[0]];
        const Point2 e2 = V[tr[2]] - V[tr[0]];
        const Point2 r = q - V[tr[0]];
        const double det = e1.x() * e2.y() - e1.y() * e2.x();
        const double l1 = (r.x() * e2.y() - r.y() * e2.x()) / det;
        const double l2 = (e1.x() * r.y() - e1.y() * r.x()) / det;
        const double l0 = 1.0 - l1 - l2;
        constexpr double slack = -1e-12;
        if (l0 >= slack && l1 >= slack && l2 >= slack) {
          return l0 * s_->heights[tr[0]] + l1 * s_->heights[tr[1]] + l2 * s_->heights[tr[2]];
        }
      }
    }
  }
  return std::nullopt;
}

SequenceReport solve_sequence(const ModelMatrix& A, Construction kind, double a,
                              const std::vector<double>& c_list, double h,
                              const SolveOptions& opts, int jobs,
                              const std::vector<Point2>& samples,
                              std::optional<Point2> probe) {
  if (c_list.empty()) throw Error(ErrorCode::InvalidConfig, "empty c list");
  for (std::size_t k = 1; k < c_list.size(); ++k) {
    if (!(c_list[k] > c_list[k - 1])) {
      throw Error(ErrorCode::InvalidConfig, "c list must be strictly increasing");
    }
  }
  const std::size_t n = c_list.size();
  SequenceReport rep;
  rep.c_list = c_list;
  rep.surfaces.resize(n);
  rep.reports.resize(n);
  std::vector<std::exception_ptr> errors(n);

  auto run = [&](std::size_t k) {
    try {
      const ContourSpec spec = kind == Construction::Doubly
                                   ? ContourSpec{DoublyPc{a, c_list[k]}}
                                   : ContourSpec{SinglyPc{a, c_list[k]}};
      GraphSolution sol = solve_graph(A, triangulate(resolve_contour(spec), h), opts);
      rep.surfaces[k] = std::move(sol.surface);
      rep.reports[k] = std::move(sol.report);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  const int workers = std::clamp(jobs, 1, static_cast<int>(n));
  if (workers == 1) {
    for (std::size_t k = 0; k < n; ++k) run(k);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < n; k += workers) run(k);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const Triangulation& first = rep.surfaces[0].mesh;
  if (samples.empty()) {
    for (std::size_t i = 0; i < first.size(); ++i) {
      if (!first.boundary[i]) rep.samples.push_back(first.vertices[i]);
    }
  } else {
    rep.samples = samples;
  }
  const DomainPolygon dom0 = resolve_contour(
      kind == Construction::Doubly ? ContourSpec{DoublyPc{a, c_list[0]}}
                                   : ContourSpec{SinglyPc{a, c_list[0]}});
  if (probe) {
    rep.probe = *probe;
  } else {
    for (const Point2& v : dom0.vertices) rep.probe += v;
    rep.probe /= static_cast<double>(dom0.vertices.size());
  }

  std::vector<GraphSampler> samplers;
  samplers.reserve(n);
  for (const auto& s : rep.surfaces) samplers.emplace_back(s);
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = samplers[k](rep.probe);
    rep.probe_heights.push_back(v ? *v : std::numeric_limits<double>::quiet_NaN());
  }

  rep.min_difference = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::vector<double> diff;
    diff.reserve(rep.samples.size());
    for (const Point2& q : rep.samples) {
      const auto lo = samplers[k](q);
      const auto hi = samplers[k + 1](q);
      if (!lo || !hi) {
        diff.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      diff.push_back(*hi - *lo);
      rep.min_difference = std::min(rep.min_difference, *hi - *lo);
    }
    rep.differences.push_back(std::move(diff));
    rep.cauchy.push_back(std::abs(rep.probe_heights[k + 1] - rep.probe_heights[k]));
  }
  if (n == 1) rep.min_difference = 0.0;
  rep.monotone = rep.min_difference >= -1e-9;
  rep.cauchy_decreasing = true;
  for (std::size_t k = 0; k + 1 < rep.cauchy.size(); ++k) {
    if (!(rep.cauchy[k + 1] < rep.cauchy[k])) rep.cauchy_decreasing = false;
  }
  return rep;
}

ImmersedMesh annulus_initial_mesh(const DoublyConfig& cfg, int n_around, int n_across) {
  cfg.validate();
  if (n_around < 4 || n_across < 1) {
    throw Error(ErrorCode::InvalidConfig, "annulus mesh needs n_around >= 4, n_across >= 1");
  }
  const double a = cfg.a, e = cfg.eps;
  // Matching loops: boundary of face A (plane y = -eps) and face B (x = -eps).
  const std::array<Vec3, 4> loop_a = {Vec3(e, -e, cfg.c0), Vec3(a + e, -e, cfg.c0),
                                      Vec3(a + e, -e, cfg.c1), Vec3(e, -e, cfg.c1)};
  const std::array<Vec3, 4> loop_b = {Vec3(-e, e, cfg.c0), Vec3(-e, a + e, cfg.c0),
                                      Vec3(-e, a + e, cfg.c1), Vec3(-e, e, cfg.c1)};
  const double height = cfg.c1 - cfg.c0;
  const double perimeter = 2.0 * (a + height);
  std::array<int, 4> per_side;
  for (int s = 0; s < 4; ++s) {
    const double len = s % 2 == 0 ? a : height;
    per_side[s] = std::max(1, static_cast<int>(std::lround(n_around * len / perimeter)));
  }
  std::vector<Vec3> pa, pb;
  for (int s = 0; s < 4; ++s) {
    for (int k = 0; k < per_side[s]; ++k) {
      const double t = static_cast<double>(k) / per_side[s];
      pa.push_back((1 - t) * loop_a[s] + t * loop_a[(s + 1) % 4]);
      pb.push_back((1 - t) * loop_b[s] + t * loop_b[(s + 1) % 4]);
    }
  }
  const int ring = static_cast<int>(pa.size());
  ImmersedMesh m;
  for (int j = 0; j <= n_across; ++j) {
    const double t = static_cast<double>(j) / n_across;
    for (int k = 0; k < ring; ++k) {
      m.vertices.push_back((1 - t) * pa[k] + t * pb[k]);
      m.fixed.push_back(j == 0 || j == n_across);
    }
  }
  for (int j = 0; j < n_across; ++j) {
    for (int k = 0; k < ring; ++k) {
      const int v00 = j * ring + k, v01 = j * ring + (k + 1) % ring;
      const int v10 = v00 + ring, v11 = v01 + ring;
      m.triangles.push_back({v00, v01, v11});
      m.triangles.push_back({v00, v11, v10});
    }
  }
  return m;
}

ImmersedMesh cylinder_mesh(double r, double z0, double z1, int n_around, int n_across) {
  if (!(r > 0.0) || !(z1 > z0) || n_around < 3 || n_across < 1) {
    throw Error(ErrorCode::InvalidConfig, "bad cylinder parameters");
  }
  ImmersedMesh m;
  for (int j = 0; j <= n_across; ++j) {
    const double z = z0 + (z1 - z0) * j / n_across;
    for (int k = 0; k < n_around; ++k) {
      const double th = 2.0 * std::numbers::pi * k / n_around;
      m.vertices.emplace_back(r * std::cos(th), r * std::sin(th), z);
      m.fixed.push_back(j == 0 || j == n_across);
    }
  }
  for (int j = 0; j < n_across; ++j) {
    for (int k = 0; k < n_around; ++k) {
      const int v00 = j * n_around + k, v01 = j * n_around + (k + 1) % n_around;
      const int v10 = v00 + n_around, v11 = v01 + n_around;
      m.triangles.push_back({v00, v01, v11});
      m.triangles.push_back({v00, v11, v10});
    }
  }
  return m;
}

}  // namespace scherk
