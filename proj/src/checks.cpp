#include "scherk/checks.hpp"

#include <cmath>
#include <random>


namespace scherk {

Christoffel connection_table(const ModelMatrix& A) {
  const double a = A.a(), d = A.d();
  const double s = 0.5 * (A.b() + A.c());
  const double r = 0.5 * (A.c() - A.b());
  Christoffel t{};
  t[0][0][2] = a;
  t[0][1][2] = s;
  t[0][2][0] = -a;
  t[0][2][1] = -s;
  t[1][0][2] = s;
  t[1][1][2] = d;
  t[1][2][0] = -s;
  t[1][2][1] = -d;
  t[2][0][1] = r;
  t[2][1][0] = -r;
  return t;
}

std::vector<Residual> geometry_suite(const ModelMatrix& A, int n_points, std::uint64_t seed) {
  if (n_points < 1) throw Error(ErrorCode::InvalidConfig, "n_points >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> horiz(-2.0, 2.0);
  std::uniform_real_distribution<double> vert(-1.5, 1.5);

  double ortho = 0.0, det = 0.0, conn = 0.0;
  const Christoffel table = connection_table(A);
  for (int s = 0; s < n_points; ++s) {
    const GroupPoint p{horiz(rng), horiz(rng), vert(rng)};
    const MetricTensor g = metric_at(A, p);
    const FrameTriple f = left_frame(A, p);
    const std::array<Vec3, 3> E = {f.e1.vec(), f.e2.vec(), f.e3.vec()};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        ortho = std::max(ortho, std::abs(g.inner(E[i], E[j]) - (i == j ? 1.0 : 0.0)));
      }
    }
    const double expected = std::exp(p.z * A.trace());
    det = std::max(det, std::abs(exp_at(A, p.z).determinant() - expected) / expected);
    const Christoffel c = frame_connection(A, p);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) conn = std::max(conn, std::abs(c[i][j][k] - table[i][j][k]));
      }
    }
  }

  std::vector<Residual> out = {
      {"frame_orthonormality", ortho, 1e-12},
      {"exp_determinant", det, 1e-10},
      {"connection_table", conn, 1e-10},
  };
  const double x0 = horiz(rng), y0 = horiz(rng);
  out.push_back({"vertical_rotation", verify_isometry(A, VerticalRotation{x0, y0}, n_points), 1e-10});
  const GroupPoint by{horiz(rng), horiz(rng), vert(rng)};
  out.push_back({"left_translation", verify_isometry(A, LeftTranslation{by}, n_points), 1e-10});
  if (A.antidiagonal()) {
    out.push_back({"horizontal_rotation_x",
                   verify_isometry(A, HorizontalRotationParallelX{y0}, n_points), 1e-10});
    out.push_back({"horizontal_rotation_y",
                   verify_isometry(A, HorizontalRotationParallelY{x0}, n_points), 1e-10});
  }
  return out;
}

double scherk_height(double x, double y) { return std::log(std::cos(x) / std::cos(y)); }

std::vector<BenchmarkRow> scherk_benchmark(const std::vector<double>& hs, const SolveOptions& opts) {
  const ModelMatrix E = ModelMatrix::euclidean();
  DomainPolygon square;
  square.vertices = {{-0.7, -0.7}, {0.7, -0.7}, {0.7, 0.7}, {-0.7, 0.7}};
  square.heights.assign(4, EdgeHeight::constant(0.0));
  std::vector<BenchmarkRow> rows;
  for (double h : hs) {
    Triangulation tri = triangulate(square, h);
    set_boundary_heights(tri, scherk_height);
    const GraphSolution sol = solve_graph(E, tri, opts);
    BenchmarkRow r;
    r.h = h;
    r.vertices = tri.size();
    r.iterations = sol.report.iterations;
    r.converged = sol.report.converged;
    for (std::size_t i = 0; i < tri.size(); ++i) {
      const double exact = scherk_height(tri.vertices[i].x(), tri.vertices[i].y());
      r.sup_error = std::max(r.sup_error, std::abs(sol.surface.heights[i] - exact));
    }
    if (!rows.empty() && r.sup_error > 0.0) r.ratio = rows.back().sup_error / r.sup_error;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace scherk
