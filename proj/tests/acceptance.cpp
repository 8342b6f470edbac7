// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance                 all criteria
//   acceptance --criterion N   only criterion N

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scherk/area.hpp"
#include "scherk/checks.hpp"
#include "scherk/energy.hpp"
#include "scherk/periodic.hpp"
#include "scherk/plateau.hpp"

using namespace scherk;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::vector<ModelMatrix> presets() {
  return {ModelMatrix::euclidean(), ModelMatrix::heisenberg(), ModelMatrix::sol(),
          ModelMatrix::sol_family(2.0)};
}

double residual(const std::vector<Residual>& rs, const std::string& name) {
  for (const Residual& r : rs)
    if (r.name == name) return r.value;
  return INFINITY;
}

Outcome frames() {
  double ortho = 0, det = 0;
  for (const ModelMatrix& A : presets()) {
    const auto rs = geometry_suite(A, 100, 42);
    ortho = std::max(ortho, residual(rs, "frame_orthonormality"));
    det = std::max(det, residual(rs, "exp_determinant"));
  }
  return {ortho < 1e-12 && det < 1e-10, "orthonormality " + num(ortho) + ", det " + num(det)};
}

Outcome connection() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0;
  for (int s = 0; s < 20; ++s) {
    const ModelMatrix A(u(rng), u(rng), u(rng), u(rng));
    const Christoffel c = frame_connection(A, GroupPoint{u(rng), u(rng), 1.5 * u(rng)});
    const Christoffel t = connection_table(A);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(c[i][j][k] - t[i][j][k]));
  }
  return {worst < 1e-10, "max table deviation " + num(worst)};
}

Outcome isometries() {
  double worst = 0;
  std::vector<ModelMatrix> all = presets();
  all.push_back(ModelMatrix(1, 0, 0, 0));
  for (const ModelMatrix& A : all) {
    worst = std::max(worst, verify_isometry(A, VerticalRotation{0.4, -0.3}, 100));
    worst = std::max(worst, verify_isometry(A, LeftTranslation{{0.7, -1.1, 0.6}}, 100));
    if (A.antidiagonal()) {
      worst = std::max(worst, verify_isometry(A, HorizontalRotationParallelX{0.25}, 100));
      worst = std::max(worst, verify_isometry(A, HorizontalRotationParallelY{-0.5}, 100));
    }
  }
  bool rejected = false;
  try {
    apply_isometry(ModelMatrix(1, 0, 0, 0), HorizontalRotationParallelX{0.0}, GroupPoint{});
  } catch (const Error& e) {
    rejected = e.code() == ErrorCode::InvalidForModel;
  }
  const double control = verify_isometry(ModelMatrix(1, 0, 0, 0), HorizontalRotationParallelX{0.0}, 100);
  return {worst < 1e-10 && rejected && control > 1e-3,
          "pullback defect " + num(worst) + ", control defect " + num(control) +
              (rejected ? ", control rejected" : ", control accepted")};
}

ImmersedMesh vertical_plane(int n) {
  ImmersedMesh m;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const double t = -0.5 + 1.0 * i / n, z = -0.5 + 1.0 * j / n;
      m.vertices.emplace_back(t, 0.6 * t - 0.2, z);
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = j * (n + 1) + i;
      m.triangles.push_back({a, a + 1, a + n + 2});
      m.triangles.push_back({a, a + n + 2, a + n + 1});
    }
  m.fixed = mesh_boundary_vertices(m.triangles, m.vertices.size());
  return m;
}

Outcome leaf_curvature() {
  DomainPolygon sq;
  sq.vertices = {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
  sq.heights.assign(4, EdgeHeight::constant(0.0));
  const GraphSurface leaf = initial_graph(triangulate(sq, 0.02), 0.0);
  const ModelMatrix A(1, 0, 0, 0);
  double trace_err = 0;
  for (const VertexValue& v : mean_curvature_graph(A, leaf))
    trace_err = std::max(trace_err, std::abs(v.value - A.trace() / 2));
  double anti = 0;
  for (const ModelMatrix& B : presets()) anti = std::max(anti, max_abs(mean_curvature_graph(B, leaf)));
  const ImmersedMesh plane = vertical_plane(50);
  double vert = 0;
  std::vector<ModelMatrix> all = presets();
  all.push_back(A);
  for (const ModelMatrix& B : all) {
    const std::vector<double> H = mesh_mean_curvature(B, plane);
    for (std::size_t i = 0; i < H.size(); ++i)
      if (!plane.fixed[i]) vert = std::max(vert, H[i]);
  }
  return {trace_err < 5e-2 && anti < 5e-3 && vert < 5e-3,
          "|H - trA/2| " + num(trace_err) + ", antidiagonal |H| " + num(anti) + ", vertical plane |H| " +
              num(vert)};
}

Outcome douglas() {
  const ModelMatrix H = ModelMatrix::heisenberg();
  const double a_max = a_max_doubly(H, 1, 2);
  const double eps_max = epsilon_max_doubly(H, 0.1, 1, 2);
  const double d_min = d_min_singly(H, 0.5, 0.1, 1.0);
  const double a = 0.1, eps = 0.5 * eps_max;
  const FaceAreaReport r = doubly_face_areas(H, {a, eps, 1, 2});
  const bool face_e = r.area_e == a * (a + 4 * eps) / 2;
  return {std::abs(a_max - 0.11535) <= 1e-4 && std::abs(eps_max - 1.37e-4) <= 1e-5 &&
              std::abs(d_min - 2.778) <= 1e-3 && face_e,
          "a_max " + num(a_max) + ", eps_max " + num(eps_max) + ", d_min " + num(d_min) +
              (face_e ? ", face E exact" : ", face E off")};
}

Outcome calibration() {
  const auto rows = scherk_benchmark({0.04, 0.02, 0.01});
  bool ok = true;
  std::string ratios;
  for (const BenchmarkRow& r : rows) {
    ok = ok && r.converged;
    if (r.ratio != 0.0) {
      ok = ok && r.ratio >= 3 && r.ratio <= 5;
      ratios += (ratios.empty() ? "" : ", ") + num(r.ratio);
    }
  }
  DomainPolygon sq;
  sq.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  sq.heights.assign(4, EdgeHeight::constant(0.0));
  Triangulation tri = triangulate(sq, 0.05);
  auto plane = [](double x, double y) { return 0.4 * x - 0.9 * y + 0.1; };
  set_boundary_heights(tri, plane);
  SolveOptions o;
  o.tol = 1e-13;
  const GraphSolution sol = solve_graph(ModelMatrix::euclidean(), tri, o);
  double affine = 0;
  for (std::size_t i = 0; i < tri.size(); ++i)
    affine = std::max(affine, std::abs(sol.surface.heights[i] - plane(tri.vertices[i].x(), tri.vertices[i].y())));
  ok = ok && affine < 1e-10;
  return {ok, "error ratios " + ratios + ", affine error " + num(affine)};
}

Outcome plateau_model(const std::string& name, const ModelMatrix& A, double c0) {
  const double a = 0.8 * a_max_doubly(A, c0, c0 + 1), c = 2.0;
  const GraphSolution coarse = solve_graph(A, triangulate(resolve_contour(DoublyPc{a, c}), 0.01));
  const GraphSolution sol = solve_graph(A, triangulate(resolve_contour(DoublyPc{a, c}), 0.005));
  double lo = INFINITY, hi = -INFINITY;
  for (double u : sol.surface.heights) {
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  const double h_fine = sol.report.max_mean_curvature, h_coarse = coarse.report.max_mean_curvature;
  const bool halving = h_fine <= 0.5 * h_coarse;
  const double fx = flux(A, sol.surface, KillingField(1, 0));
  const double fxy = flux(A, sol.surface, KillingField(1, 1));
  const bool ok = sol.report.converged && coarse.report.converged && lo >= 0 && hi <= c &&
                  h_fine < 2e-2 && halving && std::abs(fx) < 1e-2 && std::abs(fxy) < 1e-2;
  return {ok, name + ": converged " + std::to_string(sol.report.converged) + ", heights [" + num(lo) + ", " +
                  num(hi) + "], maxH " + num(h_coarse) + " -> " + num(h_fine) + (halving ? " (halves)" : " (does not halve)") +
                  ", flux " + num(fx) + " / " + num(fxy)};
}

Outcome plateau() {
  const Outcome h = plateau_model("heisenberg", ModelMatrix::heisenberg(), 1.0);
  const Outcome s = plateau_model("sol", ModelMatrix::sol(), 0.5);
  return {h.pass && s.pass, h.detail + "; " + s.detail};
}

Outcome monotonicity() {
  const SequenceReport r =
      solve_sequence(ModelMatrix::heisenberg(), Construction::Doubly, 0.1, {0.5, 1, 2, 4}, 0.005);
  bool converged = true;
  for (const SolveReport& s : r.reports) converged = converged && s.converged;
  std::string cauchy;
  for (double c : r.cauchy) cauchy += (cauchy.empty() ? "" : ", ") + num(c);
  return {converged && r.monotone && r.cauchy_decreasing,
          "min difference " + num(r.min_difference) + ", Cauchy differences " + cauchy};
}

Outcome annulus() {
  const ModelMatrix H = ModelMatrix::heisenberg();
  const DoublyConfig cfg{0.1, 5e-5, 1, 2};
  const FaceAreaReport faces = doubly_face_areas(H, cfg);
  const MeshSolution ring = solve_mesh(H, annulus_initial_mesh(cfg, 64, 8));
  const double discs = faces.area_a + faces.area_b;
  const bool barrier = faces.satisfied && ring.report.converged && ring.report.area < discs;

  double lo = 0.3, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::cosh(0.25 / mid) > 1.0 ? hi : lo) = mid;
  }
  const double neck = 0.5 * (lo + hi);
  const double exact = M_PI * neck * (0.5 + neck * std::sinh(0.5 / neck));
  const MeshSolution cat = solve_mesh(ModelMatrix::euclidean(), cylinder_mesh(1.0, -0.25, 0.25, 64, 16));
  const double rel = std::abs(cat.report.area - exact) / exact;

  bool pinched = false;
  try {
    solve_mesh(ModelMatrix::euclidean(), cylinder_mesh(1.0, -1.0, 1.0, 64, 16));
  } catch (const Error& e) {
    pinched = e.code() == ErrorCode::PinchDetected;
  }
  return {barrier && cat.report.converged && rel < 0.02 && pinched,
          "annulus " + num(ring.report.area) + " vs discs " + num(discs) + ", catenoid error " + num(rel) +
              (pinched ? ", far pair pinches" : ", far pair did not pinch")};
}

Outcome periodic() {
  const ModelMatrix H = ModelMatrix::heisenberg();
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-3, 3);
  const double a_max = a_max_doubly(H, 1, 2), a = 0.8 * a_max;
  double ident = 0;
  for (int s = 0; s < 100; ++s) {
    const GroupPoint p{u(rng), u(rng), u(rng)};
    const GroupPoint r = apply_isometry(H, VerticalRotation{0, 0}, p).point;
    const GroupPoint t1 = apply_isometry(H, VerticalRotation{-a, a}, r).point;
    const GroupPoint t2 = apply_isometry(H, VerticalRotation{a, a}, r).point;
    const GroupPoint t3 = apply_isometry(H, VerticalRotation{0, a}, r).point;
    ident = std::max(ident, (t1.vec() - group_multiply(H, {-2 * a, 2 * a, 0}, p).vec()).cwiseAbs().maxCoeff());
    ident = std::max(ident, (t2.vec() - group_multiply(H, {2 * a, 2 * a, 0}, p).vec()).cwiseAbs().maxCoeff());
    ident = std::max(ident, (t3.vec() - group_multiply(H, {0, 2 * a, 0}, p).vec()).cwiseAbs().maxCoeff());
  }

  auto piece = [&](double h) {
    return solve_graph(H, triangulate(resolve_contour(DoublyPc{a, 2.0}), h)).surface;
  };
  const GraphSurface coarse = piece(0.01), fine = piece(0.005);
  const PeriodicAssembly ac = build_doubly(H, coarse, 2), af = build_doubly(H, fine, 2);
  double defect = 0;
  for (const Vec3& t : ac.generators) defect = std::max(defect, periodicity_defect(H, ac, t));
  const GraphSurface sp =
      solve_graph(H, triangulate(resolve_contour(SinglyPc{0.3, 1.0}), 0.01)).surface;
  const PeriodicAssembly as = build_singly(H, sp, 3);
  const double singly_defect = periodicity_defect(H, as, as.generators[0]);
  const double seam_c = seam_curvature(H, ac), seam_f = seam_curvature(H, af);
  const GroupPoint g1 = GroupPoint::from(ac.generators[0]), g2 = GroupPoint::from(ac.generators[1]);
  const bool commute = group_multiply(H, g1, g2).vec() == group_multiply(H, g2, g1).vec();
  return {ident < 1e-12 && defect < coarse.mesh.h && singly_defect < sp.mesh.h && seam_f < seam_c && commute,
          "identity " + num(ident) + ", defect " + num(defect) + " / " + num(singly_defect) + ", seam " +
              num(seam_c) + " -> " + num(seam_f) + (commute ? ", generators commute" : ", generators do not commute")};
}

struct Criterion {
  int id;
  const char* title;
  double budget;  // seconds
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "frame and metric suite", 1, frames},
      {2, "connection table", 1, connection},
      {3, "isometry suite", 1, isometries},
      {4, "leaf and vertical plane curvature", 10, leaf_curvature},
      {5, "Douglas quantities", 1, douglas},
      {6, "Euclidean solver calibration", 120, calibration},
      {7, "Plateau solutions in Heisenberg and Sol", 600, plateau},
      {8, "monotone sequence", 600, monotonicity},
      {9, "annulus barrier", 120, annulus},
      {10, "periodic assemblies", 120, periodic},
  };
  bool ok = true;
  for (const Criterion& c : all) {
    if (only && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < c.budget;
    std::printf("criterion %d %s: %s (%s; %.2f s of %.0f s)\n", c.id, c.title, pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs, c.budget);
    std::fflush(stdout);
    ok = ok && pass;
  }
  return ok ? 0 : 1;
}
