#include <doctest.h>

#include <cmath>

#include "scherk/area.hpp"

using namespace scherk;

namespace {

// Composite Simpson with many panels; the integrands are smooth.
template <class F>
double simpson(F f, double lo, double hi, int n = 20000) {
  const double h = (hi - lo) / n;
  double s = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

// Antiderivative of sqrt(1 + t^2).
double F(double t) { return 0.5 * (t * std::sqrt(1 + t * t) + std::asinh(t)); }

// Vertical strip {p + s u, z}: s in [0, len], z in [z0, z1], as a fine mesh.
ImmersedMesh vertical_strip(const Eigen::Vector2d& p, const Eigen::Vector2d& u, double len,
                            double z0, double z1, int n) {
  ImmersedMesh m;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const Eigen::Vector2d q = p + u * (len * i / n);
      m.vertices.emplace_back(q.x(), q.y(), z0 + (z1 - z0) * j / n);
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = j * (n + 1) + i;
      m.triangles.push_back({a, a + 1, a + n + 2});
      m.triangles.push_back({a, a + n + 2, a + n + 1});
    }
  m.fixed.assign(m.vertices.size(), true);
  return m;
}

}  // namespace

TEST_CASE("Heisenberg norms in closed form") {
  const ModelMatrix H = ModelMatrix::heisenberg();
  for (double z : {-1.0, 0.0, 0.5, 2.0}) {
    const DirectionalNorms n = directional_norms(H, z);
    CHECK(n.dx == doctest::Approx(1.0));
    CHECK(n.dy == doctest::Approx(std::sqrt(1 + z * z)));
    CHECK(n.diagonal == doctest::Approx(std::sqrt((z + 1) * (z + 1) + 1)));
  }
}

TEST_CASE("antidiagonal diagonal norm identity") {
  for (const ModelMatrix& A : {ModelMatrix::sol(), ModelMatrix::sol_family(3.0), ModelMatrix(0, -1, 2, 0)}) {
    for (double z : {-0.7, 0.4, 1.1}) {
      const Matrix2 e = exp_at(A, z);
      const double expected = std::hypot(e(0, 0) + e(0, 1), e(0, 0) + e(1, 0));
      CHECK(directional_norms(A, z).diagonal == doctest::Approx(expected));
    }
  }
}

TEST_CASE("norm integrals agree with Simpson sums") {
  for (const ModelMatrix& A : {ModelMatrix::heisenberg(), ModelMatrix::sol(), ModelMatrix(0.3, -0.7, 0.4, 0.9)}) {
    const NormIntegrals I = norm_integrals(A, 0.3, 1.7);
    CHECK(I.ix == doctest::Approx(simpson([&](double z) { return directional_norms(A, z).dx; }, 0.3, 1.7)).epsilon(1e-12));
    CHECK(I.iy == doctest::Approx(simpson([&](double z) { return directional_norms(A, z).dy; }, 0.3, 1.7)).epsilon(1e-12));
    CHECK(I.idiag == doctest::Approx(simpson([&](double z) { return directional_norms(A, z).diagonal; }, 0.3, 1.7)).epsilon(1e-12));
  }
}

TEST_CASE("Heisenberg a_max and eps_max from closed-form integrals") {
  const ModelMatrix H = ModelMatrix::heisenberg();
  const double ix = 1.0, iy = F(2) - F(1), id = F(3) - F(2);
  const double a_max = ix + iy - id;
  CHECK(a_max_doubly(H, 1, 2) == doctest::Approx(a_max).epsilon(1e-13));
  CHECK(std::abs(a_max - 0.11535) < 1e-4);
  const double a = 0.1;
  const double eps_max = a / 4 * (ix + iy) / (a + id) - a / 4;
  CHECK(epsilon_max_doubly(H, a, 1, 2) == doctest::Approx(eps_max).epsilon(1e-12));
  CHECK(std::abs(eps_max - 1.37e-4) < 1e-5);
}

TEST_CASE("Euclidean bounds are constants") {
  const ModelMatrix E = ModelMatrix::euclidean();
  CHECK(a_max_doubly(E, 0, 1) == doctest::Approx(2 - std::sqrt(2.0)).epsilon(1e-14));
  try {
    epsilon_max_doubly(E, 1.0, 0, 1);
    FAIL("expected AExceedsBound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AExceedsBound);
  }
}

TEST_CASE("eps_max is where the Douglas margin closes") {
  const ModelMatrix H = ModelMatrix::heisenberg();
  const double a = 0.1, e = epsilon_max_doubly(H, a, 1, 2);
  CHECK(doubly_face_areas(H, {a, 0.5 * e, 1, 2}).satisfied);
  CHECK_FALSE(doubly_face_areas(H, {a, 1.5 * e, 1, 2}).satisfied);
  CHECK(std::abs(doubly_face_areas(H, {a, e, 1, 2}).margin) < 1e-14);
}

TEST_CASE("repeated-dx variant differs only through Iy") {
  const ModelMatrix E = ModelMatrix::euclidean();
  CHECK(epsilon_max_doubly_repeated_dx(E, 0.2, 0.5, 1.5) == doctest::Approx(epsilon_max_doubly(E, 0.2, 0.5, 1.5)));
  const ModelMatrix H = ModelMatrix::heisenberg();
  CHECK(epsilon_max_doubly_repeated_dx(H, 0.1, 1, 2) < epsilon_max_doubly(H, 0.1, 1, 2));
}

TEST_CASE("face areas match meshed faces") {
  for (const ModelMatrix& A : {ModelMatrix::heisenberg(), ModelMatrix::sol()}) {
    const double a = 0.1, eps = 1e-4, c0 = 1, c1 = 2;
    const FaceAreaReport r = doubly_face_areas(A, {a, eps, c0, c1});
    const ImmersedMesh fa = vertical_strip({0, 0}, {1, 0}, a, c0, c1, 80);
    const ImmersedMesh fb = vertical_strip({0, 0}, {0, 1}, a, c0, c1, 80);
    const Eigen::Vector2d diag = Eigen::Vector2d(1, -1) / std::sqrt(2.0);
    const ImmersedMesh fd = vertical_strip({0, 0}, diag, (a + 2 * eps) * std::sqrt(2.0), c0, c1, 80);
    CHECK(patch_area(A, fa) == doctest::Approx(r.area_a).epsilon(2e-5));
    CHECK(patch_area(A, fb) == doctest::Approx(r.area_b).epsilon(2e-5));
    CHECK(patch_area(A, fd) == doctest::Approx(r.area_d).epsilon(2e-5));
  }
}

TEST_CASE("leaf faces reproduce a(a + 4 eps)/2 in antidiagonal models") {
  const double a = 0.1, eps = 1e-4;
  for (const ModelMatrix& A : {ModelMatrix::heisenberg(), ModelMatrix::sol(), ModelMatrix::sol_family(2.0)}) {
    const FaceAreaReport r = doubly_face_areas(A, {a, eps, 1, 2});
    CHECK(r.area_e == a * (a + 4 * eps) / 2);
    CHECK(r.area_f == a * (a + 4 * eps) / 2);
  }
}

TEST_CASE("singly d_min") {
  const ModelMatrix H = ModelMatrix::heisenberg();
  const double iy = F(1) - F(0);
  const double expected = 0.1 + 0.7 * iy / 0.3;
  CHECK(d_min_singly(H, 0.5, 0.1, 1.0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(d_min_singly(H, 0.5, 0.1, 1.0) - 2.778) < 1e-3);
  const double d = d_min_singly(H, 0.5, 0.1, 1.0);
  CHECK(singly_face_areas(H, {0.5, 0.1, d * 1.01, 1.0}).satisfied);
  CHECK_FALSE(singly_face_areas(H, {0.5, 0.1, d * 0.99, 1.0}).satisfied);
  try {
    d_min_singly(H, 0.9, 0.1, 1.0);
    FAIL("expected AssumptionViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AssumptionViolated);
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(DoublyConfig({0.1, -1, 1, 2}).validate(), Error);
  CHECK_THROWS_AS(DoublyConfig({0.1, 1e-4, 2, 1}).validate(), Error);
  CHECK_THROWS_AS(SinglyConfig({0.5, 0.6, 3, 1}).validate(), Error);
  CHECK_THROWS_AS(a_max_doubly(ModelMatrix::heisenberg(), 2, 1), Error);
  CHECK_THROWS_AS(a_max_doubly(ModelMatrix::heisenberg(), NAN, 1), Error);
}

TEST_CASE("directional norm examples") {
  const DirectionalNorms h = directional_norms(ModelMatrix::heisenberg(), 1.0);
  CHECK(h.dx == doctest::Approx(1.0));
  CHECK(h.dy == doctest::Approx(1.41421).epsilon(1e-5));
  CHECK(h.diagonal == doctest::Approx(2.23607).epsilon(1e-5));
  for (const ModelMatrix& A : {ModelMatrix::sol(), ModelMatrix(0.3, -0.7, 0.4, 0.9)}) {
    const DirectionalNorms z = directional_norms(A, 0.0);
    CHECK(z.dx == 1.0);
    CHECK(z.dy == 1.0);
    CHECK(z.diagonal == doctest::Approx(std::sqrt(2.0)));
  }
  const DirectionalNorms s = directional_norms(ModelMatrix::sol(), 1.0);
  CHECK(s.dx == doctest::Approx(std::sqrt(std::cosh(2.0))));
  CHECK(s.dy == doctest::Approx(std::sqrt(std::cosh(2.0))));
  CHECK(s.diagonal == doctest::Approx(3.84423).epsilon(1e-5));
}

TEST_CASE("triangle inequality for the norms") {
  for (const ModelMatrix& A : {ModelMatrix::heisenberg(), ModelMatrix::sol(), ModelMatrix::sol_family(2)}) {
    for (double z = -2; z <= 2; z += 0.125) {
      const DirectionalNorms n = directional_norms(A, z);
      if (z == 0) CHECK(n.diagonal <= n.dx + n.dy);
      else CHECK(n.diagonal < n.dx + n.dy);
    }
  }
}

TEST_CASE("doubly face examples") {
  const ModelMatrix H = ModelMatrix::heisenberg();
  CHECK(doubly_face_areas(H, {0.1, 1e-4, 1, 2}).area_a == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(doubly_face_areas(H, {1.0, 0.1, 1, 2}).area_e == doctest::Approx(0.7).epsilon(1e-14));
  // Constant integrands: a window of unit height gives the bare norms.
  const FaceAreaReport e = doubly_face_areas(ModelMatrix::euclidean(), {1.0, 0.1, 1, 2});
  CHECK(e.area_a == doctest::Approx(1.0));
  CHECK(e.area_b == doctest::Approx(1.0));
  CHECK(e.area_d == doctest::Approx(1.2 * std::sqrt(2.0)));
}

TEST_CASE("a_max examples") {
  CHECK(a_max_doubly(ModelMatrix::euclidean(), 0.5, 2.0) == doctest::Approx((2 - std::sqrt(2.0)) * 1.5));
  // Riemann-sum oracle for Sol.
  const ModelMatrix S = ModelMatrix::sol();
  const int n = 1000000;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    const DirectionalNorms d = directional_norms(S, 1.0 + (i + 0.5) / n);
    sum += d.dx + d.dy - d.diagonal;
  }
  const double a_max = a_max_doubly(S, 1, 2);
  CHECK(a_max > 0);
  CHECK(std::abs(a_max - sum / n) < 1e-5);
}

TEST_CASE("face areas agree with Riemann sums") {
  const ModelMatrix S = ModelMatrix::sol_family(2);
  const int n = 1000000;
  double ix = 0, iy = 0, id = 0;
  for (int i = 0; i < n; ++i) {
    const DirectionalNorms d = directional_norms(S, 1.0 + (i + 0.5) / n);
    ix += d.dx / n;
    iy += d.dy / n;
    id += d.diagonal / n;
  }
  const double a = 0.05, eps = 1e-4;
  const FaceAreaReport r = doubly_face_areas(S, {a, eps, 1, 2});
  CHECK(std::abs(r.area_a - a * ix) < 1e-5);
  CHECK(std::abs(r.area_b - a * iy) < 1e-5);
  CHECK(std::abs(r.area_c - 2 * eps * id) < 1e-5);
  CHECK(std::abs(r.area_d - (a + 2 * eps) * id) < 1e-5);
}

TEST_CASE("shape of the bounds in a") {
  // eps_max(a) = a (S - D - a) / (4 (a + D)) vanishes at both ends of
  // (0, a_max) and peaks at a* = sqrt(D S) - D.
  const ModelMatrix H = ModelMatrix::heisenberg();
  const NormIntegrals I = norm_integrals(H, 1, 2);
  const double S = I.ix + I.iy, D = I.idiag;
  const double peak = std::sqrt(D * S) - D;
  const double top = a_max_doubly(H, 1, 2);
  CHECK(peak > 0);
  CHECK(peak < top);
  double prev = 0;
  for (int k = 1; k < 50; ++k) {
    const double a = peak * k / 50;
    const double e = epsilon_max_doubly(H, a, 1, 2);
    CHECK(e > prev);
    prev = e;
  }
  prev = INFINITY;
  for (int k = 0; k < 50; ++k) {
    const double a = peak + (top - peak) * k / 50;
    const double e = epsilon_max_doubly(H, a, 1, 2);
    CHECK(e > 0);
    CHECK(e < prev);
    prev = e;
  }
  double last = -INFINITY;
  for (double a = 0.2; a < 0.75; a += 0.05) {
    const double d = d_min_singly(H, a, 0.1, 1.0);
    CHECK(d > last);
    last = d;
  }
}

TEST_CASE("singly face examples") {
  const FaceAreaReport h = singly_face_areas(ModelMatrix::heisenberg(), {0.5, 0.1, 3, 1});
  CHECK(h.area_a == doctest::Approx(2.9));
  CHECK(h.area_c == doctest::Approx(2.03));
  const FaceAreaReport e = singly_face_areas(ModelMatrix::euclidean(), {0.5, 0.1, 3, 1});
  CHECK(e.margin == doctest::Approx(0.34));
  const ModelMatrix H = ModelMatrix::heisenberg();
  const double d = d_min_singly(H, 0.5, 0.1, 1.0);
  CHECK(singly_face_areas(H, {0.5, 0.1, d + 0.1, 1.0}).margin > 0);
  CHECK(singly_face_areas(H, {0.5, 0.1, d - 0.1, 1.0}).margin < 0);
  for (double dd = 1.0; dd < 5.0; dd += 0.25) {
    const FaceAreaReport r = singly_face_areas(H, {0.5, 0.1, dd, 1.0});
    CHECK(r.satisfied == (r.margin > 0));
  }
}

TEST_CASE("patch area examples") {
  // Flat leaf rectangle at z = 5.
  DomainPolygon rect;
  rect.vertices = {{0, 0}, {1, 0}, {1, 2}, {0, 2}};
  rect.heights.assign(4, EdgeHeight::constant(5.0));
  for (const ModelMatrix& A : {ModelMatrix::heisenberg(), ModelMatrix::sol()}) {
    const GraphSurface s = initial_graph(triangulate(rect, 0.1), 5.0);
    CHECK(std::abs(patch_area(A, s) - 2.0) < 1e-10);
  }
  // The face E region in the leaf, area a(a + 4 eps)/2. Too skewed for the
  // quality mesher, so split it by hand.
  const double a = 1.0, eps = 0.1;
  GraphSurface fe;
  fe.mesh.vertices = {{eps, -eps}, {a + eps, -eps}, {-eps, a + eps}, {-eps, eps}};
  fe.mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
  fe.mesh.boundary.assign(4, true);
  fe.mesh.boundary_height.assign(4, 1.0);
  fe.heights.assign(4, 1.0);
  CHECK(std::abs(patch_area(ModelMatrix::heisenberg(), fe) - 0.7) < 1e-6);
  // Vertical strip with |d/dx| = 1.
  ImmersedMesh strip;
  const int n = 10;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) strip.vertices.emplace_back(0.1 * i / n, 0.0, 1.0 + double(j) / n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int v = i * (n + 1) + j;
      strip.triangles.push_back({v, v + n + 1, v + n + 2});
      strip.triangles.push_back({v, v + n + 2, v + 1});
    }
  }
  CHECK(std::abs(patch_area(ModelMatrix::heisenberg(), strip) - 0.1) < 1e-8);
}
