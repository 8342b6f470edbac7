#include "scherk/area.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "scherk/energy.hpp"

namespace scherk {

namespace {

template <class F>
double integrate(F&& f, double z0, double z1) {
  if (z0 == z1) return 0.0;
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, z0, z1, 20, 1e-14, &error);
  if (!std::isfinite(value)) throw Error(ErrorCode::NonFinite, "quadrature");
  return value;
}

void require_finite(std::initializer_list<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "non-finite parameter");
  }
}

void finish(FaceAreaReport& r) {
  r.margin = (r.area_a + r.area_b) - (r.area_c + r.area_d + r.area_e + r.area_f);
  r.satisfied = r.margin > 0.0;
}

}  // namespace

DirectionalNorms directional_norms(const ModelMatrix& A, double z) {
  require_finite({z});
  const Matrix2 g = metric_block(A, z);
  return {std::sqrt(g(0, 0)), std::sqrt(g(1, 1)),
          std::sqrt(g(0, 0) - 2.0 * g(0, 1) + g(1, 1))};
}

NormIntegrals norm_integrals(const ModelMatrix& A, double z0, double z1) {
  require_finite({z0, z1});
  return {integrate([&](double z) { return directional_norms(A, z).dx; }, z0, z1),
          integrate([&](double z) { return directional_norms(A, z).dy; }, z0, z1),
          integrate([&](double z) { return directional_norms(A, z).diagonal; }, z0, z1)};
}

void DoublyConfig::validate() const {
  require_finite({a, eps, c0, c1});
  if (!(a > 0.0) || !(eps > 0.0) || !(c0 > 0.0) || !(c0 < c1)) {
    throw Error(ErrorCode::InvalidConfig, "doubly config needs a, eps > 0 and 0 < c0 < c1");
  }
}

void SinglyConfig::validate() const {
  require_finite({a, eps, d, c0});
  if (!(eps > 0.0) || !(eps < a) || !(d > eps) || !(c0 > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "singly config needs 0 < eps < a, d > eps, c0 > 0");
  }
}

FaceAreaReport doubly_face_areas(const ModelMatrix& A, const DoublyConfig& cfg) {
  cfg.validate();
  const NormIntegrals I = norm_integrals(A, cfg.c0, cfg.c1);
  const double leaf = cfg.a * (cfg.a + 4.0 * cfg.eps) / 2.0;
  FaceAreaReport r;
  r.area_a = cfg.a * I.ix;
  r.area_b = cfg.a * I.iy;
  r.area_c = 2.0 * cfg.eps * I.idiag;
  r.area_d = (cfg.a + 2.0 * cfg.eps) * I.idiag;
  // Leaves are flat with area element e^{-z tr A}.
  r.area_e = leaf * std::exp(-cfg.c0 * A.trace());
  r.area_f = leaf * std::exp(-cfg.c1 * A.trace());
  finish(r);
  return r;
}

FaceAreaReport singly_face_areas(const ModelMatrix& A, const SinglyConfig& cfg) {
  cfg.validate();
  const NormIntegrals I = norm_integrals(A, 0.0, cfg.c0);
  const double length = cfg.d - cfg.eps;
  const double width = cfg.a + 2.0 * cfg.eps;
  FaceAreaReport r;
  r.area_a = length * I.ix;
  r.area_b = length * I.ix;
  r.area_c = length * width;
  r.area_d = length * width * std::exp(-cfg.c0 * A.trace());
  r.area_e = width * I.iy;
  r.area_f = width * I.iy;
  finish(r);
  return r;
}

double a_max_doubly(const ModelMatrix& A, double c0, double c1) {
  require_finite({c0, c1});
  if (!(c0 >= 0.0) || !(c0 < c1)) {
    throw Error(ErrorCode::InvalidConfig, "a_max needs 0 <= c0 < c1");
  }
  const NormIntegrals I = norm_integrals(A, c0, c1);
  return I.ix + I.iy - I.idiag;
}

double epsilon_max_doubly(const ModelMatrix& A, double a, double c0, double c1) {
  const double bound = a_max_doubly(A, c0, c1);
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidConfig, "a must be positive");
  if (a >= bound) {
    throw Error(ErrorCode::AExceedsBound,
                "a = " + std::to_string(a) + " >= a_max = " + std::to_string(bound));
  }
  const NormIntegrals I = norm_integrals(A, c0, c1);
  return a / 4.0 * (I.ix + I.iy) / (a + I.idiag) - a / 4.0;
}

double epsilon_max_doubly_repeated_dx(const ModelMatrix& A, double a, double c0,
                                      double c1) {
  const NormIntegrals I = norm_integrals(A, c0, c1);
  return a / 4.0 * (2.0 * I.ix) / (a + I.idiag) - a / 4.0;
}

double d_min_singly(const ModelMatrix& A, double a, double eps, double c0) {
  require_finite({a, eps, c0});
  if (!(c0 > 0.0) || !(eps > 0.0) || !(eps < a)) {
    throw Error(ErrorCode::InvalidConfig, "d_min needs 0 < eps < a and c0 > 0");
  }
  const NormIntegrals I = norm_integrals(A, 0.0, c0);
  const double width = a + 2.0 * eps;
  if (width >= I.ix) {
    throw Error(ErrorCode::AssumptionViolated,
                "a + 2 eps = " + std::to_string(width) +
                    " >= int |d/dx| = " + std::to_string(I.ix));
  }
  return eps - width * I.iy / (width - I.ix);
}

double patch_area(const ModelMatrix& A, const GraphSurface& surface) {
  const std::vector<double> areas =
      graph_triangle_areas(A, surface.mesh, surface.heights);
  for (double a : areas) {
    if (!(a > 0.0)) throw Error(ErrorCode::DegenerateTriangle, "zero area element");
  }
  return pairwise_sum(areas);
}

double patch_area(const ModelMatrix& A, const ImmersedMesh& surface) {
  const std::vector<double> areas = mesh_triangle_areas(A, surface);
  for (double a : areas) {
    if (!(a > 0.0)) throw Error(ErrorCode::DegenerateTriangle, "zero area element");
  }
  return pairwise_sum(areas);
}

}  // namespace scherk
