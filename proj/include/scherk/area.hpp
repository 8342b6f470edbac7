#pragma once

// Face areas of the comparison parallelepipeds and the Douglas-criterion
// bounds derived from them.

#include <string>
#include <variant>

#include "scherk/geometry.hpp"
#include "scherk/mesh.hpp"

namespace scherk {

/// Metric lengths of the coordinate directions at height z.
struct DirectionalNorms {
  double dx = 0;  ///< |d/dx|
  double dy = 0;  ///< |d/dy|
  /// |d/dx - d/dy|, the horizontal tangent of the diagonal faces C and D.
  /// For antidiagonal A this is sqrt((a11 + a12)^2 + (a11 + a21)^2).
  double diagonal = 0;
};

DirectionalNorms directional_norms(const ModelMatrix& A, double z);

/// z-integrals of the three norms over [z0, z1], adaptive Gauss-Kronrod.
struct NormIntegrals {
  double ix = 0, iy = 0, idiag = 0;
};
NormIntegrals norm_integrals(const ModelMatrix& A, double z0, double z1);

struct DoublyConfig {
  double a = 0, eps = 0, c0 = 0, c1 = 0;
  void validate() const;
};

struct SinglyConfig {
  double a = 0, eps = 0, d = 0, c0 = 0;
  void validate() const;
};

struct FaceAreaReport {
  double area_a = 0, area_b = 0, area_c = 0, area_d = 0, area_e = 0, area_f = 0;
  double margin = 0;
  bool satisfied = false;
};

FaceAreaReport doubly_face_areas(const ModelMatrix& A, const DoublyConfig& cfg);
FaceAreaReport singly_face_areas(const ModelMatrix& A, const SinglyConfig& cfg);

/// Supremum of admissible side lengths a for the doubly construction.
/// Accepts 0 <= c0 < c1.
double a_max_doubly(const ModelMatrix& A, double c0, double c1);

/// Supremum of admissible eps for the doubly construction; throws
/// AExceedsBound when a >= a_max_doubly.
double epsilon_max_doubly(const ModelMatrix& A, double a, double c0, double c1);

/// Same bound with |d/dx| doubled in the numerator instead of |d/dx| + |d/dy|,
/// kept for comparison with the alternative reading of the bound.
double epsilon_max_doubly_repeated_dx(const ModelMatrix& A, double a, double c0,
                                      double c1);

/// Infimum of admissible d for the singly construction; throws
/// AssumptionViolated unless a + 2 eps < int_0^c0 |d/dx| dz.
double d_min_singly(const ModelMatrix& A, double a, double eps, double c0);

double patch_area(const ModelMatrix& A, const GraphSurface& surface);
double patch_area(const ModelMatrix& A, const ImmersedMesh& surface);

}  // namespace scherk
