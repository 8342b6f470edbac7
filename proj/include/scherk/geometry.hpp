#pragma once

// Geometry of the metric semidirect product R^2 x_A R with its canonical
// left-invariant metric. Coordinates are (x, y, z); the group law is
//   (p1, z1) * (p2, z2) = (p1 + e^{z1 A} p2, z1 + z2).

#include <array>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "scherk/error.hpp"

namespace scherk {

using Matrix2 = Eigen::Matrix2d;
using Matrix3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

/// The 2x2 matrix A defining the product. `antidiagonal` is derived, not
/// user-settable, so it can never disagree with the entries.
class ModelMatrix {
 public:
  ModelMatrix() = default;
  ModelMatrix(double a, double b, double c, double d);

  static ModelMatrix euclidean() { return {0, 0, 0, 0}; }
  static ModelMatrix heisenberg() { return {0, 1, 0, 0}; }
  static ModelMatrix sol() { return {0, 1, 1, 0}; }
  /// A(v) = (0 v; 1/v 0), the Sol_3 family; requires v >= 1.
  static ModelMatrix sol_family(double v);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  bool antidiagonal() const { return a_ == 0.0 && d_ == 0.0; }
  double trace() const { return a_ + d_; }
  Matrix2 matrix() const;

 private:
  double a_ = 0, b_ = 0, c_ = 0, d_ = 0;
};

struct GroupPoint {
  double x = 0, y = 0, z = 0;

  Vec3 vec() const { return {x, y, z}; }
  static GroupPoint from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
  bool finite() const;
};

/// Coordinate-frame components (d/dx, d/dy, d/dz) at a base point.
struct TangentVec {
  GroupPoint base;
  double vx = 0, vy = 0, vz = 0;

  Vec3 vec() const { return {vx, vy, vz}; }
};

/// Symmetric positive definite 3x3 coordinate metric at a point.
struct MetricTensor {
  Matrix3 g;

  double inner(const Vec3& u, const Vec3& v) const { return u.dot(g * v); }
  double norm(const Vec3& u) const;
};

struct FrameTriple {
  TangentVec e1, e2, e3;
};

struct LeftTranslation {
  GroupPoint by;
};
/// pi-rotation about the vertical geodesic through (x0, y0).
struct VerticalRotation {
  double x0 = 0, y0 = 0;
};
/// pi-rotation about {(x0, t, 0)}; an isometry only for antidiagonal A.
struct HorizontalRotationParallelY {
  double x0 = 0;
};
/// pi-rotation about {(t, y0, 0)}; an isometry only for antidiagonal A.
struct HorizontalRotationParallelX {
  double y0 = 0;
};

using IsometryDescriptor =
    std::variant<LeftTranslation, VerticalRotation,
                 HorizontalRotationParallelY, HorizontalRotationParallelX>;

bool requires_antidiagonal(const IsometryDescriptor& iso);

/// The field cx d/dx + cy d/dy (right-invariant, hence Killing).
struct KillingField {
  double cx = 1, cy = 0;

  KillingField(double cx_, double cy_);
  Vec3 vec() const { return {cx, cy, 0.0}; }
};

struct IsometryImage {
  GroupPoint point;
  Matrix3 differential;
};

/// Christoffel symbols Gamma^k_{ij}, indexed [k][i][j] over (x, y, z).
using Christoffel = std::array<std::array<std::array<double, 3>, 3>, 3>;

/// e^{zA}. Antidiagonal A uses the closed forms (cosh/sinh, polynomial,
/// cos/sin by the sign of bc); other matrices use scaling and squaring.
Matrix2 exp_at(const ModelMatrix& A, double z);

/// d/dz e^{zA} = A e^{zA}.
Matrix2 exp_derivative_at(const ModelMatrix& A, double z);

GroupPoint group_multiply(const ModelMatrix& A, const GroupPoint& g1,
                          const GroupPoint& g2);

/// Horizontal 2x2 block of the metric. The full tensor is
/// diag(block, 1) since dz is orthonormal to the leaf directions.
Matrix2 metric_block(const ModelMatrix& A, double z);
/// z-derivative of metric_block.
Matrix2 metric_block_derivative(const ModelMatrix& A, double z);

MetricTensor metric_at(const ModelMatrix& A, const GroupPoint& p);

FrameTriple left_frame(const ModelMatrix& A, const GroupPoint& p);

Christoffel christoffel_at(const ModelMatrix& A, const GroupPoint& p);

/// Connection coefficients in the left-invariant frame:
/// result[i][j][k] = <nabla_{E_i} E_j, E_k>, indices 0-based.
Christoffel frame_connection(const ModelMatrix& A, const GroupPoint& p);

/// Classical RK4 integration of the geodesic equation with n fixed steps
/// over [0, T]. Returns n + 1 points including p0.
std::vector<GroupPoint> geodesic(const ModelMatrix& A, const GroupPoint& p0,
                                 const TangentVec& v0, double T, int n);

/// Same integration, but also returns the velocities (for speed checks).
struct GeodesicSample {
  GroupPoint point;
  Vec3 velocity;
};
std::vector<GeodesicSample> geodesic_with_velocity(const ModelMatrix& A,
                                                   const GroupPoint& p0,
                                                   const TangentVec& v0,
                                                   double T, int n);

/// Applies the affine map of `iso`; horizontal rotations throw
/// InvalidForModel unless A is antidiagonal.
IsometryImage apply_isometry(const ModelMatrix& A,
                             const IsometryDescriptor& iso,
                             const GroupPoint& p);

/// The raw affine map with no model check.
IsometryImage map_unchecked(const ModelMatrix& A,
                            const IsometryDescriptor& iso,
                            const GroupPoint& p);

/// Max over random samples of |g_{phi(p)}(dphi u, dphi v) - g_p(u, v)| for
/// unit u, v. Uses the raw map, so invalid descriptors report their defect.
double verify_isometry(const ModelMatrix& A, const IsometryDescriptor& iso,
                       int n_samples);

}  // namespace scherk
