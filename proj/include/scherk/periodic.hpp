#pragma once

// Periodic surfaces assembled from a Plateau piece by pi-rotations about
// the geodesic lines in its boundary.

#include <vector>

#include "scherk/mesh.hpp"

namespace scherk {

/// A geodesic line about which the pi-rotation acts. The horizontal kinds
/// lie in the z = 0 leaf and are isometries only for antidiagonal A.
struct ReflectionAxis {
  enum class Kind { Vertical, HorizontalX, HorizontalY };
  Kind kind = Kind::Vertical;
  double x0 = 0.0, y0 = 0.0;

  static ReflectionAxis vertical(double x0, double y0) { return {Kind::Vertical, x0, y0}; }
  /// The line {(t, y0, 0)}.
  static ReflectionAxis horizontal_x(double y0) { return {Kind::HorizontalX, 0.0, y0}; }
  /// The line {(x0, t, 0)}.
  static ReflectionAxis horizontal_y(double x0) { return {Kind::HorizontalY, x0, 0.0}; }

  IsometryDescriptor isometry() const;
  double distance(const Vec3& p) const;  // coordinate distance to the line
  Vec3 project(const Vec3& p) const;
};

/// Union of m and its image under the rotation. Boundary vertices within
/// 1e-9 of the axis are snapped onto it and shared; image triangles have
/// reversed orientation. Throws InvalidForModel, or WeldFailure when no
/// boundary vertex lies on the axis.
ImmersedMesh reflect_mesh(const ModelMatrix& A, const ImmersedMesh& m,
                          const ReflectionAxis& axis);

/// One translate of the fundamental cell inside an assembly.
struct AssemblyCell {
  Vec3 offset = Vec3::Zero();  // horizontal position of the cell
  std::vector<int> vertices;
};

struct PeriodicAssembly {
  ImmersedMesh mesh;
  std::vector<Vec3> generators;
  int copies = 0;
  std::vector<AssemblyCell> cells;
  /// Vertices produced by welding that ended up interior to the assembly.
  std::vector<int> seam_vertices;
  /// Leg length a of the piece.
  double scale = 1.0;
};

/// Doubly periodic surface from a piece over the DoublyPc triangle
/// (0,0), (a,0), (0,a). The piece is rotated about both legs into a cell
/// over the square |x| + |y| <= a; cells sit at 2a(i, j) for a copies x
/// copies block, each the image of the first under a vertical rotation
/// about a(i, j). Generators (-2a, 2a, 0) and (2a, 2a, 0).
PeriodicAssembly build_doubly(const ModelMatrix& A, const GraphSurface& piece, int copies);

/// Singly periodic surface from a piece over the SinglyPc rectangle
/// [0, c] x [0, a]. The cell over [-c, c] x [-a, a] comes from rotations
/// about y = 0 and the vertical line through the origin; `copies` cells
/// are stacked along the generator (0, 2a, 0).
PeriodicAssembly build_singly(const ModelMatrix& A, const GraphSurface& piece, int copies);

/// Largest metric distance from a left-translated interior vertex of one
/// cell to the assembly. The cell is the most central one whose translate
/// is also in the assembly, or the most central cell if there is none.
double periodicity_defect(const ModelMatrix& A, const PeriodicAssembly& assembly,
                          const Vec3& t);

/// Largest discrete mean-curvature-vector magnitude over the seam vertices
/// whose xy distance to every boundary vertex of the assembly is at least
/// keep_out * scale. The boundary includes the collapsed vertical segments,
/// where the graph has a jump and the discrete curvature grows like 1/h.
double seam_curvature(const ModelMatrix& A, const PeriodicAssembly& assembly,
                      double keep_out = 0.1);

/// V - E + F of a triangle mesh.
int euler_characteristic(const ImmersedMesh& m);

/// True when every edge has one or two incident triangles.
bool edge_manifold(const ImmersedMesh& m);

}  // namespace scherk
