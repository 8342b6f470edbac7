#pragma once

// Planar domains, their triangulations, and the two surface
// representations used by the solvers: height fields over a triangulation
// (Pi-graphs) and free triangle meshes in group coordinates.

#include <array>
#include <cstddef>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "scherk/geometry.hpp"

namespace scherk {

using Point2 = Eigen::Vector2d;
using Tri = std::array<int, 3>;

/// Height prescribed on one polygon edge: constant, or linear in arclength
/// from `start` (at the edge's first vertex) to `end`.
struct EdgeHeight {
  double start = 0.0;
  double end = 0.0;

  static EdgeHeight constant(double h) { return {h, h}; }
  static EdgeHeight affine(double from, double to) { return {from, to}; }
  double at(double t) const { return start + t * (end - start); }
};

/// Closed polygon in the z = 0 leaf. Edge i runs from vertex i to i + 1.
struct DomainPolygon {
  std::vector<Point2> vertices;
  std::vector<EdgeHeight> heights;

  /// Validates simplicity, positive orientation and height count; throws
  /// InvalidConfig otherwise.
  void validate() const;
  double signed_area() const;
  bool convex() const;
};

struct DoublyPc {
  double a = 0, c = 0;
};
struct SinglyPc {
  double a = 0, c = 0;
};
using ContourSpec = std::variant<DoublyPc, SinglyPc, DomainPolygon>;

struct Triangulation {
  std::vector<Point2> vertices;
  std::vector<Tri> triangles;
  std::vector<bool> boundary;
  /// Prescribed heights; meaningful only where boundary[i] is true.
  std::vector<double> boundary_height;
  double h = 0.0;

  std::size_t size() const { return vertices.size(); }
  double min_angle_degrees() const;
  double max_edge_length() const;
};

/// Height field over a triangulation; heights[i] is u at vertex i.
struct GraphSurface {
  Triangulation mesh;
  std::vector<double> heights;
};

/// Triangle mesh with vertices in group coordinates.
struct ImmersedMesh {
  std::vector<Vec3> vertices;
  std::vector<Tri> triangles;
  std::vector<bool> fixed;
};

struct SolveReport {
  int iterations = 0;
  double area = 0.0;
  double max_mean_curvature = 0.0;
  double gradient_norm = 0.0;
  bool converged = false;
  /// Discrete area after each accepted descent step (first entry: initial).
  std::vector<double> energy_history;
};

DomainPolygon resolve_contour(const ContourSpec& spec);

/// Structured triangulation of a convex polygon with max edge <= 1.5 h.
/// Triangles and quadrilaterals are mapped grids; other convex polygons
/// are fanned from the centroid and each fan triangle subdivided.
/// Corner vertices whose two edges disagree get the mean height.
Triangulation triangulate(const DomainPolygon& domain, double h);

/// Overwrites the prescribed heights of boundary vertices with f(x, y).
template <class F>
void set_boundary_heights(Triangulation& tri, F&& f) {
  for (std::size_t i = 0; i < tri.size(); ++i) {
    if (tri.boundary[i]) tri.boundary_height[i] = f(tri.vertices[i].x(), tri.vertices[i].y());
  }
}

/// Graph with boundary heights set and interior initialized by `interior`.
GraphSurface initial_graph(const Triangulation& tri, double interior = 0.0);

ImmersedMesh graph_to_mesh(const GraphSurface& s);

/// Each undirected edge with its incident triangle count.
struct EdgeUse {
  int a = 0, b = 0;
  int count = 0;
};
std::vector<EdgeUse> edge_uses(const std::vector<Tri>& triangles);

/// Vertices lying on an edge used by exactly one triangle.
std::vector<bool> mesh_boundary_vertices(const std::vector<Tri>& triangles,
                                         std::size_t n_vertices);

}  // namespace scherk
