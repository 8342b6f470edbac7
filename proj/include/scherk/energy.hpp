#pragma once

// Discrete area functionals. Every triangle uses one-point quadrature: the
// metric is frozen at the centroid, lifted to the piecewise-linear height.

#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "scherk/mesh.hpp"

namespace scherk {

/// Deterministic pairwise summation.
double pairwise_sum(std::span<const double> values);

struct GraphEnergy {
  double area = 0.0;
  std::vector<double> gradient;  // d area / d u_i, all vertices
};

/// Area of the graph of `heights` over `tri`; gradient is filled when
/// `with_gradient` is set.
GraphEnergy graph_energy(const ModelMatrix& A, const Triangulation& tri,
                         std::span<const double> heights, bool with_gradient);

/// Per-triangle area elements of a graph, in triangle order.
std::vector<double> graph_triangle_areas(const ModelMatrix& A,
                                         const Triangulation& tri,
                                         std::span<const double> heights);

/// Lagged-diffusivity stiffness: sum over triangles of
/// |T| grad(phi)^T (adj g / S) grad(phi). SPD on the interior unknowns and
/// an upper bound for the leading part of the area Hessian.
Eigen::SparseMatrix<double> graph_stiffness(const ModelMatrix& A,
                                            const Triangulation& tri,
                                            std::span<const double> heights);

struct MeshEnergy {
  double area = 0.0;
  double min_triangle_area = 0.0;
  std::vector<Vec3> gradient;  // covector d area / d X_v
};

MeshEnergy mesh_energy(const ModelMatrix& A, const ImmersedMesh& m,
                       bool with_gradient);

std::vector<double> mesh_triangle_areas(const ModelMatrix& A,
                                        const ImmersedMesh& m);

struct VertexValue {
  int vertex = 0;
  double value = 0.0;
};

/// Mean curvature of a graph at each interior vertex with respect to the
/// upward normal: -dA/du_i / (2 * lumped area * <N, E3>).
std::vector<VertexValue> mean_curvature_graph(const ModelMatrix& A,
                                              const GraphSurface& s);

double max_abs(const std::vector<VertexValue>& values);

/// Magnitude of the discrete mean curvature vector, |dA/dX_v|_{g^-1} divided
/// by twice the lumped vertex area, for every vertex (boundary included).
std::vector<double> mesh_mean_curvature(const ModelMatrix& A,
                                        const ImmersedMesh& m);

/// Flux of X through the boundary of a graph: sum of <dA/dX_v, X> over
/// boundary vertices and their one-ring neighbours. Equals the conormal
/// integral up to O(h) collar terms.
double flux(const ModelMatrix& A, const GraphSurface& s, const KillingField& X);

/// Boundary integral of <nu, X> with nu the outward conormal of each
/// boundary triangle, metric at the edge midpoint.
double flux(const ModelMatrix& A, const ImmersedMesh& m, const KillingField& X);

}  // namespace scherk
