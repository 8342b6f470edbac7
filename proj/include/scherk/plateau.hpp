#pragma once

// Discrete least-area solvers: height fields over a fixed triangulation and
// free meshes with fixed boundary.

#include <optional>
#include <vector>

#include "scherk/area.hpp"
#include "scherk/mesh.hpp"

namespace scherk {

struct SolveOptions {
  double tol = 1e-8;    ///< sup norm of the energy gradient
  int max_iters = 0;    ///< 0 means 200 * vertex count
  int smoothing_every = 10;
  double pinch_area = 1e-10;
  /// Mesh solves also stop once the smallest area element drops below this
  /// fraction of its initial value.
  double pinch_ratio = 1e-2;
};

struct GraphSolution {
  GraphSurface surface;
  SolveReport report;
};

struct MeshSolution {
  ImmersedMesh mesh;
  SolveReport report;
};

/// Minimizes the discrete graph area with the boundary heights of `tri`
/// held fixed. Starts from the harmonic extension of the boundary data.
/// Nonconvergence is reported through report.converged, not thrown.
GraphSolution solve_graph(const ModelMatrix& A, const Triangulation& tri,
                          const SolveOptions& opts = {});

/// Same, warm-started from `init` (its boundary heights are reset).
GraphSolution solve_graph(const ModelMatrix& A, GraphSurface init,
                          const SolveOptions& opts = {});

/// Minimizes the metric area over the non-fixed vertices. Throws
/// PinchDetected when the smallest triangle area element falls below
/// max(opts.pinch_area, opts.pinch_ratio * initial smallest); nonconvergence
/// is reported, not thrown.
MeshSolution solve_mesh(const ModelMatrix& A, ImmersedMesh init,
                        const SolveOptions& opts = {});

/// Piecewise-linear evaluation of a graph; nullopt outside the domain.
class GraphSampler {
 public:
  explicit GraphSampler(const GraphSurface& s);
  std::optional<double> operator()(const Point2& q) const;

 private:
  const GraphSurface* s_;
  Point2 lo_;
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

enum class Construction { Doubly, Singly };

struct SequenceReport {
  std::vector<double> c_list;
  std::vector<GraphSurface> surfaces;
  std::vector<SolveReport> reports;
  std::vector<Point2> samples;
  /// differences[k][j] = u_{k+1}(q_j) - u_k(q_j)
  std::vector<std::vector<double>> differences;
  double min_difference = 0.0;
  bool monotone = false;
  /// Heights at the probe point and |u_{k+1} - u_k| there.
  Point2 probe = Point2::Zero();
  std::vector<double> probe_heights;
  std::vector<double> cauchy;
  bool cauchy_decreasing = false;
};

/// Solves the contour of `kind` for each c and compares consecutive
/// solutions on the interior vertices of the first mesh (or on `samples`
/// when given). Monotone means every difference is >= -1e-9. The probe
/// defaults to the centroid of the first domain.
SequenceReport solve_sequence(const ModelMatrix& A, Construction kind, double a,
                              const std::vector<double>& c_list, double h,
                              const SolveOptions& opts = {}, int jobs = 1,
                              const std::vector<Point2>& samples = {},
                              std::optional<Point2> probe = std::nullopt);

/// Side surface C, D, E, F of the doubly comparison box as a tube between
/// the boundaries of faces A and B, with n_around segments along each loop
/// and n_across segments between them.
ImmersedMesh annulus_initial_mesh(const DoublyConfig& cfg, int n_around, int n_across);

/// Cylinder of radius r between the circles at z = z0 and z = z1, with the
/// two circles fixed.
ImmersedMesh cylinder_mesh(double r, double z0, double z1, int n_around, int n_across);

}  // namespace scherk
