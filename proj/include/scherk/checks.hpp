#pragma once

// Reusable numerical checks: the geometry invariant suite and the Euclidean
// Scherk benchmark. Shared by the CLI and the acceptance runner.

#include <cstdint>
#include <string>
#include <vector>

#include "scherk/plateau.hpp"

namespace scherk {

struct Residual {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass() const { return value < threshold; }
};

/// Closed-form connection of the left-invariant frame,
/// result[i][j][k] = <nabla_{E_i} E_j, E_k>. Independent of z.
Christoffel connection_table(const ModelMatrix& A);

/// Frame orthonormality, det e^{zA} = e^{z tr A}, the connection table and
/// the pullback defect of every isometry valid for A, over n random points.
std::vector<Residual> geometry_suite(const ModelMatrix& A, int n_points = 100,
                                     std::uint64_t seed = 1);

/// u = log(cos x / cos y), a minimal graph of Euclidean space.
double scherk_height(double x, double y);

struct BenchmarkRow {
  double h = 0.0;
  std::size_t vertices = 0;
  int iterations = 0;
  bool converged = false;
  double sup_error = 0.0;
  double ratio = 0.0;  // previous error / this error; 0 on the first row
};

/// Solves the Euclidean graph problem on (-0.7, 0.7)^2 with Scherk boundary
/// data for each h and records the sup error at the vertices.
std::vector<BenchmarkRow> scherk_benchmark(const std::vector<double>& hs,
                                           const SolveOptions& opts = {});

}  // namespace scherk
