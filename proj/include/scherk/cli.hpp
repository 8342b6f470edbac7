#pragma once

// Command-line front end shared by tools/scherk and the tests.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scherk/plateau.hpp"

namespace scherk {

enum ExitCode {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitParse = 2,
  kExitDouglas = 3,
  kExitNoConvergence = 4,
  kExitBuild = 5,
};

struct RunConfig {
  std::string model_name = "heisenberg";
  ModelMatrix model = ModelMatrix::heisenberg();
  Construction kind = Construction::Doubly;
  double a = 0.1;
  std::optional<double> eps;
  double c0 = 1.0, c1 = 2.0;
  std::optional<double> d;
  double c = 2.0;
  std::vector<double> c_list;
  double h = 0.01;
  double tol = 1e-8;
  int copies = 2;
  std::string out = "out";
  int jobs = 1;
  bool scherk_benchmark = false;
  std::string piece;  // mesh written by a previous solve
};

/// "heisenberg", "sol", "euclidean", "solc:<v>" or four comma-separated
/// reals. Throws ParseError.
ModelMatrix parse_model(const std::string& text);

/// Runs one subcommand; returns the process exit code. Output goes to
/// `out` and `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scherk
