#pragma once

// Plain-text artifacts: OBJ-style meshes, CSV tables, key=value configs.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "scherk/mesh.hpp"

namespace scherk {

/// Writes "v x y z" and 1-based "f i j k" lines, 12 significant digits.
void write_mesh(const std::filesystem::path& path, const ImmersedMesh& m);
/// Reads the subset written by write_mesh; fixed flags mark boundary
/// vertices. Throws ParseError with the line number on malformed input.
ImmersedMesh read_mesh(const std::filesystem::path& path);

/// Formats with 12 significant digits.
std::string fmt(double v);

/// CSV with a header row; cells are written verbatim.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add(std::vector<std::string> row);
  void write(const std::filesystem::path& path) const;
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// The row "iterations, area, maxH, gradnorm, converged" of a report.
std::vector<std::string> report_cells(const SolveReport& r);

/// Flat key=value file. '#' starts a comment, blank lines are skipped,
/// keys must be lowercase. Throws ParseError.
std::map<std::string, std::string> read_config(const std::filesystem::path& path);
std::map<std::string, std::string> parse_config(const std::string& text);

/// One translation per line as three decimals.
void write_generators(const std::filesystem::path& path, const std::vector<Vec3>& gens);

}  // namespace scherk
