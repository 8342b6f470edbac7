#include "scherk/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace scherk {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_mesh(const std::filesystem::path& path, const ImmersedMesh& m) {
  std::ofstream out = open_out(path);
  for (const Vec3& p : m.vertices) out << "v " << fmt(p.x()) << ' ' << fmt(p.y()) << ' ' << fmt(p.z()) << '\n';
  for (const Tri& t : m.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

ImmersedMesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path.string());
  ImmersedMesh m;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ss(t);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      double x, y, z;
      if (!(ss >> x >> y >> z)) fail("bad vertex");
      m.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      Tri f;
      for (int& v : f) {
        std::string tok;
        if (!(ss >> tok)) fail("bad face");
        try {
          v = std::stoi(tok.substr(0, tok.find('/'))) - 1;
        } catch (const std::exception&) {
          fail("bad face index '" + tok + "'");
        }
      }
      m.triangles.push_back(f);
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  for (const Tri& f : m.triangles) {
    for (int v : f) {
      if (v < 0 || v >= static_cast<int>(m.vertices.size())) {
        throw Error(ErrorCode::ParseError, path.string() + ": face index out of range");
      }
    }
  }
  m.fixed = mesh_boundary_vertices(m.triangles, m.vertices.size());
  return m;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw Error(ErrorCode::InvalidConfig, "csv row width");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string s;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    s += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return s;
}

void CsvTable::write(const std::filesystem::path& path) const { open_out(path) << str(); }

std::vector<std::string> report_cells(const SolveReport& r) {
  return {std::to_string(r.iterations), fmt(r.area), fmt(r.max_mean_curvature),
          fmt(r.gradient_norm), r.converged ? "1" : "0"};
}

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": empty key");
    for (char ch : key) {
      if (std::isupper(static_cast<unsigned char>(ch))) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": keys are lowercase");
      }
    }
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void write_generators(const std::filesystem::path& path, const std::vector<Vec3>& gens) {
  std::ofstream out = open_out(path);
  for (const Vec3& g : gens) out << fmt(g.x()) << ' ' << fmt(g.y()) << ' ' << fmt(g.z()) << '\n';
}

}  // namespace scherk
