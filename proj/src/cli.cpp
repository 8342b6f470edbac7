#include "scherk/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "scherk/area.hpp"
#include "scherk/checks.hpp"
#include "scherk/energy.hpp"
#include "scherk/io.hpp"
#include "scherk/periodic.hpp"

namespace scherk {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

double parse_real(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    parse_fail(key + ": not a number '" + text + "'");
  }
  if (used != text.size()) parse_fail(key + ": trailing characters in '" + text + "'");
  if (!std::isfinite(v)) parse_fail(key + ": not finite");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_real(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) parse_fail(key + ": not an integer");
  return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
  if (out.empty()) parse_fail(key + ": empty list");
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true") return true;
  if (text == "0" || text == "false") return false;
  parse_fail(key + ": expected true or false");
}

void require_positive(const std::string& key, double v) {
  if (!(v > 0.0)) parse_fail(key + " must be positive");
}

RunConfig resolve(const std::map<std::string, std::string>& kv) {
  RunConfig cfg;
  for (const auto& [key, value] : kv) {
    if (key == "model") {
      cfg.model_name = value;
      cfg.model = parse_model(value);
    } else if (key == "kind") {
      if (value == "doubly") cfg.kind = Construction::Doubly;
      else if (value == "singly") cfg.kind = Construction::Singly;
      else parse_fail("kind must be doubly or singly");
    } else if (key == "a") {
      cfg.a = parse_real(key, value);
    } else if (key == "eps") {
      cfg.eps = parse_real(key, value);
    } else if (key == "c0") {
      cfg.c0 = parse_real(key, value);
    } else if (key == "c1") {
      cfg.c1 = parse_real(key, value);
    } else if (key == "d") {
      cfg.d = parse_real(key, value);
    } else if (key == "c") {
      cfg.c = parse_real(key, value);
    } else if (key == "c_list") {
      cfg.c_list = parse_list(key, value);
    } else if (key == "h") {
      cfg.h = parse_real(key, value);
    } else if (key == "tol") {
      cfg.tol = parse_real(key, value);
    } else if (key == "copies") {
      cfg.copies = parse_int(key, value);
    } else if (key == "out") {
      if (value.empty()) parse_fail("out must not be empty");
      cfg.out = value;
    } else if (key == "jobs") {
      cfg.jobs = parse_int(key, value);
    } else if (key == "scherk_benchmark") {
      cfg.scherk_benchmark = parse_bool(key, value);
    } else if (key == "piece") {
      cfg.piece = value;
    } else {
      parse_fail("unknown key '" + key + "'");
    }
  }
  require_positive("a", cfg.a);
  require_positive("c", cfg.c);
  require_positive("h", cfg.h);
  require_positive("tol", cfg.tol);
  if (cfg.eps) require_positive("eps", *cfg.eps);
  if (cfg.d) require_positive("d", *cfg.d);
  if (!(cfg.c0 >= 0.0) || !(cfg.c1 > cfg.c0)) parse_fail("need 0 <= c0 < c1");
  if (cfg.copies < 1 || cfg.copies > 6) parse_fail("copies must be in 1..6");
  if (cfg.jobs < 1) parse_fail("jobs must be >= 1");
  for (std::size_t k = 0; k < cfg.c_list.size(); ++k) {
    require_positive("c_list", cfg.c_list[k]);
    if (k && !(cfg.c_list[k] > cfg.c_list[k - 1])) parse_fail("c_list must be increasing");
  }
  return cfg;
}

std::string kind_name(Construction k) { return k == Construction::Doubly ? "doubly" : "singly"; }

nlohmann::ordered_json echo(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["model"] = cfg.model_name;
  j["matrix"] = {cfg.model.a(), cfg.model.b(), cfg.model.c(), cfg.model.d()};
  j["kind"] = kind_name(cfg.kind);
  j["a"] = cfg.a;
  j["eps"] = cfg.eps ? nlohmann::ordered_json(*cfg.eps) : nlohmann::ordered_json(nullptr);
  j["c0"] = cfg.c0;
  j["c1"] = cfg.c1;
  j["d"] = cfg.d ? nlohmann::ordered_json(*cfg.d) : nlohmann::ordered_json(nullptr);
  j["c"] = cfg.c;
  j["c_list"] = cfg.c_list;
  j["h"] = cfg.h;
  j["tol"] = cfg.tol;
  j["copies"] = cfg.copies;
  j["out"] = cfg.out;
  j["jobs"] = cfg.jobs;
  j["scherk_benchmark"] = cfg.scherk_benchmark;
  j["piece"] = cfg.piece;
  return j;
}

// Collects artifacts and step timings, then writes manifest.json.
class Run {
 public:
  Run(const RunConfig& cfg, std::string command, std::ostream& out)
      : dir_(cfg.out), out_(out) {
    manifest_["command"] = std::move(command);
    manifest_["config"] = echo(cfg);
    manifest_["files"] = nlohmann::ordered_json::array();
    manifest_["steps"] = nlohmann::ordered_json::array();
    fs::create_directories(dir_);
  }

  template <class F>
  void step(const std::string& name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string status = "ok";
    try {
      f();
    } catch (...) {
      status = "error";
      record(name, status, t0);
      throw;
    }
    record(name, status, t0);
  }

  fs::path file(const std::string& name) {
    manifest_["files"].push_back(name);
    return dir_ / name;
  }

  void line(const std::string& s) { out_ << s << '\n'; }

  int finish(int code) {
    manifest_["exit_code"] = code;
    const fs::path path = dir_ / "manifest.json";
    std::ofstream(path) << manifest_.dump(2) << '\n';
    return code;
  }

 private:
  void record(const std::string& name, const std::string& status,
              std::chrono::steady_clock::time_point t0) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest_["steps"].push_back({{"name", name}, {"status", status}, {"seconds", secs}});
  }

  fs::path dir_;
  std::ostream& out_;
  nlohmann::ordered_json manifest_;
};

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions o;
  o.tol = cfg.tol;
  return o;
}

ContourSpec contour(const RunConfig& cfg, double c) {
  if (cfg.kind == Construction::Doubly) return DoublyPc{cfg.a, c};
  return SinglyPc{cfg.a, c};
}

int cmd_check_geometry(const RunConfig& cfg, Run& run) {
  std::vector<Residual> rs;
  run.step("geometry_suite", [&] { rs = geometry_suite(cfg.model); });
  CsvTable t({"check", "residual", "threshold", "pass"});
  bool ok = true;
  for (const Residual& r : rs) {
    t.add({r.name, fmt(r.value), fmt(r.threshold), r.pass() ? "1" : "0"});
    run.line(r.name + " " + fmt(r.value) + (r.pass() ? " ok" : " FAIL"));
    ok = ok && r.pass();
  }
  t.write(run.file("geometry.csv"));
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_douglas(const RunConfig& cfg, Run& run) {
  const ModelMatrix& A = cfg.model;
  CsvTable t({"quantity", "value"});
  auto faces = [&](const FaceAreaReport& r) {
    t.add({"area_a", fmt(r.area_a)});
    t.add({"area_b", fmt(r.area_b)});
    t.add({"area_c", fmt(r.area_c)});
    t.add({"area_d", fmt(r.area_d)});
    t.add({"area_e", fmt(r.area_e)});
    t.add({"area_f", fmt(r.area_f)});
    t.add({"margin", fmt(r.margin)});
    t.add({"satisfied", r.satisfied ? "1" : "0"});
    run.line("margin = " + fmt(r.margin) + (r.satisfied ? " (criterion holds)" : " (criterion fails)"));
  };
  int code = kExitOk;
  run.step("douglas", [&] {
    if (cfg.kind == Construction::Doubly) {
      const double a_max = a_max_doubly(A, cfg.c0, cfg.c1);
      t.add({"a_max", fmt(a_max)});
      run.line("a_max = " + fmt(a_max));
      if (cfg.a >= a_max) {
        run.line("a = " + fmt(cfg.a) + " is not below a_max = " + fmt(a_max));
        code = kExitDouglas;
        return;
      }
      const double eps_max = epsilon_max_doubly(A, cfg.a, cfg.c0, cfg.c1);
      const double eps = cfg.eps.value_or(0.5 * eps_max);
      t.add({"eps_max", fmt(eps_max)});
      t.add({"eps", fmt(eps)});
      run.line("eps_max = " + fmt(eps_max));
      if (!(cfg.c0 > 0.0)) {
        run.line("faces need c0 > 0; skipped");
        return;
      }
      const FaceAreaReport r = doubly_face_areas(A, {cfg.a, eps, cfg.c0, cfg.c1});
      faces(r);
      if (!r.satisfied) code = kExitCheckFailed;
    } else {
      if (!cfg.eps) parse_fail("singly douglas needs --eps");
      const NormIntegrals I = norm_integrals(A, 0.0, cfg.c0);
      t.add({"ix", fmt(I.ix)});
      const double width = cfg.a + 2.0 * *cfg.eps;
      if (width >= I.ix) {
        run.line("a + 2 eps = " + fmt(width) + " is not below int |d/dx| = " + fmt(I.ix));
        code = kExitDouglas;
        return;
      }
      const double d_min = d_min_singly(A, cfg.a, *cfg.eps, cfg.c0);
      t.add({"d_min", fmt(d_min)});
      run.line("d_min = " + fmt(d_min));
      if (cfg.d) {
        const FaceAreaReport r = singly_face_areas(A, {cfg.a, *cfg.eps, *cfg.d, cfg.c0});
        faces(r);
        if (!r.satisfied) code = kExitCheckFailed;
      }
    }
  });
  t.write(run.file("douglas.csv"));
  return code;
}

struct Piece {
  GraphSurface surface;
  SolveReport report;
};

Piece solve_piece(const RunConfig& cfg, Run& run) {
  Piece p;
  run.step("solve", [&] {
    const Triangulation tri = triangulate(resolve_contour(contour(cfg, cfg.c)), cfg.h);
    GraphSolution sol = solve_graph(cfg.model, tri, solve_options(cfg));
    p.surface = std::move(sol.surface);
    p.report = std::move(sol.report);
  });
  return p;
}

int cmd_benchmark(const RunConfig& cfg, Run& run) {
  std::vector<BenchmarkRow> rows;
  run.step("scherk_benchmark", [&] { rows = scherk_benchmark({0.04, 0.02, 0.01}, solve_options(cfg)); });
  CsvTable t({"h", "vertices", "iterations", "converged", "sup_error", "ratio"});
  bool converged = true, ok = true;
  for (const BenchmarkRow& r : rows) {
    t.add({fmt(r.h), std::to_string(r.vertices), std::to_string(r.iterations),
           r.converged ? "1" : "0", fmt(r.sup_error), fmt(r.ratio)});
    run.line("h = " + fmt(r.h) + " error = " + fmt(r.sup_error) + " ratio = " + fmt(r.ratio));
    converged = converged && r.converged;
    if (r.ratio != 0.0) ok = ok && r.ratio >= 3.0 && r.ratio <= 5.0;
  }
  t.write(run.file("benchmark.csv"));
  if (!converged) return kExitNoConvergence;
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_sequence(const RunConfig& cfg, Run& run) {
  SequenceReport rep;
  run.step("solve_sequence", [&] {
    rep = solve_sequence(cfg.model, cfg.kind, cfg.a, cfg.c_list, cfg.h, solve_options(cfg), cfg.jobs);
  });
  CsvTable solves({"c", "iterations", "area", "max_mean_curvature", "gradient_norm", "converged",
                   "probe_height"});
  bool converged = true;
  for (std::size_t k = 0; k < rep.c_list.size(); ++k) {
    std::vector<std::string> row = {fmt(rep.c_list[k])};
    for (std::string& s : report_cells(rep.reports[k])) row.push_back(std::move(s));
    row.push_back(fmt(rep.probe_heights[k]));
    solves.add(std::move(row));
    converged = converged && rep.reports[k].converged;
  }
  CsvTable mono({"c_from", "c_to", "min_difference", "max_difference", "cauchy"});
  for (std::size_t k = 0; k + 1 < rep.c_list.size(); ++k) {
    const auto& diff = rep.differences[k];
    const auto [lo, hi] = std::minmax_element(diff.begin(), diff.end());
    mono.add({fmt(rep.c_list[k]), fmt(rep.c_list[k + 1]), fmt(diff.empty() ? 0.0 : *lo),
              fmt(diff.empty() ? 0.0 : *hi), fmt(rep.cauchy[k])});
  }
  solves.write(run.file("sequence.csv"));
  mono.write(run.file("monotonicity.csv"));
  run.line("min difference = " + fmt(rep.min_difference) +
           (rep.monotone ? " (monotone)" : " (not monotone)"));
  run.line(std::string("cauchy differences ") + (rep.cauchy_decreasing ? "decrease" : "do not decrease"));
  if (!converged) return kExitNoConvergence;
  return rep.monotone ? kExitOk : kExitCheckFailed;
}

int cmd_solve(const RunConfig& cfg, Run& run) {
  if (cfg.scherk_benchmark) return cmd_benchmark(cfg, run);
  if (!cfg.c_list.empty()) return cmd_sequence(cfg, run);
  const Piece p = solve_piece(cfg, run);
  const auto [lo, hi] = std::minmax_element(p.surface.heights.begin(), p.surface.heights.end());
  const double fx = flux(cfg.model, p.surface, KillingField(1.0, 0.0));
  const double fxy = flux(cfg.model, p.surface, KillingField(1.0, 1.0));
  write_mesh(run.file("piece.obj"), graph_to_mesh(p.surface));
  CsvTable t({"iterations", "area", "max_mean_curvature", "gradient_norm", "converged",
              "flux_x", "flux_xy", "min_height", "max_height"});
  std::vector<std::string> row = report_cells(p.report);
  for (double v : {fx, fxy, *lo, *hi}) row.push_back(fmt(v));
  t.add(std::move(row));
  t.write(run.file("report.csv"));
  run.line("iterations = " + std::to_string(p.report.iterations) + " maxH = " +
           fmt(p.report.max_mean_curvature) + " flux_x = " + fmt(fx) + " flux_xy = " + fmt(fxy));
  return p.report.converged ? kExitOk : kExitNoConvergence;
}

GraphSurface mesh_to_graph(const ImmersedMesh& m) {
  GraphSurface s;
  Triangulation& tri = s.mesh;
  for (const Vec3& v : m.vertices) {
    tri.vertices.emplace_back(v.x(), v.y());
    tri.boundary_height.push_back(v.z());
    s.heights.push_back(v.z());
  }
  tri.triangles = m.triangles;
  tri.boundary = mesh_boundary_vertices(m.triangles, m.vertices.size());
  tri.h = tri.max_edge_length();
  return s;
}

int cmd_build(const RunConfig& cfg, Run& run) {
  GraphSurface piece;
  if (!cfg.piece.empty()) {
    run.step("read_piece", [&] { piece = mesh_to_graph(read_mesh(cfg.piece)); });
  } else {
    Piece p = solve_piece(cfg, run);
    if (!p.report.converged) return kExitNoConvergence;
    piece = std::move(p.surface);
  }
  PeriodicAssembly as;
  std::vector<double> defects;
  double seam = 0.0;
  try {
    run.step("assemble", [&] {
      as = cfg.kind == Construction::Doubly ? build_doubly(cfg.model, piece, cfg.copies)
                                            : build_singly(cfg.model, piece, cfg.copies);
    });
    run.step("verify", [&] {
      for (const Vec3& g : as.generators) defects.push_back(periodicity_defect(cfg.model, as, g));
      seam = seam_curvature(cfg.model, as);
    });
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    run.line(e.what());
    return kExitBuild;
  }
  write_mesh(run.file("assembly.obj"), as.mesh);
  write_generators(run.file("generators.txt"), as.generators);
  const double h = piece.mesh.h > 0.0 ? piece.mesh.h : piece.mesh.max_edge_length();
  CsvTable t({"quantity", "value"});
  t.add({"vertices", std::to_string(as.mesh.vertices.size())});
  t.add({"triangles", std::to_string(as.mesh.triangles.size())});
  t.add({"euler_characteristic", std::to_string(euler_characteristic(as.mesh))});
  t.add({"edge_manifold", edge_manifold(as.mesh) ? "1" : "0"});
  bool ok = true;
  for (std::size_t k = 0; k < defects.size(); ++k) {
    t.add({"defect_" + std::to_string(k + 1), fmt(defects[k])});
    run.line("generator " + std::to_string(k + 1) + " (" + fmt(as.generators[k].x()) + ", " +
             fmt(as.generators[k].y()) + ", " + fmt(as.generators[k].z()) + ") defect " +
             fmt(defects[k]));
    ok = ok && defects[k] < h;
  }
  t.add({"seam_curvature", fmt(seam)});
  t.write(run.file("build.csv"));
  run.line("seam curvature = " + fmt(seam));
  return ok ? kExitOk : kExitCheckFailed;
}

int exit_for(ErrorCode code, int stage_default) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidPreset:
    case ErrorCode::NonFinite:
      return kExitParse;
    case ErrorCode::AExceedsBound:
    case ErrorCode::AssumptionViolated:
      return kExitDouglas;
    case ErrorCode::NoConvergence:
    case ErrorCode::PinchDetected:
      return kExitNoConvergence;
    default:
      return stage_default;
  }
}

}  // namespace

ModelMatrix parse_model(const std::string& text) {
  if (text == "heisenberg") return ModelMatrix::heisenberg();
  if (text == "sol") return ModelMatrix::sol();
  if (text == "euclidean") return ModelMatrix::euclidean();
  if (text.rfind("solc:", 0) == 0) {
    const double v = parse_real("model", text.substr(5));
    if (!(v >= 1.0)) parse_fail("solc parameter must be >= 1");
    return ModelMatrix::sol_family(v);
  }
  const std::vector<double> e = parse_list("model", text);
  if (e.size() != 4) parse_fail("model needs a preset name or four comma-separated reals");
  return {e[0], e[1], e[2], e[3]};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scherk-type minimal surfaces in metric semidirect products"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  std::map<std::string, std::string> flags;
  std::string config_path;
  bool benchmark = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value configuration file");
    auto opt = [&](const std::string& flag, const std::string& key, const std::string& help) {
      sub->add_option_function<std::string>(flag, [&flags, key](const std::string& v) { flags[key] = v; }, help);
    };
    opt("--model", "model", "heisenberg | sol | euclidean | solc:<v> | a,b,c,d");
    opt("--kind", "kind", "doubly | singly");
    opt("--a", "a", "side length a");
    opt("--eps", "eps", "epsilon");
    opt("--c0", "c0", "lower height of the comparison box");
    opt("--c1", "c1", "upper height of the comparison box");
    opt("--d", "d", "singly width d");
    opt("--c", "c", "contour height c");
    opt("--c-list", "c_list", "comma-separated heights for a monotone sequence");
    opt("--h", "h", "mesh size");
    opt("--tol", "tol", "solver tolerance");
    opt("--copies", "copies", "cells per direction (1..6)");
    opt("--out", "out", "output directory");
    opt("--jobs", "jobs", "worker threads");
    opt("--piece", "piece", "mesh from a previous solve");
  };
  CLI::App* geo = app.add_subcommand("check-geometry", "frame, connection and isometry residuals");
  CLI::App* dou = app.add_subcommand("douglas", "face areas and Douglas bounds");
  CLI::App* sol = app.add_subcommand("solve", "Plateau graph solve");
  CLI::App* bld = app.add_subcommand("build", "periodic assembly");
  for (CLI::App* s : {geo, dou, sol, bld}) add_common(s);
  sol->add_flag("--scherk-benchmark", benchmark, "Euclidean refinement study");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitParse;
  }

  RunConfig cfg;
  try {
    std::map<std::string, std::string> kv;
    if (!config_path.empty()) kv = read_config(config_path);
    for (const auto& [k, v] : flags) kv[k] = v;
    if (benchmark) kv["scherk_benchmark"] = "true";
    cfg = resolve(kv);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitParse;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  int stage_default = kExitParse;
  if (name == "solve") stage_default = kExitNoConvergence;
  if (name == "build") stage_default = kExitBuild;
  if (name == "douglas") stage_default = kExitDouglas;

  std::unique_ptr<Run> run;
  try {
    run = std::make_unique<Run>(cfg, name, out);
    int code = kExitOk;
    if (name == "check-geometry") code = cmd_check_geometry(cfg, *run);
    else if (name == "douglas") code = cmd_douglas(cfg, *run);
    else if (name == "solve") code = cmd_solve(cfg, *run);
    else code = cmd_build(cfg, *run);
    return run->finish(code);
  } catch (const Error& e) {
    err << e.what() << '\n';
    const int code = exit_for(e.code(), stage_default);
    return run ? run->finish(code) : code;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return run ? run->finish(stage_default) : stage_default;
  }
}

}  // namespace scherk
