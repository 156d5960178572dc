#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ccsolid/config.hpp"
#include "ccsolid/hexmesh.hpp"
#include "ccsolid/spline.hpp"
#include "ccsolid/subdivision.hpp"
#include "ccsolid/topopt.hpp"
#include "ccsolid/vtk.hpp"

namespace fs = std::filesystem;
using namespace ccsolid;

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool has_extension(const std::string& path, const char* ext) { return fs::path(path).extension() == ext; }

void print_box(const char* label, const std::vector<Vec3>& points) {
  if (points.empty()) return;
  Vec3 lo = points.front(), hi = lo;
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  std::cout << label << ' ' << fmt(lo.x()) << ' ' << fmt(lo.y()) << ' ' << fmt(lo.z()) << "  " << fmt(hi.x()) << ' '
            << fmt(hi.y()) << ' ' << fmt(hi.z()) << '\n';
}

int cmd_validate(const std::string& input) {
  const HexMesh mesh = read_mesh(input);
  const ValidationReport report = validate(mesh);
  std::cout << "vertices " << mesh.num_vertices() << "\ncells " << mesh.num_cells() << "\nedges " << mesh.num_edges()
            << "\nfaces " << mesh.num_faces() << "\ninterior_vertices " << report.interior_vertices << '\n';
  for (const auto& f : report.findings) {
    std::cout << to_string(f.kind) << ' ' << f.entity << ": " << f.message << '\n';
  }
  std::cout << (report.ok() ? "valid" : "invalid") << '\n';
  return report.ok() ? 0 : 1;
}

int cmd_subdivide(const std::string& input, int levels, const std::string& output) {
  const HexMesh mesh = subdivide(read_mesh(input), levels);
  if (has_extension(output, ".vtk")) {
    write_vtk(output, mesh_grid(mesh));
  } else {
    write_mesh(output, mesh);
  }
  std::cout << "cells " << mesh.num_cells() << "\nvertices " << mesh.num_vertices() << '\n';
  return 0;
}

int cmd_limit(const std::string& input, bool include_boundary, const std::string& output) {
  const HexMesh mesh = read_mesh(input);
  std::vector<Vec3> points;
  for (Index v = 0; v < static_cast<Index>(mesh.num_vertices()); ++v) {
    if (!include_boundary && mesh.is_boundary_vertex(v)) continue;
    points.push_back(limit_point(mesh, v).position);
  }
  write_vtk(output, point_cloud(points), "limit points");
  std::cout << "limit_points " << points.size() << '\n';
  return 0;
}

int cmd_bezier(const std::string& input, int levels, const std::string& output, const std::string& vtk, int sample) {
  const SplineModel model = build_spline_model(subdivide(read_mesh(input), levels));
  write_spline_model(output, model);
  if (!vtk.empty()) write_vtk(vtk, sample_model(model, sample), "bezier model");
  std::cout << "cells " << model.num_cells() << "\ncontrol_points " << model.control_points.size() << '\n';
  print_box("control_box", model.control_points);
  return 0;
}

int cmd_error(const std::string& input, int levels, int depth) {
  const HexMesh mesh = subdivide(read_mesh(input), levels);
  const SplineModel model = build_spline_model(mesh);
  const ErrorStats stats = approximation_error(mesh, model, depth);
  std::cout << "depth " << stats.depth << "\nsamples " << stats.samples.size() << "\nmax " << fmt(stats.max)
            << "\nmean " << fmt(stats.mean) << "\nregular_interior_max " << fmt(stats.regular_interior_max()) << '\n';
  return 0;
}

int cmd_solve(const std::string& input, const std::string& config_path, const std::string& output, int sample) {
  const RunConfig cfg = read_config(config_path);
  const SplineModel model = build_spline_model(subdivide(read_mesh(input), cfg.subdivide));
  print_box("control_box", model.control_points);
  Analysis analysis(model, cfg.problem, cfg.material(), cfg.boundary_conditions(), 0, cfg.solver());
  const std::vector<double> rho(model.num_cells(), 1.0);
  const Solution& sol = analysis.solve(rho);
  VtkGrid grid = sample_model(model, sample);
  add_solution(grid, model, sol, sample);
  write_vtk(output, grid, "solution");
  std::cout << "free_dofs " << analysis.num_free_dofs() << "\ncompliance " << fmt(sol.compliance) << '\n';
  return 0;
}

int cmd_optimize(const std::string& input, const std::string& config_path, const std::string& run_dir, int sample) {
  const RunConfig cfg = read_config(config_path);
  fs::create_directories(run_dir);
  std::ofstream history(fs::path(run_dir) / "history.csv");
  if (!history) throw Error("cannot write history.csv in '" + run_dir + "'");
  history << "iter,compliance,volume_fraction,killed_count\n";
  const auto start = std::chrono::steady_clock::now();

  auto observer = [&](const IterationRecord& rec, const SplineModel& model, const DensityField& density) {
    char name[32];
    std::snprintf(name, sizeof name, "iter_%04d.vtk", rec.iter);
    write_vtk((fs::path(run_dir) / name).string(), density_grid(model, density, sample), name);
    history << rec.iter << ',' << fmt(rec.compliance) << ',' << fmt(rec.volume_fraction) << ',' << rec.killed_count
            << std::endl;
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "iter " << rec.iter << " compliance " << fmt(rec.compliance) << " volume " << rec.volume_fraction
              << " killed " << rec.killed_count << " t " << elapsed << "s" << std::endl;
  };
  const OptimizeResult result = optimize(read_mesh(input), cfg.optimize_config(), observer);
  write_vtk((fs::path(run_dir) / "final.vtk").string(), density_grid(result.model, result.density, sample, cfg.rho_min),
            "final design");
  std::cout << "final_compliance " << fmt(result.final_compliance) << "\nconverged " << (result.converged ? 1 : 0)
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Catmull-Clark solid modelling, IGA and BESO topology optimization"};
  app.require_subcommand(1);

  std::string input, output, config, vtk;
  int levels = 0, depth = 2, sample = 4;
  bool all = false;

  auto* validate_cmd = app.add_subcommand("validate", "Check mesh conformity and vertex stars");
  validate_cmd->add_option("mesh", input, "Input mesh")->required()->check(CLI::ExistingFile);

  auto* subdivide_cmd = app.add_subcommand("subdivide", "Catmull-Clark solid subdivision");
  subdivide_cmd->add_option("mesh", input, "Input mesh")->required()->check(CLI::ExistingFile);
  subdivide_cmd->add_option("-n,--levels", levels, "Subdivision steps")->default_val(1)->check(CLI::NonNegativeNumber);
  subdivide_cmd->add_option("-o,--output", output, "Output mesh, or VTK when it ends in .vtk")->required();

  auto* limit_cmd = app.add_subcommand("limit", "Limit positions of the mesh vertices");
  limit_cmd->add_option("mesh", input, "Input mesh")->required()->check(CLI::ExistingFile);
  limit_cmd->add_flag("--all", all, "Include boundary vertices");
  limit_cmd->add_option("-o,--output", output, "Point-cloud VTK")->required();

  auto* bezier_cmd = app.add_subcommand("bezier", "Tricubic Bezier approximation");
  bezier_cmd->add_option("mesh", input, "Input mesh")->required()->check(CLI::ExistingFile);
  bezier_cmd->add_option("-n,--levels", levels, "Subdivision steps before conversion")->check(CLI::NonNegativeNumber);
  bezier_cmd->add_option("-o,--output", output, "Spline model file")->required();
  bezier_cmd->add_option("--vtk", vtk, "Also write a sampled VTK");
  bezier_cmd->add_option("--sample", sample, "Sub-hexahedra per patch direction")->check(CLI::PositiveNumber);

  auto* error_cmd = app.add_subcommand("error", "Distance between Bezier model and subdivision limit");
  error_cmd->add_option("mesh", input, "Input mesh")->required()->check(CLI::ExistingFile);
  error_cmd->add_option("-n,--levels", levels, "Subdivision steps before conversion")->check(CLI::NonNegativeNumber);
  error_cmd->add_option("-d,--depth", depth, "Further subdivision steps for sampling")->check(CLI::NonNegativeNumber);

  auto* solve_cmd = app.add_subcommand("solve", "Heat or elasticity analysis");
  solve_cmd->add_option("mesh", input, "Input mesh")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--config", config, "Run configuration")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("-o,--output", output, "Solution VTK")->required();
  solve_cmd->add_option("--sample", sample, "Sub-hexahedra per patch direction")->check(CLI::PositiveNumber);

  auto* optimize_cmd = app.add_subcommand("optimize", "BESO topology optimization");
  optimize_cmd->add_option("mesh", input, "Input mesh")->required()->check(CLI::ExistingFile);
  optimize_cmd->add_option("--config", config, "Run configuration")->required()->check(CLI::ExistingFile);
  optimize_cmd->add_option("-o,--output", output, "Run directory")->required();
  optimize_cmd->add_option("--sample", sample, "Sub-hexahedra per patch direction")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) return cmd_validate(input);
    if (subdivide_cmd->parsed()) return cmd_subdivide(input, levels, output);
    if (limit_cmd->parsed()) return cmd_limit(input, all, output);
    if (bezier_cmd->parsed()) return cmd_bezier(input, levels, output, vtk, sample);
    if (error_cmd->parsed()) return cmd_error(input, levels, depth);
    if (solve_cmd->parsed()) return cmd_solve(input, config, output, sample);
    if (optimize_cmd->parsed()) return cmd_optimize(input, config, output, sample);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
