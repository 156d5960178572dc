#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "ccsolid/topopt.hpp"

namespace ccsolid {

/// Run configuration in the `[section]` / `key = value` text format.
///
///   [problem]   type = heat | elasticity; heat_source = f
///   [material]  E0, nu, p, mu_min
///   [mesh]      subdivide, density_level, refine_at
///   [beso]      v_star, er, rho_min, filter, max_iters, paper_exact_sensitivity
///   [solver]    tolerance, max_iterations, quad_order, method = cholesky | cg | dense
///   [dirichlet] box = x0 y0 z0 x1 y1 z1; dofs = subset of xyz, or t; value   (repeatable)
///   [load]      box; vector = fx fy fz, or source = q                       (repeatable)
struct RunConfig {
  struct Dirichlet {
    std::array<double, 6> box{};
    std::string dofs = "xyz";
    double value = 0.0;
    bool operator==(const Dirichlet&) const = default;
  };
  struct Load {
    std::array<double, 6> box{};
    bool is_source = false;
    std::array<double, 3> vector{};
    double source = 0.0;
    bool operator==(const Load&) const = default;
  };

  Problem problem = Problem::Elasticity;
  double heat_source = 0.0;
  double E0 = 1.0, nu = 0.3, p = 3.0, mu_min = 1e-9;
  int subdivide = 2, density_level = 1, refine_at = 0;
  double v_star = 0.5, er = 0.02, rho_min = 1e-4;
  bool filter = true;
  int max_iters = 200;
  bool paper_exact_sensitivity = false;
  double tolerance = 1e-8;
  int max_iterations = 0;
  int quad_order = 4;
  SolverOptions::Method method = SolverOptions::Method::Cholesky;
  std::vector<Dirichlet> dirichlet;
  std::vector<Load> loads;

  bool operator==(const RunConfig&) const = default;

  /// Range checks; throws Error.
  void validate() const;

  Material material() const;
  BoundaryConditions boundary_conditions() const;
  SolverOptions solver() const;
  OptimizeConfig optimize_config() const;
};

/// Throws ParseError with the offending line.
RunConfig parse_config(std::string_view text);
RunConfig read_config(const std::string& path);
/// Every number with 17 significant digits, so parsing the result is exact.
std::string format_config(const RunConfig& cfg);

}  // namespace ccsolid
