#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "ccsolid/bezier.hpp"
#include "ccsolid/spline.hpp"

namespace ccsolid {

enum class Problem { Heat, Elasticity };

/// Unknowns per control point: 1 for heat, 3 for elasticity.
constexpr int components(Problem problem) { return problem == Problem::Heat ? 1 : 3; }

struct Material {
  double E0 = 1.0;
  double nu = 0.3;
  double p = 3.0;
  double mu_min = 1e-9;

  double lambda() const { return nu * E0 / ((1.0 + nu) * (1.0 - 2.0 * nu)); }
  double mu() const { return E0 / (2.0 * (1.0 + nu)); }
  /// Penalized modulus fraction mu_min + (1 - mu_min) rho^p.
  double modulus_factor(double rho) const;
  /// Throws Error when a constant is outside its admissible range.
  void validate() const;
};

/// Unit-conductivity heat stiffness, 64 x 64.
Eigen::MatrixXd element_stiffness_heat(const BezierVolume& vol, int quad_order = 4);

/// Linear elastic stiffness, 192 x 192, dof index 3 * point + component.
Eigen::MatrixXd element_stiffness_elastic(const BezierVolume& vol, const Material& mat, int quad_order = 4);

/// Dyadic sub-cube [i, i+1] x [j, j+1] x [k, k+1] / 2^level of the parameter domain.
struct SubCell {
  int level = 0;
  std::array<int, 3> index{0, 0, 0};
};

/// Parent-basis stiffness integrated over one sub-cube with quad_order points per
/// direction inside it. Level 0 is the whole element and reproduces
/// element_stiffness_heat / element_stiffness_elastic bit for bit.
Eigen::MatrixXd subelement_stiffness(const BezierVolume& vol, const SubCell& sub, Problem problem, const Material& mat,
                                     int quad_order = 4);

/// Volume of a sub-cube, integral of |det J|.
double subcell_volume(const BezierVolume& vol, const SubCell& sub, int quad_order = 4);

/// Consistent heat load of a unit source density, integral of N |det J|.
Eigen::VectorXd element_source(const BezierVolume& vol, int quad_order = 4);

/// Closed axis-aligned box.
struct Box {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
  bool contains(const Vec3& p) const;
};

/// Prescribes control-point coefficients inside `box`. Components index x, y, z
/// for elasticity; heat uses component 0 only. When `field` is set it supplies
/// the prescribed value per point and component instead of `value`.
struct DirichletSpec {
  Box box;
  std::array<bool, 3> components{true, true, true};
  double value = 0.0;
  std::function<double(const Vec3&, int)> field;
};

/// Nodal force (elasticity) or point heat source in vector.x() (heat) applied
/// to every control point inside `box`.
struct LoadSpec {
  Box box;
  Vec3 vector = Vec3::Zero();
};

struct BoundaryConditions {
  std::vector<DirichletSpec> dirichlet;
  std::vector<LoadSpec> loads;
  double heat_source = 0.0;  // uniform source density f
};

/// ConjugateGradient: Jacobi-preconditioned CG, warm-started between solves.
/// Cholesky: sparse direct factorization (CHOLMOD supernodal when available,
/// otherwise Eigen's simplicial LDLT); the symbolic analysis is reused.
/// Dense: dense LDLT, for small oracle problems.
struct SolverOptions {
  enum class Method { ConjugateGradient, Cholesky, Dense };
  Method method = Method::ConjugateGradient;
  double tolerance = 1e-8;
  int max_iterations = 0;  // 0 selects 50 * free dofs
  int quad_order = 4;
};

struct Solution {
  Problem problem = Problem::Elasticity;
  Eigen::VectorXd U;  // all coefficients, index components * point + component
  double compliance = 0.0;
  int iterations = 0;
  double residual = 0.0;
  std::uint64_t revision = 0;
};

/// Assembly and solution of K(rho) U = F on a spline model, with densities on
/// sub-cubes of level `density_level`. Element matrices are cached and only
/// cells whose densities changed are recomputed between solves.
///
/// Density element index: cell * 8^s + (i * 2^s + j) * 2^s + k.
class Analysis {
 public:
  Analysis(const SplineModel& model, Problem problem, const Material& mat, const BoundaryConditions& bcs,
           int density_level = 0, SolverOptions options = {});

  Problem problem() const { return problem_; }
  int density_level() const { return level_; }
  std::size_t num_density_elements() const { return model_->num_cells() << (3 * level_); }
  std::size_t num_dofs() const { return free_index_.size(); }
  std::size_t num_free_dofs() const { return static_cast<std::size_t>(num_free_); }

  /// Solves with densities rho (one per density element). Successive calls
  /// warm-start the iterative solver from the previous solution.
  const Solution& solve(std::span<const double> rho);
  const Solution& solution() const { return solution_; }

  /// u_e^T K_i^0 u_e per density element for the current solution, where K_i^0
  /// is the unpenalized sub-element stiffness. Throws Error when `sol` is not
  /// the latest solution of this analysis.
  std::vector<double> subelement_energies(const Solution& sol) const;

  /// Element stiffness for the current densities of cell c.
  const Eigen::MatrixXd& element_matrix(Index c) const { return element_[c]; }
  /// Sparse matrix over all dofs (constraints not applied), for tests.
  Eigen::SparseMatrix<double> global_matrix() const;
  /// Load vector over all dofs.
  const Eigen::VectorXd& load_vector() const { return load_; }

 private:
  Eigen::MatrixXd unit_subelement(Index c, int sub) const;
  void update_elements(std::span<const double> rho);
  void assemble();

  const SplineModel* model_;
  Problem problem_;
  Material mat_;
  int level_;
  SolverOptions options_;
  int ncomp_;

  std::vector<BezierVolume> patches_;
  std::vector<Eigen::MatrixXd> full_;     // unpenalized whole-element stiffness
  std::vector<Eigen::MatrixXd> element_;  // current K_e(rho)
  std::vector<double> rho_;
  bool have_rho_ = false;

  std::vector<Index> free_index_;  // dof -> free dof or -1
  Index num_free_ = 0;
  Eigen::VectorXd prescribed_;  // values on constrained dofs
  Eigen::VectorXd load_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> K_;
  std::vector<std::vector<Index>> scatter_;  // per cell, CSR value slot per local (a, b) or -1
  Eigen::VectorXd rhs_;
  struct DirectSolver;
  std::shared_ptr<DirectSolver> direct_;

  Solution solution_;
  std::uint64_t revision_ = 0;
};

/// One-shot convenience wrapper around Analysis.
Solution assemble_and_solve(const SplineModel& model, std::span<const double> rho, int density_level,
                            const Material& mat, const BoundaryConditions& bcs, Problem problem,
                            SolverOptions options = {});

}  // namespace ccsolid
