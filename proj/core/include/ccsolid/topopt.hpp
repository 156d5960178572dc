#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ccsolid/density.hpp"
#include "ccsolid/hexmesh.hpp"
#include "ccsolid/iga.hpp"
#include "ccsolid/spline.hpp"

namespace ccsolid {

struct BesoConfig {
  double v_star = 0.5;  // target fraction of the total volume
  double er = 0.02;     // evolutionary ratio
  double rho_min = 1e-4;
  int density_level = 1;
  bool filter = true;
  int max_iters = 200;
  bool paper_exact_sensitivity = false;  // drop the (1 - mu_min) factor

  void validate() const;
};

/// alpha_i = (p / 2) (1 - mu_min) rho_i^(p-1) u_e^T K_i^0 u_e from the
/// unpenalized sub-element energies u_e^T K_i^0 u_e.
std::vector<double> sensitivities(std::span<const double> energies, std::span<const double> rho, const Material& mat,
                                  bool paper_exact = false);

/// Solves nothing; reads the energies of the latest solution of `analysis`.
std::vector<double> sensitivities(const Analysis& analysis, const Solution& solution, std::span<const double> rho,
                                  const Material& mat, bool paper_exact = false);

/// Distance-weighted sensitivity filter. The radius of element i is twice the
/// mean distance to its face neighbours; every element closer than that,
/// including i itself, contributes with weight r_i - r_ij. Weights depend only
/// on geometry and are computed once.
class SensitivityFilter {
 public:
  SensitivityFilter(std::span<const Vec3> centroids, const std::vector<std::vector<Index>>& adjacency);

  std::vector<double> apply(std::span<const double> alpha) const;
  double radius(Index i) const { return radius_[i]; }
  std::size_t size() const { return radius_.size(); }

 private:
  struct Entry {
    Index j;
    double w;
  };
  std::vector<double> radius_;
  std::vector<std::vector<Entry>> weights_;
};

std::vector<double> filter_sensitivities(std::span<const double> alpha, std::span<const Vec3> centroids,
                                         const std::vector<std::vector<Index>>& adjacency);

/// Element-wise mean of the previous and current filtered sensitivities. An
/// empty `previous` marks the first iteration and returns `current`.
std::vector<double> average_history(std::span<const double> previous, std::span<const double> current);

struct OptState {
  int iteration = 0;
  double target_volume = 0.0;  // V_k, absolute
  DensityField density;
  std::vector<double> history;  // alpha-tilde of the previous iteration
  std::vector<double> compliance;
  std::size_t last_killed = 0;
};

/// One volume update: V_k = max(V* V_total, V_{k-1} (1 - ER)), then live
/// elements are switched to rho_min in ascending order of alpha (ties by
/// index) until the solid volume drops to V_k. Killed elements stay killed.
OptState beso_iterate(OptState state, std::span<const double> alpha, const BesoConfig& cfg);

struct OptimizeConfig {
  Problem problem = Problem::Elasticity;
  Material material;
  BoundaryConditions bcs;
  BesoConfig beso;
  SolverOptions solver;
  int subdivide = 2;  // pre-subdivision of the input mesh
  int refine_at = 0;  // iteration at which the density level grows by one; 0 = never
};

struct IterationRecord {
  int iter = 0;
  double compliance = 0.0;       // of the design analysed in this iteration
  double volume_fraction = 0.0;  // solid fraction after this iteration's update
  std::size_t killed_count = 0;  // total rho_min elements after the update
  double target_volume = 0.0;    // V_k, absolute
};

struct OptimizeResult {
  HexMesh mesh;  // the subdivided analysis mesh
  SplineModel model;
  DensityField density;
  std::vector<IterationRecord> history;
  double final_compliance = 0.0;
  bool converged = false;
};

using OptimizeObserver = std::function<void(const IterationRecord&, const SplineModel&, const DensityField&)>;

/// The full loop: subdivide, build the spline model, then repeat solve,
/// sensitivity, filter, history averaging and volume update until the
/// target volume is reached and a further iteration kills nothing.
OptimizeResult optimize(const HexMesh& mesh, const OptimizeConfig& cfg, const OptimizeObserver& observer = {});

}  // namespace ccsolid
