#include "ccsolid/topopt.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <string>

#include "ccsolid/subdivision.hpp"

namespace ccsolid {

void BesoConfig::validate() const {
  if (!(v_star > 0.0 && v_star < 1.0)) throw Error("v_star must lie in (0, 1)");
  if (!(er > 0.0 && er < 1.0)) throw Error("evolutionary ratio must lie in (0, 1)");
  if (!(rho_min > 0.0 && rho_min < 1.0)) throw Error("rho_min must lie in (0, 1)");
  if (density_level < 0 || density_level > 4) throw Error("density level must lie in [0, 4]");
  if (max_iters < 1) throw Error("max_iters must be positive");
}

std::vector<double> sensitivities(std::span<const double> energies, std::span<const double> rho, const Material& mat,
                                  bool paper_exact) {
  if (energies.size() != rho.size()) throw Error("energy and density vectors differ in length");
  const double scale = 0.5 * mat.p * (paper_exact ? 1.0 : 1.0 - mat.mu_min);
  std::vector<double> alpha(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) alpha[i] = scale * std::pow(rho[i], mat.p - 1.0) * energies[i];
  return alpha;
}

std::vector<double> sensitivities(const Analysis& analysis, const Solution& solution, std::span<const double> rho,
                                  const Material& mat, bool paper_exact) {
  return sensitivities(analysis.subelement_energies(solution), rho, mat, paper_exact);
}

SensitivityFilter::SensitivityFilter(std::span<const Vec3> centroids, const std::vector<std::vector<Index>>& adjacency) {
  const auto n = static_cast<Index>(centroids.size());
  if (adjacency.size() != centroids.size()) throw Error("adjacency and centroid counts differ");
  radius_.assign(n, 0.0);
  weights_.resize(n);
  for (Index i = 0; i < n; ++i) {
    const auto& nb = adjacency[i];
    if (nb.empty()) continue;
    double sum = 0.0;
    for (Index j : nb) sum += (centroids[i] - centroids[j]).norm();
    radius_[i] = 2.0 * sum / static_cast<double>(nb.size());
  }
  for (Index i = 0; i < n; ++i) {
    const double r = radius_[i];
    weights_[i].push_back({i, r > 0.0 ? r : 1.0});
    if (r <= 0.0) continue;
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = (centroids[i] - centroids[j]).norm();
      if (d < r) weights_[i].push_back({j, r - d});
    }
  }
}

std::vector<double> SensitivityFilter::apply(std::span<const double> alpha) const {
  if (alpha.size() != radius_.size()) throw Error("sensitivity vector does not match the filter");
  std::vector<double> out(alpha.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double num = 0.0, den = 0.0;
    for (const auto& [j, w] : weights_[i]) {
      num += w * alpha[j];
      den += w;
    }
    out[i] = num / den;
  }
  return out;
}

std::vector<double> filter_sensitivities(std::span<const double> alpha, std::span<const Vec3> centroids,
                                         const std::vector<std::vector<Index>>& adjacency) {
  return SensitivityFilter(centroids, adjacency).apply(alpha);
}

std::vector<double> average_history(std::span<const double> previous, std::span<const double> current) {
  if (previous.empty()) return {current.begin(), current.end()};
  if (previous.size() != current.size()) throw Error("sensitivity history length mismatch");
  std::vector<double> out(current.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (previous[i] + current[i]);
  return out;
}

OptState beso_iterate(OptState state, std::span<const double> alpha, const BesoConfig& cfg) {
  DensityField& d = state.density;
  if (alpha.size() != d.size()) throw Error("sensitivity vector does not match the density field");
  const double total = d.total_volume();
  const double previous = state.iteration == 0 ? total : state.target_volume;
  state.target_volume = std::max(cfg.v_star * total, previous * (1.0 - cfg.er));
  ++state.iteration;

  std::vector<Index> order;
  for (Index i = 0; i < static_cast<Index>(d.size()); ++i) {
    if (d.rho[i] == 1.0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return alpha[a] < alpha[b]; });

  // Slack absorbs round-off in the running volume sum.
  const double slack = 1e-12 * total;
  double solid = d.solid_volume();
  state.last_killed = 0;
  for (Index e : order) {
    if (solid <= state.target_volume + slack) break;
    d.rho[e] = cfg.rho_min;
    solid -= d.volume[e];
    ++state.last_killed;
  }
  return state;
}

OptimizeResult optimize(const HexMesh& mesh, const OptimizeConfig& cfg, const OptimizeObserver& observer) {
  cfg.beso.validate();
  cfg.material.validate();
  OptimizeResult result;
  result.mesh = subdivide(mesh, cfg.subdivide);
  result.model = build_spline_model(result.mesh);

  int level = cfg.beso.density_level;
  OptState state;
  state.density = DensityField::uniform(result.model, level, cfg.solver.quad_order);
  auto analysis = std::make_unique<Analysis>(result.model, cfg.problem, cfg.material, cfg.bcs, level, cfg.solver);
  std::unique_ptr<SensitivityFilter> filter;
  if (cfg.beso.filter) {
    filter = std::make_unique<SensitivityFilter>(state.density.centroid, density_adjacency(result.mesh, level));
  }
  const double total = state.density.total_volume();

  for (int iter = 1; iter <= cfg.beso.max_iters; ++iter) {
    if (cfg.refine_at > 0 && iter == cfg.refine_at) {
      DensityField finer = state.density.refined(result.model, cfg.solver.quad_order);
      if (!state.history.empty()) {
        std::vector<double> inherited(finer.size());
        for (std::size_t e = 0; e < finer.size(); ++e) {
          inherited[e] = state.history[parent_density_element(static_cast<Index>(e), level + 1)];
        }
        state.history = std::move(inherited);
      }
      ++level;
      state.density = std::move(finer);
      analysis = std::make_unique<Analysis>(result.model, cfg.problem, cfg.material, cfg.bcs, level, cfg.solver);
      if (cfg.beso.filter) {
        filter = std::make_unique<SensitivityFilter>(state.density.centroid, density_adjacency(result.mesh, level));
      }
    }

    const Solution& sol = analysis->solve(state.density.rho);
    if (!std::isfinite(sol.compliance)) throw Error("non-finite compliance at iteration " + std::to_string(iter));
    state.compliance.push_back(sol.compliance);
    const auto alpha =
        sensitivities(*analysis, sol, state.density.rho, cfg.material, cfg.beso.paper_exact_sensitivity);
    const auto filtered = filter ? filter->apply(alpha) : alpha;
    auto averaged = average_history(state.history, filtered);
    state = beso_iterate(std::move(state), averaged, cfg.beso);
    state.history = std::move(averaged);

    IterationRecord rec;
    rec.iter = iter;
    rec.compliance = sol.compliance;
    rec.volume_fraction = state.density.solid_volume() / total;
    rec.killed_count = state.density.killed_count(cfg.beso.rho_min);
    rec.target_volume = state.target_volume;
    result.history.push_back(rec);
    if (observer) observer(rec, result.model, state.density);

    const bool at_target = state.target_volume <= cfg.beso.v_star * total;
    if (at_target && state.last_killed == 0) {
      result.converged = true;
      break;
    }
  }
  result.final_compliance = analysis->solve(state.density.rho).compliance;
  result.density = std::move(state.density);
  return result;
}

}  // namespace ccsolid
