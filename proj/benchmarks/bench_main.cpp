#include <benchmark/benchmark.h>

#include "ccsolid/iga.hpp"
#include "ccsolid/meshgen.hpp"
#include "ccsolid/spline.hpp"
#include "ccsolid/subdivision.hpp"
#include "ccsolid/topopt.hpp"

using namespace ccsolid;

namespace {

HexMesh beam(int levels) { return subdivide(make_lattice(4, 2, 2, Vec3(4, 2, 2)), levels); }

BoundaryConditions cantilever() {
  BoundaryConditions bcs;
  bcs.dirichlet.push_back({Box{Vec3(-1, -1, -1), Vec3(0.25, 3, 3)}, {true, true, true}, 0.0, {}});
  bcs.loads.push_back({Box{Vec3(3.7, -1, -1), Vec3(5, 3, 0.3)}, Vec3(0, 0, -1)});
  return bcs;
}

void BM_Subdivide(benchmark::State& state) {
  const HexMesh m = beam(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(subdivide(m));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m.num_cells()));
}
BENCHMARK(BM_Subdivide)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_LocalSubdivisionMatrix(benchmark::State& state) {
  const HexMesh m = make_lattice(2, 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(local_subdivision_matrix(m, 13));
}
BENCHMARK(BM_LocalSubdivisionMatrix);

void BM_BuildSplineModel(benchmark::State& state) {
  const HexMesh m = beam(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_spline_model(m));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m.num_cells()));
}
BENCHMARK(BM_BuildSplineModel)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_ElementStiffness(benchmark::State& state) {
  const SplineModel model = build_spline_model(beam(1));
  const BezierVolume vol = model.patch(50);
  const Material mat;
  const auto problem = state.range(0) ? Problem::Elasticity : Problem::Heat;
  const SubCell sub{static_cast<int>(state.range(1)), {0, 0, 0}};
  for (auto _ : state) benchmark::DoNotOptimize(subelement_stiffness(vol, sub, problem, mat));
}
BENCHMARK(BM_ElementStiffness)->Args({0, 0})->Args({1, 0})->Args({1, 1})->Unit(benchmark::kMicrosecond);

void BM_Solve(benchmark::State& state) {
  const SplineModel model = build_spline_model(beam(1));
  SolverOptions opt;
  opt.method = state.range(0) ? SolverOptions::Method::Cholesky : SolverOptions::Method::ConjugateGradient;
  Analysis analysis(model, Problem::Elasticity, Material{}, cantilever(), 1, opt);
  std::vector<double> rho(analysis.num_density_elements(), 1.0);
  int flip = 0;
  for (auto _ : state) {
    rho[0] = (++flip & 1) ? 0.5 : 1.0;
    benchmark::DoNotOptimize(analysis.solve(rho).compliance);
  }
}
BENCHMARK(BM_Solve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_Filter(benchmark::State& state) {
  const HexMesh m = beam(1);
  const SplineModel model = build_spline_model(m);
  const DensityField d = DensityField::uniform(model, 1);
  const SensitivityFilter filter(d.centroid, density_adjacency(m, 1));
  std::vector<double> alpha(d.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = static_cast<double>(i % 17);
  for (auto _ : state) benchmark::DoNotOptimize(filter.apply(alpha));
}
BENCHMARK(BM_Filter)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
