#include <benchmark/benchmark.h>

#include "ringflow/config.hpp"
#include "ringflow/field.hpp"
#include "ringflow/mesh.hpp"

using namespace ringflow;

static void BM_GenerateMesh(benchmark::State& state) {
  double h = 1.0 / state.range(0);
  auto ring = make_preset_ring("square");
  for (auto _ : state) {
    auto mesh = generate_mesh(ring, h);
    benchmark::DoNotOptimize(mesh->vertex_count());
  }
}
BENCHMARK(BM_GenerateMesh)->Arg(10)->Arg(20)->Arg(40);

static void BM_SolveSweep(benchmark::State& state) {
  double p = static_cast<double>(state.range(0));
  auto ring = make_preset_ring("square");
  auto mesh = generate_mesh(ring, 0.05);
  for (auto _ : state) {
    auto field = solve_p_laplace(mesh, p);
    benchmark::DoNotOptimize(field.values.data());
  }
}
BENCHMARK(BM_SolveSweep)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_RecoverGradient(benchmark::State& state) {
  auto ring = make_preset_ring("annulus");
  auto mesh = generate_mesh(ring, 0.04);
  auto field = solve_p_laplace(mesh, 4.0);
  for (auto _ : state) {
    GradientField g = recover_gradient(field);
    benchmark::DoNotOptimize(g.vertex_speed.data());
  }
}
BENCHMARK(BM_RecoverGradient);

BENCHMARK_MAIN();
