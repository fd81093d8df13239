#include <benchmark/benchmark.h>

#include "ringflow/config.hpp"
#include "ringflow/field.hpp"
#include "ringflow/ridge.hpp"
#include "ringflow/streamline.hpp"

using namespace ringflow;

namespace {

struct TraceFixture {
  ConvexRing ring = make_preset_ring("square");
  std::shared_ptr<const TriangleMesh> mesh = generate_mesh(ring, 0.04);
  ScalarField field = solve_p_laplace(mesh, 16.0);
  GradientField grad = recover_gradient(field);
};

TraceFixture& fixture() {
  static TraceFixture fx;
  return fx;
}

} // namespace

static void BM_TraceStreamline(benchmark::State& state) {
  auto& fx = fixture();
  FieldSampler sampler(fx.field, fx.grad);
  for (auto _ : state) {
    Streamline s = trace(sampler, fx.ring, {0.5, -1.0});
    benchmark::DoNotOptimize(s.points.size());
  }
}
BENCHMARK(BM_TraceStreamline)->Unit(benchmark::kMicrosecond);

static void BM_DetectMeetings(benchmark::State& state) {
  auto& fx = fixture();
  FieldSampler sampler(fx.field, fx.grad);
  SeedStrategy strat;
  strat.count = static_cast<int>(state.range(0));
  std::vector<Streamline> streams;
  for (Vec2 seed : make_seeds(fx.ring, strat))
    streams.push_back(trace(sampler, fx.ring, seed));
  for (auto _ : state) {
    auto events = detect_meetings(streams, 0.04, fx.mesh.get(), 0.24);
    benchmark::DoNotOptimize(events.size());
  }
}
BENCHMARK(BM_DetectMeetings)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_RidgeDistanceQueries(benchmark::State& state) {
  auto& fx = fixture();
  FieldSampler sampler(fx.field, fx.grad);
  BoundarySpeedProfile prof = boundary_speed(fx.field, fx.ring, 512);
  RidgeGraph ridge = build_ridge(fx.field, fx.grad, fx.ring, prof);
  double acc = 0;
  int k = 0;
  for (auto _ : state) {
    Vec2 p{-0.9 + 0.001 * (k % 1800), 0.3};
    acc += ridge.distance_to(p);
    ++k;
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_RidgeDistanceQueries);
