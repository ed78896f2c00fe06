#include <benchmark/benchmark.h>

#include "cayley/builtin_patches.hpp"
#include "cayley/patches.hpp"

using namespace cayley;

namespace {

void BM_PointGeometry(benchmark::State& state, const char* name, const char* ambient) {
  const Patch p = builtin_patch(name, {}, chart_by_name(ambient));
  const Param4 t = 0.5 * (p.box().lower + p.box().upper);
  for (auto _ : state) benchmark::DoNotOptimize(point_geometry(p, t));
}
BENCHMARK_CAPTURE(BM_PointGeometry, torus_flat, "product-torus", "flat")->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_PointGeometry, graph_flat, "lagrangian-graph", "flat")->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_PointGeometry, real_slice_fs, "fs-real-slice", "fubini-study")->Unit(benchmark::kMicrosecond);

void BM_FubiniStudyRicci(benchmark::State& state) {
  const auto fs = chart_by_name("fubini-study");
  const Vector8 p = Vector8::Constant(0.1);
  for (auto _ : state) benchmark::DoNotOptimize(fs->ricci_form_at(p));
}
BENCHMARK(BM_FubiniStudyRicci)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
