#include <benchmark/benchmark.h>

#include "cayley/hermitian.hpp"
#include "cayley/planes.hpp"
#include "cayley/random.hpp"

using namespace cayley;

namespace {

std::vector<OrientedPlane4> planes(std::size_t n) {
  Rng rng(7);
  std::vector<OrientedPlane4> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(OrientedPlane4::from_frame(haar_frame(rng), 1e-11));
  return out;
}

void BM_KahlerAngles(benchmark::State& state) {
  const auto ps = planes(256);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(kahler_angles(ps[i++ % ps.size()]));
}
BENCHMARK(BM_KahlerAngles);

void BM_CanonicalForm(benchmark::State& state) {
  const auto ps = planes(256);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(canonical_form(ps[i++ % ps.size()]));
}
BENCHMARK(BM_CanonicalForm);

void BM_CalibrationPairing(benchmark::State& state) {
  const auto ps = planes(256);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(calibration_pairing(ps[i++ % ps.size()]));
}
BENCHMARK(BM_CalibrationPairing);

void BM_DirectCalibration(benchmark::State& state) {
  const auto ps = planes(256);
  const CayleyCalibration phi = cayley_calibration(0.7);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(phi(ps[i++ % ps.size()].frame()));
}
BENCHMARK(BM_DirectCalibration);

void BM_Ascent(benchmark::State& state) {
  const KForm form = cayley_calibration(0.7).form();
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(ascend(form, haar_frame(rng), static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Ascent)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace
