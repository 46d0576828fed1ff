#include <benchmark/benchmark.h>

#include <cmath>

#include "pcyl/measure.hpp"
#include "pcyl/sampler.hpp"
#include "pcyl/vacancy.hpp"

namespace {

using namespace pcyl;

void BM_SampleProcess(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const WindowSpec w{Vec(d), 20.0};
  std::uint64_t rep = 0;
  std::size_t lines = 0;
  for (auto _ : state) {
    const auto s = sample_process(w, 0.1, 1, rep++);
    lines += s.lines.size();
    benchmark::DoNotOptimize(s.lines.data());
  }
  state.counters["lines/s"] = benchmark::Counter(static_cast<double>(lines), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SampleProcess)->Arg(3)->Arg(4);

void BM_DistLineRegion(benchmark::State& state) {
  const int kind = static_cast<int>(state.range(0));
  CounterRng rng(SeedDerivation{2, 0, 0, 0});
  std::vector<CanonicalLine> lines;
  for (int i = 0; i < 1024; ++i) lines.push_back(draw_line(rng, Vec(3), 6.0));
  HitRegion region;
  switch (kind) {
    case 0: region = Ball{Point{1, 0, 0}, 2.0}; break;
    case 1: region = AxisBox{Point{-1, -1, -1}, Point{2, 1, 0.5}}; break;
    case 2: region = PlanarSquare{PlaneSpec::through_origin(3), 0, 0, 2.0}; break;
    default: region = Segment{Point{-2, 0, 0}, Point{2, 1, 0}};
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dist_line_region(lines[i++ & 1023], region));
}
BENCHMARK(BM_DistLineRegion)->DenseRange(0, 3);

void BM_BuildSlice(benchmark::State& state) {
  const double half = static_cast<double>(state.range(0));
  const auto sample = sample_process(WindowSpec{Vec(4), half * std::sqrt(2.0)}, 0.16, 3, 0);
  const PlaneSpec plane = PlaneSpec::through_origin(4);
  for (auto _ : state) {
    auto slice = build_slice(sample, plane, PlanarSquare{plane, 0, 0, half}, 0.1);
    benchmark::DoNotOptimize(slice.grid->occupied.data());
  }
}
BENCHMARK(BM_BuildSlice)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Crossing(benchmark::State& state) {
  const double half = static_cast<double>(state.range(0));
  const auto sample = sample_process(WindowSpec{Vec(3), half * std::sqrt(2.0)}, 0.5, 4, 0);
  const PlaneSpec plane = PlaneSpec::through_origin(3);
  const auto slice = build_slice(sample, plane, PlanarSquare{plane, 0, 0, half}, 0.1);
  const auto q = annulus_crossing(CrossingKind::kOccupied, 0, 0, half);
  for (auto _ : state) benchmark::DoNotOptimize(has_crossing(slice, q));
}
BENCHMARK(BM_Crossing)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_TwoPointEstimator(benchmark::State& state) {
  const HitRegion a = Ball{Vec(3), 1.0};
  const HitRegion b = Ball{Point{32, 0, 0}, 1.0};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mu_joint_hit_crofton(3, a, b, 1 << 16, seed++).value);
  state.SetItemsProcessed(state.iterations() * (1 << 16));
}
BENCHMARK(BM_TwoPointEstimator)->Unit(benchmark::kMillisecond);

void BM_EnvelopeEstimator(benchmark::State& state) {
  const HitRegion a = Ball{Vec(3), 1.0};
  const Ball env{Vec(3), 3.0};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mu_hit_mc(3, a, env, 1 << 16, seed++).value);
  state.SetItemsProcessed(state.iterations() * (1 << 16));
}
BENCHMARK(BM_EnvelopeEstimator)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
