// OpenMP kernels against their serial reference counterparts.

#include <benchmark/benchmark.h>

#include "rsflicker/defense.hpp"
#include "rsflicker/reference.hpp"
#include "rsflicker/sensor.hpp"
#include "rsflicker/synth.hpp"

namespace {

rsf::SensorConfig sensor(std::size_t rows, std::size_t cols) {
  rsf::SensorConfig c;
  c.interline_delay_us = 25;
  c.exposure_us = 25;
  c.rows = rows;
  c.cols = cols;
  return c;
}

const rsf::PulseParams kPulse = rsf::PulseParams::make(300, 0.5);

void BM_RenderPattern(benchmark::State& state) {
  const auto c = sensor(state.range(0), state.range(0) * 4 / 3);
  for (auto _ : state) benchmark::DoNotOptimize(rsf::render_pattern(c, kPulse, 30.0));
}

void BM_RenderPatternReference(benchmark::State& state) {
  const auto c = sensor(state.range(0), state.range(0) * 4 / 3);
  for (auto _ : state) benchmark::DoNotOptimize(rsf::reference::render_pattern(c, kPulse, 30.0));
}

void BM_Expose(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto face = rsf::synth_face(0, rows, rows * 4 / 3);
  const auto pat = rsf::render_pattern(sensor(face.rows(), face.cols()), kPulse, 30.0);
  for (auto _ : state) benchmark::DoNotOptimize(rsf::expose(face, pat));
}

void BM_ExposeReference(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto face = rsf::synth_face(0, rows, rows * 4 / 3);
  const auto pat = rsf::render_pattern(sensor(face.rows(), face.cols()), kPulse, 30.0);
  for (auto _ : state) benchmark::DoNotOptimize(rsf::reference::expose(face, pat));
}

void BM_Notch(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto face = rsf::synth_face(0, rows, rows * 4 / 3);
  const auto spec = rsf::FilterSpec::tuned(1.0 / 12.0);
  for (auto _ : state) benchmark::DoNotOptimize(rsf::butterworth_notch(face, spec));
}

void BM_NotchReference(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto face = rsf::synth_face(0, rows, rows * 4 / 3);
  const auto spec = rsf::FilterSpec::tuned(1.0 / 12.0);
  for (auto _ : state) benchmark::DoNotOptimize(rsf::reference::butterworth_notch(face, spec));
}

}  // namespace

BENCHMARK(BM_RenderPattern)->Arg(240)->Arg(960)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RenderPatternReference)->Arg(240)->Arg(960)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Expose)->Arg(240)->Arg(960)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExposeReference)->Arg(240)->Arg(960)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Notch)->Arg(240)->Arg(960)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NotchReference)->Arg(240)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
