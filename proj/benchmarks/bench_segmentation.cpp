#include <benchmark/benchmark.h>

#include <random>

#include "pvseg/bic.hpp"
#include "pvseg/histogram.hpp"
#include "pvseg/shots.hpp"

namespace {

// Alternating sources every 15 s at 8 frames/s.
pvseg::FeatureSequence stream(double seconds) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  pvseg::FeatureSequence seq;
  seq.sample_rate = 16000;
  seq.set_length_samples = 256;
  const auto n = static_cast<std::size_t>(seconds * 8);
  for (std::size_t i = 0; i < n; ++i) {
    pvseg::FeatureFrame f;
    f.t_start = static_cast<double>(i) / 8.0;
    const double mean = (i / 120) % 2 ? 2.0 : 0.0;
    for (double& c : f.coeffs) c = mean + g(rng);
    seq.frames.push_back(f);
  }
  return seq;
}

void BM_BicScan(benchmark::State& state) {
  const auto seq = stream(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pvseg::detect_speaker_changes(seq));
}
BENCHMARK(BM_BicScan)->Arg(120)->Arg(600)->Unit(benchmark::kMillisecond);

pvseg::FrameSequence frames(std::size_t count, int w, int h) {
  std::mt19937_64 rng(3);
  pvseg::FrameSequence seq;
  seq.fps = 25;
  seq.width = w;
  seq.height = h;
  for (std::size_t i = 0; i < count; ++i) {
    pvseg::Image img{w, h, 3, std::vector<std::uint8_t>(static_cast<std::size_t>(w * h * 3))};
    for (auto& v : img.pixels) v = static_cast<std::uint8_t>(rng());
    seq.frames.push_back(std::move(img));
  }
  return seq;
}

void BM_Histograms(benchmark::State& state) {
  const auto seq = frames(50, 320, 240);
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pvseg::compute_histograms(seq, 512, pvseg::ColorSpace::rgb, threads));
  state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(BM_Histograms)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_DetectShots(benchmark::State& state) {
  pvseg::HistogramSeries series = pvseg::compute_histograms(frames(2, 32, 24));
  const auto base = series.histograms;
  series.histograms.clear();
  for (std::int64_t i = 0; i < state.range(0); ++i) series.histograms.push_back(base[(i / 250) % 2]);
  for (auto _ : state) benchmark::DoNotOptimize(pvseg::detect_shots(series));
}
BENCHMARK(BM_DetectShots)->Arg(25 * 600)->Unit(benchmark::kMillisecond);

}  // namespace
