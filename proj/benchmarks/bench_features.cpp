#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "pvseg/features.hpp"

namespace {

pvseg::AudioClip noise(int sample_rate, double seconds) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> u(-0.5f, 0.5f);
  pvseg::AudioClip clip{sample_rate, std::vector<float>(static_cast<std::size_t>(sample_rate * seconds))};
  for (float& s : clip.samples) s = u(rng);
  return clip;
}

void BM_Mfcc(benchmark::State& state) {
  const auto clip = noise(static_cast<int>(state.range(0)), 1.0);
  const std::size_t n = pvseg::auto_set_length(clip.sample_rate);
  const pvseg::MelFilterbank bank(clip.sample_rate, pvseg::next_pow2(n));
  for (auto _ : state) benchmark::DoNotOptimize(pvseg::mfcc(std::span(clip.samples).first(n), bank));
}
BENCHMARK(BM_Mfcc)->Arg(8000)->Arg(16000)->Arg(44100);

void BM_ExtractFeatures(benchmark::State& state) {
  const auto clip = noise(16000, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pvseg::extract_features(clip));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 8);
}
BENCHMARK(BM_ExtractFeatures)->Arg(60)->Arg(600)->Unit(benchmark::kMillisecond);

}  // namespace
