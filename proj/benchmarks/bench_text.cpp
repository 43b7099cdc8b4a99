#include <benchmark/benchmark.h>

#include <random>

#include "pvseg/text_index.hpp"

namespace {

std::vector<pvseg::TimedToken> transcript(std::size_t words) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> len(2, 10), letter(0, 25);
  std::vector<pvseg::TimedToken> out;
  for (std::size_t i = 0; i < words; ++i) {
    std::string w(static_cast<std::size_t>(len(rng)), 'a');
    for (char& c : w) c = static_cast<char>('a' + letter(rng));
    out.push_back({w, 0.4 * i, 0.4 * (i + 1)});
  }
  return out;
}

void BM_FilterPhrases(benchmark::State& state) {
  const auto tokens = transcript(static_cast<std::size_t>(state.range(0)));
  const auto themes = pvseg::default_theme_phrases();
  for (auto _ : state) benchmark::DoNotOptimize(pvseg::filter_phrases(tokens, themes, 0.75));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FilterPhrases)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Levenshtein(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(pvseg::levenshtein("implementation", "implemantatoin"));
}
BENCHMARK(BM_Levenshtein);

}  // namespace
