#include <cmath>
#include <limits>
#include <string>

#include "gaussian_stats.hpp"
#include "pvseg/bic.hpp"
#include "pvseg/error.hpp"
#include "pvseg/parallel.hpp"

namespace pvseg {
namespace {

using detail::GaussianStats;
using detail::to_vec;
using detail::data_term;

// prefix[k] holds the stats of frames [0, k) of `window`.
std::vector<GaussianStats> prefix_stats(std::span<const FeatureFrame> window) {
  std::vector<GaussianStats> prefix(window.size() + 1);
  for (std::size_t i = 0; i < window.size(); ++i) {
    prefix[i + 1] = prefix[i];
    prefix[i + 1].add(to_vec(window[i], window.front()));
  }
  return prefix;
}

void check_split(std::size_t n, std::size_t split) {
  const std::size_t need = kMfccCount + 1;
  if (split < need || n < split + need)
    throw Error(Errc::insufficient_samples, "split " + std::to_string(split) + " of " +
                                                std::to_string(n) + " frames leaves a side with fewer than " +
                                                std::to_string(need));
}

}  // namespace

double bic_penalty(std::size_t dimension, std::size_t n) {
  const double d = static_cast<double>(dimension);
  return 0.5 * (d + d * (d + 1.0) / 2.0) * std::log(static_cast<double>(n));
}

double bic_data_term(std::span<const FeatureFrame> features, std::size_t split) {
  check_split(features.size(), split);
  const auto prefix = prefix_stats(features);
  return data_term(prefix.back(), prefix[split], prefix.back() - prefix[split]);
}

double bic_delta(std::span<const FeatureFrame> features, std::size_t split, double lambda) {
  return bic_data_term(features, split) - lambda * bic_penalty(kMfccCount, features.size());
}

std::vector<Boundary> detect_speaker_changes(const FeatureSequence& features, const BicConfig& cfg,
                                             unsigned threads) {
  if (!(cfg.initial_window_s > 0) || !(cfg.growth_step_s > 0) ||
      !(cfg.max_window_s >= cfg.initial_window_s) || !(cfg.lambda >= 0))
    throw Error(Errc::invalid_argument, "BicConfig values must be positive with max >= initial");
  if (!(features.sets_per_second > 0))
    throw Error(Errc::invalid_argument, "feature rate must be positive");

  const double rate = features.sets_per_second;
  const auto frames_for = [rate](double s) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(s * rate)));
  };
  const std::size_t initial = frames_for(cfg.initial_window_s);
  const std::size_t step = frames_for(cfg.growth_step_s);
  const std::size_t max_len = frames_for(cfg.max_window_s);
  const std::size_t margin = std::max(cfg.min_margin_frames, kMfccCount + 1);
  const std::span<const FeatureFrame> all(features.frames);
  const std::size_t n = all.size();
  if (n < initial)
    throw Error(Errc::clip_too_short, std::to_string(n) + " feature frames, initial window needs " +
                                          std::to_string(initial));

  std::vector<Boundary> out;
  std::size_t origin = 0;
  while (origin + initial <= n) {
    std::size_t len = initial;
    for (;;) {
      const std::size_t end = std::min(origin + len, n);
      const auto window = all.subspan(origin, end - origin);

      double best = -std::numeric_limits<double>::infinity();
      std::size_t best_split = 0;
      if (window.size() >= 2 * margin) {
        const auto prefix = prefix_stats(window);
        const double penalty = cfg.lambda * bic_penalty(kMfccCount, window.size());
        const std::size_t first = margin;
        const std::size_t count = window.size() - 2 * margin + 1;
        std::vector<double> scores(count);
        parallel_for(count, threads, [&](std::size_t k) {
          const std::size_t s = first + k;
          scores[k] = data_term(prefix.back(), prefix[s], prefix.back() - prefix[s]) - penalty;
        });
        for (std::size_t k = 0; k < count; ++k) {
          if (scores[k] > best) {
            best = scores[k];
            best_split = first + k;
          }
        }
      }

      const bool can_grow = end < n && len < max_len;
      const bool at_right_edge = best_split + margin == window.size();
      if (best > cfg.clearance && !(at_right_edge && can_grow)) {
        out.push_back({all[origin + best_split].t_start, best});
        origin += best_split;
        break;
      }
      if (end == n) return out;
      if (len >= max_len) {
        origin += step;
        break;
      }
      len = std::min(len + step, max_len);
    }
  }
  return out;
}

}  // namespace pvseg
