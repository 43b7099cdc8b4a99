#include <algorithm>
#include <cmath>
#include <string>

#include "pvseg/error.hpp"
#include "pvseg/numfmt.hpp"
#include "pvseg/shots.hpp"

namespace pvseg {
namespace {

constexpr double kMinExcess = 1e-9;
constexpr double kSigmaFloor = 1e-12;

struct Candidate {
  std::size_t frame;
  double z;
};

}  // namespace

double frame_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(Errc::bin_mismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " bins");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

ActivityGraph video_activity(const HistogramSeries& series) {
  if (series.size() < 2) throw Error(Errc::empty_sequence, "video activity needs two frames");
  if (!(series.fps > 0)) throw Error(Errc::invalid_argument, "fps must be positive");
  ActivityGraph g;
  g.kind = MediaKind::video;
  g.bin_duration_s = 1.0 / series.fps;
  g.values.resize(series.size() - 1);
  for (std::size_t i = 0; i + 1 < series.size(); ++i)
    g.values[i] = frame_distance(series.histograms[i], series.histograms[i + 1]);
  return g;
}

std::vector<Boundary> detect_shots(const HistogramSeries& series, const ShotConfig& cfg) {
  if (!(cfg.window_s > 0) || !(cfg.deviation_k > 0) || cfg.min_shot_s < 0)
    throw Error(Errc::invalid_argument, "ShotConfig: window_s and deviation_k must be positive");
  if (!(series.fps > 0)) throw Error(Errc::invalid_argument, "fps must be positive");
  const auto w = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.window_s * series.fps)));
  if (series.size() < 2 * w)
    throw Error(Errc::series_too_short, std::to_string(series.size()) + " frames, need " +
                                            std::to_string(2 * w));

  const auto activity = video_activity(series);
  const auto& d = activity.values;
  const std::size_t m = d.size();
  std::vector<double> sum(m + 1, 0.0), sq(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    sum[i + 1] = sum[i] + d[i];
    sq[i + 1] = sq[i] + d[i] * d[i];
  }

  std::vector<Candidate> candidates;
  for (std::size_t c = 0; c < m; ++c) {
    const std::size_t lo = c >= w ? c - w : 0;
    const std::size_t hi = std::min(m, c + 1 + w);
    const std::size_t count = (c - lo) + (hi - c - 1);
    if (count < w) continue;
    const double s = (sum[c] - sum[lo]) + (sum[hi] - sum[c + 1]);
    const double s2 = (sq[c] - sq[lo]) + (sq[hi] - sq[c + 1]);
    const double mean = s / static_cast<double>(count);
    const double var = std::max(0.0, s2 / static_cast<double>(count) - mean * mean);
    const double sigma = std::sqrt(var);
    const double excess = d[c] - mean;
    if (excess > kMinExcess && excess > cfg.deviation_k * sigma)
      candidates.push_back({c + 1, excess / std::max(sigma, kSigmaFloor)});
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.z > b.z; });
  const double duration = series.duration_s();
  std::vector<Boundary> accepted;
  for (const auto& cand : candidates) {
    const double t = series.time_of(cand.frame);
    if (t < cfg.min_shot_s || duration - t < cfg.min_shot_s) continue;
    const bool clear = std::none_of(accepted.begin(), accepted.end(), [&](const Boundary& b) {
      return std::abs(b.t - t) < cfg.min_shot_s;
    });
    if (clear) accepted.push_back({t, cand.z});
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const Boundary& a, const Boundary& b) { return a.t < b.t; });
  return accepted;
}

KeyframeRef select_keyframe(const HistogramSeries& series, const Segment& segment) {
  if (!(series.fps > 0)) throw Error(Errc::invalid_argument, "fps must be positive");
  const auto index_at = [&](double t) {
    const double x = std::ceil(t * series.fps - 1e-9);
    return static_cast<std::size_t>(std::clamp(x, 0.0, static_cast<double>(series.size())));
  };
  const std::size_t first = index_at(segment.t_start);
  const std::size_t last = index_at(segment.t_end);
  if (first >= last)
    throw Error(Errc::empty_segment, "no frames in [" + format_double(segment.t_start) + ", " +
                                         format_double(segment.t_end) + ")");

  std::vector<double> mean(static_cast<std::size_t>(series.bins), 0.0);
  for (std::size_t i = first; i < last; ++i) {
    const auto& h = series.histograms[i];
    if (h.size() != mean.size()) throw Error(Errc::bin_mismatch, "frame " + std::to_string(i));
    for (std::size_t k = 0; k < h.size(); ++k) mean[k] += h[k];
  }
  for (double& v : mean) v /= static_cast<double>(last - first);

  std::size_t best = first;
  double best_d = frame_distance(series.histograms[first], mean);
  for (std::size_t i = first + 1; i < last; ++i) {
    const double dist = frame_distance(series.histograms[i], mean);
    if (dist < best_d) {
      best_d = dist;
      best = i;
    }
  }
  return {best, series.time_of(best)};
}

}  // namespace pvseg
