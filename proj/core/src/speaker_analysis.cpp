#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>

#include "gaussian_stats.hpp"
#include "pvseg/bic.hpp"
#include "pvseg/error.hpp"
#include "pvseg/numfmt.hpp"
#include "pvseg/speaker_analysis.hpp"
#include "pvseg/stage_io.hpp"

namespace pvseg {
namespace {

constexpr std::size_t kMinSegmentFrames = 2 * (kMfccCount + 1);

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
  return out;
}

}  // namespace

std::span<const FeatureFrame> frames_in(const Segment& segment, const FeatureSequence& features) {
  const auto& f = features.frames;
  const auto by_time = [](const FeatureFrame& fr, double t) { return fr.t_start < t; };
  const auto lo = std::lower_bound(f.begin(), f.end(), segment.t_start, by_time);
  const auto hi = std::lower_bound(lo, f.end(), segment.t_end, by_time);
  return {lo, hi};
}

double merge_delta(std::span<const FeatureFrame> a, std::span<const FeatureFrame> b, double lambda) {
  std::vector<FeatureFrame> joined(a.begin(), a.end());
  joined.insert(joined.end(), b.begin(), b.end());
  return bic_delta(joined, a.size(), lambda);
}

std::vector<Cluster> cluster_segments(std::span<const Segment> segments, const FeatureSequence& features,
                                      double lambda) {
  ClusterOptions options;
  options.lambda = lambda;
  return cluster_segments(segments, features, options);
}

std::vector<Cluster> cluster_segments(std::span<const Segment> segments, const FeatureSequence& features,
                                      const ClusterOptions& options) {
  using detail::GaussianStats;
  const std::size_t k = segments.size();
  if (k == 0) return {};

  std::vector<GaussianStats> stats(k);
  const FeatureFrame* reference = nullptr;
  for (std::size_t i = 0; i < k; ++i) {
    const auto frames = frames_in(segments[i], features);
    if (frames.size() < kMinSegmentFrames)
      throw Error(Errc::insufficient_samples,
                  "segment " + std::to_string(i) + " [" + format_double(segments[i].t_start) + ", " +
                      format_double(segments[i].t_end) + ") has " + std::to_string(frames.size()) +
                      " frames, needs " + std::to_string(kMinSegmentFrames));
    if (!reference) reference = &frames.front();
    for (const auto& f : frames) stats[i].add(detail::to_vec(f, *reference));
  }

  std::vector<std::vector<bool>> hinted(k, std::vector<bool>(k, false));
  for (const auto& h : options.hints) {
    if (h.first < k && h.second < k) hinted[h.first][h.second] = hinted[h.second][h.first] = true;
  }

  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < k; ++i) members[i] = {i};
  std::vector<bool> active(k, true);

  const auto linked = [&](std::size_t a, std::size_t b) {
    for (std::size_t x : members[a])
      for (std::size_t y : members[b])
        if (hinted[x][y]) return true;
    return false;
  };
  const auto score = [&](std::size_t a, std::size_t b) {
    const GaussianStats whole = stats[a] + stats[b];
    double d = detail::data_term(whole, stats[a], stats[b]) -
               options.lambda * bic_penalty(kMfccCount, whole.n);
    if (options.hint_bias != 0.0 && linked(a, b)) d += options.hint_bias;
    return d;
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> delta(k, std::vector<double>(k, inf));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) delta[i][j] = score(i, j);

  for (;;) {
    double best = 0.0;
    std::size_t bi = k, bj = k;
    for (std::size_t i = 0; i < k; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < k; ++j) {
        if (active[j] && delta[i][j] < best) {
          best = delta[i][j];
          bi = i;
          bj = j;
        }
      }
    }
    if (bi == k) break;

    stats[bi] = stats[bi] + stats[bj];
    members[bi].insert(members[bi].end(), members[bj].begin(), members[bj].end());
    std::sort(members[bi].begin(), members[bi].end());
    members[bj].clear();
    active[bj] = false;
    for (std::size_t o = 0; o < k; ++o) {
      if (!active[o] || o == bi) continue;
      const auto [lo, hi] = std::minmax(o, bi);
      delta[lo][hi] = score(lo, hi);
    }
  }

  std::vector<Cluster> out;
  for (std::size_t i = 0; i < k; ++i)
    if (active[i]) out.push_back(Cluster{0, members[i], std::nullopt});
  std::sort(out.begin(), out.end(), [&](const Cluster& a, const Cluster& b) {
    return segments[a.members.front()].t_start < segments[b.members.front()].t_start ||
           (segments[a.members.front()].t_start == segments[b.members.front()].t_start &&
            a.members.front() < b.members.front());
  });
  for (std::size_t c = 0; c < out.size(); ++c) out[c].id = static_cast<int>(c);
  return out;
}

std::vector<MotionHint> motion_consistency_hints(std::span<const Segment> audio_segments,
                                                 const ActivityGraph& activity, double cv_threshold) {
  std::vector<MotionHint> hints;
  if (audio_segments.size() < 2 || activity.values.empty()) return hints;
  if (!(activity.bin_duration_s > 0)) throw Error(Errc::invalid_argument, "activity bin duration must be positive");

  for (std::size_t i = 0; i + 1 < audio_segments.size(); ++i) {
    const double t0 = audio_segments[i].t_start;
    const double t1 = audio_segments[i + 1].t_end;
    const auto first = static_cast<std::size_t>(std::max(0.0, std::ceil(t0 / activity.bin_duration_s - 1e-9)));
    const auto last = std::min(activity.values.size(),
                               static_cast<std::size_t>(std::max(0.0, std::ceil(t1 / activity.bin_duration_s - 1e-9))));
    if (first >= last) continue;

    const double n = static_cast<double>(last - first);
    double mean = 0.0;
    for (std::size_t b = first; b < last; ++b) mean += activity.values[b];
    mean /= n;
    double var = 0.0;
    for (std::size_t b = first; b < last; ++b) var += (activity.values[b] - mean) * (activity.values[b] - mean);
    var /= n;
    const double cv = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
    if (cv < cv_threshold) hints.push_back({i, i + 1, cv});
  }
  return hints;
}

std::string_view to_string(AudioLabel label) noexcept {
  switch (label) {
    case AudioLabel::female: return "female";
    case AudioLabel::male: return "male";
    case AudioLabel::film: return "film";
    case AudioLabel::silence: return "silence";
    case AudioLabel::unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

std::optional<AudioLabel> parse_audio_label(std::string_view text) noexcept {
  for (auto l : {AudioLabel::female, AudioLabel::male, AudioLabel::film, AudioLabel::silence,
                 AudioLabel::unlabeled})
    if (to_string(l) == text) return l;
  return std::nullopt;
}

std::vector<ScatterSet> mfcc_scatter(std::span<const LabeledClip> clips,
                                     std::span<const CoefficientPair> pairs, const FramingConfig& framing) {
  if (pairs.empty()) pairs = default_scatter_pairs();
  for (const auto& [x, y] : pairs)
    if (x < 1 || x > 12 || y < 1 || y > 12)
      throw Error(Errc::invalid_argument, "coefficient indices must be in 1..12");

  std::vector<MfccVector> means;
  means.reserve(clips.size());
  for (const auto& c : clips) {
    const auto seq = extract_features(c.clip, framing);
    MfccVector m{};
    for (const auto& f : seq.frames)
      for (std::size_t i = 0; i < kMfccCount; ++i) m[i] += f.coeffs[i];
    for (double& v : m) v /= static_cast<double>(seq.frames.size());
    means.push_back(m);
  }

  std::vector<ScatterSet> out;
  for (const auto& pair : pairs) {
    ScatterSet set{pair, {}};
    for (std::size_t c = 0; c < clips.size(); ++c)
      set.points.push_back({clips[c].id, clips[c].label, means[c][static_cast<std::size_t>(pair.first)],
                            means[c][static_cast<std::size_t>(pair.second)]});
    out.push_back(std::move(set));
  }
  return out;
}

void write_cluster_csv(const std::filesystem::path& path, std::span<const Segment> segments,
                       std::span<const Cluster> clusters) {
  struct Row {
    int id;
    double t0, t1;
  };
  std::vector<Row> rows;
  for (const auto& c : clusters)
    for (std::size_t m : c.members) rows.push_back({c.id, segments[m].t_start, segments[m].t_end});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t0 < b.t0; });
  auto out = open_out(path);
  out << "cluster_id,t_start,t_end\n";
  for (const auto& r : rows) out << r.id << ',' << format_double(r.t0) << ',' << format_double(r.t1) << '\n';
}

void write_scatter_csv(const std::filesystem::path& path, std::span<const ScatterSet> sets) {
  auto out = open_out(path);
  out << "pair,clip_id,label,x,y\n";
  for (const auto& s : sets)
    for (const auto& p : s.points)
      out << s.pair.first << '-' << s.pair.second << ',' << csv_quote(p.clip_id) << ',' << to_string(p.label) << ','
          << format_double(p.x) << ',' << format_double(p.y) << '\n';
}

void write_hints_csv(const std::filesystem::path& path, std::span<const Segment> segments,
                     std::span<const MotionHint> hints) {
  auto out = open_out(path);
  out << "first_t_start,second_t_start,second_t_end,cv\n";
  for (const auto& h : hints)
    out << format_double(segments[h.first].t_start) << ',' << format_double(segments[h.second].t_start) << ','
        << format_double(segments[h.second].t_end) << ',' << format_double(h.cv) << '\n';
}

}  // namespace pvseg
