#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pvseg/audio.hpp"
#include "pvseg/features.hpp"
#include "pvseg/segment.hpp"

namespace pvseg {

struct Cluster {
  int id = 0;
  std::vector<std::size_t> members;  // indices into the clustered segment list, ascending
  std::optional<std::string> label;
};

/// Adjacent audio segments whose video activity stays steady across both.
struct MotionHint {
  std::size_t first = 0;
  std::size_t second = 0;  // always first + 1
  double cv = 0.0;
};

struct ClusterOptions {
  double lambda = 1.0;
  /// Added to the merge dBIC of cluster pairs linked by a hint. Negative values
  /// favour merging; the default leaves hints advisory.
  double hint_bias = -0.0;
  std::vector<MotionHint> hints;
};

/// Feature frames whose t_start lies in [segment.t_start, segment.t_end).
std::span<const FeatureFrame> frames_in(const Segment& segment, const FeatureSequence& features);

/// dBIC of `a` followed by `b`, split at the junction.
double merge_delta(std::span<const FeatureFrame> a, std::span<const FeatureFrame> b, double lambda);

/// Greedy bottom-up clustering: repeatedly merge the cluster pair with the most
/// negative merge dBIC (lowest (i, j) on ties) until no pair is below zero.
/// Cluster ids are assigned in order of each cluster's earliest member.
///
/// Throws Error{insufficient_samples} when a segment has fewer than 28 frames.
std::vector<Cluster> cluster_segments(std::span<const Segment> segments, const FeatureSequence& features,
                                      const ClusterOptions& options = {});
std::vector<Cluster> cluster_segments(std::span<const Segment> segments, const FeatureSequence& features,
                                      double lambda);

/// For each adjacent pair, the coefficient of variation (stdev / mean) of the
/// activity bins starting inside the pair's union span; a hint is emitted
/// when it is below `cv_threshold`. All-zero activity counts as cv = 0.
std::vector<MotionHint> motion_consistency_hints(std::span<const Segment> audio_segments,
                                                 const ActivityGraph& activity,
                                                 double cv_threshold = 0.3);

enum class AudioLabel { female, male, film, silence, unlabeled };

std::string_view to_string(AudioLabel label) noexcept;
std::optional<AudioLabel> parse_audio_label(std::string_view text) noexcept;

struct LabeledClip {
  std::string id;
  AudioLabel label = AudioLabel::unlabeled;
  AudioClip clip;
};

using CoefficientPair = std::pair<int, int>;

inline const std::vector<CoefficientPair>& default_scatter_pairs() {
  static const std::vector<CoefficientPair> pairs{{1, 2}, {2, 3}, {3, 4}};
  return pairs;
}

struct ScatterPoint {
  std::string clip_id;
  AudioLabel label = AudioLabel::unlabeled;
  double x = 0.0;
  double y = 0.0;
};

struct ScatterSet {
  CoefficientPair pair;
  std::vector<ScatterPoint> points;
};

/// Mean MFCC values per clip for each coefficient pair (indices 1..12).
/// An empty `pairs` selects the defaults (1,2), (2,3), (3,4).
std::vector<ScatterSet> mfcc_scatter(std::span<const LabeledClip> clips,
                                     std::span<const CoefficientPair> pairs = {},
                                     const FramingConfig& framing = {});

void write_cluster_csv(const std::filesystem::path& path, std::span<const Segment> segments,
                       std::span<const Cluster> clusters);
void write_scatter_csv(const std::filesystem::path& path, std::span<const ScatterSet> sets);
void write_hints_csv(const std::filesystem::path& path, std::span<const Segment> segments,
                     std::span<const MotionHint> hints);

}  // namespace pvseg
