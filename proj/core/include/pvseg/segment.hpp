#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pvseg {

enum class MediaKind { audio, video };

std::string_view to_string(MediaKind kind) noexcept;
std::optional<MediaKind> parse_media_kind(std::string_view text) noexcept;

/// Detected change point. `score` is the detector's strength at t (peak dBIC
/// for audio, deviation z-score for video) and is always positive.
struct Boundary {
  double t = 0.0;
  double score = 0.0;

  bool operator==(const Boundary&) const = default;
};

struct KeyframeRef {
  std::size_t frame_index = 0;
  double t = 0.0;

  bool operator==(const KeyframeRef&) const = default;
};

/// Half-open interval [t_start, t_end).
struct Segment {
  MediaKind kind = MediaKind::audio;
  double t_start = 0.0;
  double t_end = 0.0;
  double score = 0.0;  // score of the boundary that opened the segment; 0 for the first
  std::optional<int> cluster_id;
  std::optional<KeyframeRef> keyframe;

  double length() const { return t_end - t_start; }
  bool contains(double t) const { return t >= t_start && t < t_end; }
  bool operator==(const Segment&) const = default;
};

/// Per-bin activity curve: RMS amplitude for audio, adjacent-frame histogram
/// distance for video.
struct ActivityGraph {
  MediaKind kind = MediaKind::audio;
  double bin_duration_s = 0.0;
  std::vector<double> values;

  double duration_s() const { return bin_duration_s * static_cast<double>(values.size()); }
  bool operator==(const ActivityGraph&) const = default;
};

/// Partitions [0, total_duration) at the given boundaries.
/// Throws Error{unsorted_boundaries} unless boundaries are strictly increasing
/// and inside (0, total_duration).
std::vector<Segment> segments_from_boundaries(std::span<const Boundary> boundaries,
                                              double total_duration,
                                              MediaKind kind = MediaKind::audio);

}  // namespace pvseg
