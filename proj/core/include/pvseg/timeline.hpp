#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pvseg/segment.hpp"
#include "pvseg/text_index.hpp"

namespace pvseg {

inline constexpr int kTimelineSchemaVersion = 1;
inline constexpr double kMinFramesPerPixel = 1.0;
inline constexpr double kMaxFramesPerPixel = 30.0;

struct ThumbnailItem {
  double t_start = 0.0;
  double t_end = 0.0;
  long x0 = 0;
  long x1 = 0;
  long width_px = 0;
  std::size_t frame_index = 0;
  double t = 0.0;
  std::string image;  // relative to the document's directory

  bool operator==(const ThumbnailItem&) const = default;
};

struct MarkerItem {
  double t = 0.0;
  long x = 0;
  std::string label;

  bool operator==(const MarkerItem&) const = default;
};

struct BoundaryMark {
  double t = 0.0;
  long x = 0;
  MediaKind kind = MediaKind::audio;

  bool operator==(const BoundaryMark&) const = default;
};

struct SegmentItem {
  double t_start = 0.0;
  double t_end = 0.0;
  long x0 = 0;
  long x1 = 0;
  double score = 0.0;
  std::optional<int> cluster_id;

  bool operator==(const SegmentItem&) const = default;
};

struct ActivityTrack {
  double bin_duration_s = 0.0;
  std::vector<double> values;

  bool operator==(const ActivityTrack&) const = default;
};

struct MediaRow {
  std::vector<SegmentItem> segments;
  std::optional<ActivityTrack> activity;

  bool empty() const { return segments.empty() && !activity; }
  bool operator==(const MediaRow&) const = default;
};

struct PhraseItem {
  std::string phrase;
  double t_start = 0.0;
  double t_end = 0.0;
  long x0 = 0;
  long x1 = 0;
  double score = 0.0;

  bool operator==(const PhraseItem&) const = default;
};

/// Six-row timeline: thumbnails, markers + combined boundaries, video
/// segments + activity, audio segments + activity, theme phrases, topic
/// phrases. Every x is round(t * fps / frames_per_pixel).
struct TimelineDoc {
  std::string video_id;
  double duration_s = 0.0;
  double fps = 0.0;
  double frames_per_pixel = 28.0;
  long width_px = 0;
  long thumbnail_width_px = 80;
  double marker_interval_s = 60.0;

  std::vector<ThumbnailItem> thumbnails;
  std::vector<MarkerItem> markers;
  std::vector<BoundaryMark> boundaries;
  MediaRow video;
  MediaRow audio;
  std::vector<PhraseItem> theme_phrases;
  std::vector<PhraseItem> topic_phrases;

  long to_x(double t) const;
  bool operator==(const TimelineDoc&) const = default;
};

struct TimelineInputs {
  std::string video_id;
  double duration_s = 0.0;
  double fps = 29.97;
  std::vector<Segment> video_segments;
  std::vector<Segment> audio_segments;
  std::optional<ActivityGraph> video_activity;
  std::optional<ActivityGraph> audio_activity;
  std::vector<PhraseHit> theme_hits;
  std::vector<PhraseHit> topic_hits;
  std::vector<KeyframeRef> keyframes;
};

struct TimelineOptions {
  double frames_per_pixel = 28.0;
  long thumbnail_width_px = 80;
  double marker_interval_s = 60.0;
  std::string keyframe_dir = "keyframes";
};

/// File name used for a keyframe image inside TimelineOptions::keyframe_dir.
std::string keyframe_file_name(std::size_t frame_index);

/// Throws Error{scale_out_of_range} unless frames_per_pixel is in [1, 30].
TimelineDoc build_timeline(const TimelineInputs& inputs, const TimelineOptions& options = {});

std::string timeline_to_json(const TimelineDoc& doc);
TimelineDoc timeline_from_json(std::string_view text);
void export_doc(const TimelineDoc& doc, const std::filesystem::path& path);
TimelineDoc import_doc(const std::filesystem::path& path);

std::string render_svg(const TimelineDoc& doc);
void render_static(const TimelineDoc& doc, const std::filesystem::path& path);

}  // namespace pvseg
