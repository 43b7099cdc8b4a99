#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>

#include "pvseg/error.hpp"
#include "pvseg/numfmt.hpp"
#include "pvseg/timeline.hpp"

namespace pvseg {
namespace {

using nlohmann::json;

std::string clock_label(double t) {
  const long total = std::lround(t);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%ld:%02ld:%02ld", total / 3600, (total / 60) % 60, total % 60);
  return buf;
}

std::vector<PhraseItem> phrase_items(const TimelineDoc& doc, std::span<const PhraseHit> hits) {
  std::vector<PhraseItem> items;
  items.reserve(hits.size());
  for (const auto& h : hits)
    items.push_back({h.phrase, h.t_start, h.t_end, doc.to_x(h.t_start), doc.to_x(h.t_end), h.score});
  std::stable_sort(items.begin(), items.end(),
                   [](const PhraseItem& a, const PhraseItem& b) { return a.t_start < b.t_start; });
  return items;
}

MediaRow media_row(const TimelineDoc& doc, std::span<const Segment> segments,
                   const std::optional<ActivityGraph>& activity) {
  MediaRow row;
  for (const auto& s : segments)
    row.segments.push_back({s.t_start, s.t_end, doc.to_x(s.t_start), doc.to_x(s.t_end), s.score, s.cluster_id});
  if (activity) row.activity = ActivityTrack{activity->bin_duration_s, activity->values};
  return row;
}

// --- JSON -----------------------------------------------------------------

json segment_json(const SegmentItem& s) {
  json j{{"t_start", s.t_start}, {"t_end", s.t_end}, {"x0", s.x0}, {"x1", s.x1}, {"score", s.score}};
  if (s.cluster_id) j["cluster_id"] = *s.cluster_id;
  return j;
}

json row_json(const MediaRow& row) {
  json segs = json::array();
  for (const auto& s : row.segments) segs.push_back(segment_json(s));
  json j{{"segments", segs}};
  if (row.activity)
    j["activity"] = json{{"bin_duration_s", row.activity->bin_duration_s}, {"values", row.activity->values}};
  else
    j["activity"] = nullptr;
  return j;
}

json phrases_json(std::span<const PhraseItem> items) {
  json arr = json::array();
  for (const auto& p : items)
    arr.push_back({{"phrase", p.phrase}, {"t_start", p.t_start}, {"t_end", p.t_end},
                   {"x0", p.x0}, {"x1", p.x1}, {"score", p.score}});
  return arr;
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(Errc::malformed_container, std::string("timeline: missing key ") + key);
  return j.at(key).get<T>();
}

MediaRow row_from(const json& j) {
  MediaRow row;
  for (const auto& s : j.at("segments")) {
    SegmentItem item{field<double>(s, "t_start"), field<double>(s, "t_end"), field<long>(s, "x0"),
                     field<long>(s, "x1"), field<double>(s, "score"), std::nullopt};
    if (s.contains("cluster_id")) item.cluster_id = s.at("cluster_id").get<int>();
    row.segments.push_back(item);
  }
  if (j.contains("activity") && !j.at("activity").is_null()) {
    const auto& a = j.at("activity");
    row.activity = ActivityTrack{field<double>(a, "bin_duration_s"), field<std::vector<double>>(a, "values")};
  }
  return row;
}

std::vector<PhraseItem> phrases_from(const json& arr) {
  std::vector<PhraseItem> items;
  for (const auto& p : arr)
    items.push_back({field<std::string>(p, "phrase"), field<double>(p, "t_start"), field<double>(p, "t_end"),
                     field<long>(p, "x0"), field<long>(p, "x1"), field<double>(p, "score")});
  return items;
}

const json& row_by_id(const json& rows, std::string_view id) {
  for (const auto& r : rows)
    if (r.at("id").get<std::string>() == id) return r;
  throw Error(Errc::malformed_container, "timeline: missing row " + std::string(id));
}

}  // namespace

long TimelineDoc::to_x(double t) const { return std::lround(t * fps / frames_per_pixel); }

std::string keyframe_file_name(std::size_t frame_index) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "kf_%06zu.ppm", frame_index);
  return buf;
}

TimelineDoc build_timeline(const TimelineInputs& in, const TimelineOptions& options) {
  if (!(options.frames_per_pixel >= kMinFramesPerPixel && options.frames_per_pixel <= kMaxFramesPerPixel))
    throw Error(Errc::scale_out_of_range, "frames_per_pixel " + format_double(options.frames_per_pixel) +
                                              " outside [1, 30]");
  if (!(in.fps > 0)) throw Error(Errc::invalid_argument, "timeline fps must be positive");
  if (!(in.duration_s >= 0)) throw Error(Errc::invalid_argument, "timeline duration must be >= 0");
  if (!(options.marker_interval_s > 0)) throw Error(Errc::invalid_argument, "marker interval must be positive");

  TimelineDoc doc;
  doc.video_id = in.video_id;
  doc.duration_s = in.duration_s;
  doc.fps = in.fps;
  doc.frames_per_pixel = options.frames_per_pixel;
  doc.width_px = doc.to_x(in.duration_s);
  doc.thumbnail_width_px = options.thumbnail_width_px;
  doc.marker_interval_s = options.marker_interval_s;

  // Row 1: thumbnails for segments at least one thumbnail wide.
  for (const auto& s : in.video_segments) {
    const long x0 = doc.to_x(s.t_start), x1 = doc.to_x(s.t_end);
    if (x1 - x0 < options.thumbnail_width_px) continue;
    std::optional<KeyframeRef> kf = s.keyframe;
    if (!kf) {
      const auto it = std::find_if(in.keyframes.begin(), in.keyframes.end(),
                                   [&](const KeyframeRef& k) { return s.contains(k.t); });
      if (it != in.keyframes.end()) kf = *it;
    }
    if (!kf) continue;
    std::string image = options.keyframe_dir.empty()
                            ? keyframe_file_name(kf->frame_index)
                            : options.keyframe_dir + "/" + keyframe_file_name(kf->frame_index);
    doc.thumbnails.push_back(
        {s.t_start, s.t_end, x0, x1, options.thumbnail_width_px, kf->frame_index, kf->t, std::move(image)});
  }

  // Row 2: time markers plus the union of both segmentations' boundaries.
  const auto marker_count = static_cast<long>(std::floor(in.duration_s / options.marker_interval_s + 1e-9));
  for (long i = 0; i <= marker_count; ++i) {
    const double t = static_cast<double>(i) * options.marker_interval_s;
    doc.markers.push_back({t, doc.to_x(t), clock_label(t)});
  }
  const auto add_boundaries = [&](std::span<const Segment> segs, MediaKind kind) {
    for (std::size_t i = 1; i < segs.size(); ++i)
      doc.boundaries.push_back({segs[i].t_start, doc.to_x(segs[i].t_start), kind});
  };
  add_boundaries(in.video_segments, MediaKind::video);
  add_boundaries(in.audio_segments, MediaKind::audio);
  std::stable_sort(doc.boundaries.begin(), doc.boundaries.end(),
                   [](const BoundaryMark& a, const BoundaryMark& b) { return a.t < b.t; });

  doc.video = media_row(doc, in.video_segments, in.video_activity);
  doc.audio = media_row(doc, in.audio_segments, in.audio_activity);
  doc.theme_phrases = phrase_items(doc, in.theme_hits);
  doc.topic_phrases = phrase_items(doc, in.topic_hits);
  return doc;
}

std::string timeline_to_json(const TimelineDoc& doc) {
  json thumbs = json::array();
  for (const auto& t : doc.thumbnails)
    thumbs.push_back({{"t_start", t.t_start}, {"t_end", t.t_end}, {"x0", t.x0}, {"x1", t.x1},
                      {"width_px", t.width_px}, {"frame_index", t.frame_index}, {"t", t.t}, {"image", t.image}});
  json markers = json::array();
  for (const auto& m : doc.markers) markers.push_back({{"t", m.t}, {"x", m.x}, {"label", m.label}});
  json bounds = json::array();
  for (const auto& b : doc.boundaries)
    bounds.push_back({{"t", b.t}, {"x", b.x}, {"kind", std::string(to_string(b.kind))}});

  json video = row_json(doc.video);
  json audio = row_json(doc.audio);
  video["row"] = 3;
  video["id"] = "video";
  video["color"] = "red";
  audio["row"] = 4;
  audio["id"] = "audio";
  audio["color"] = "green";

  json rows = json::array({
      json{{"row", 1}, {"id", "thumbnails"}, {"items", thumbs}},
      json{{"row", 2}, {"id", "markers"}, {"items", markers}, {"boundaries", bounds}},
      video,
      audio,
      json{{"row", 5}, {"id", "theme_phrases"}, {"color", "yellow"}, {"items", phrases_json(doc.theme_phrases)}},
      json{{"row", 6}, {"id", "topic_phrases"}, {"color", "yellow"}, {"items", phrases_json(doc.topic_phrases)}},
  });

  json root{{"pvtl", kTimelineSchemaVersion},
            {"video_id", doc.video_id},
            {"duration_s", doc.duration_s},
            {"fps", doc.fps},
            {"frames_per_pixel", doc.frames_per_pixel},
            {"width_px", doc.width_px},
            {"thumbnail_width_px", doc.thumbnail_width_px},
            {"marker_interval_s", doc.marker_interval_s},
            {"rows", rows}};
  return root.dump(1) + "\n";
}

TimelineDoc timeline_from_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::malformed_container, std::string("timeline JSON: ") + e.what());
  }
  try {
    if (!root.contains("pvtl") || root.at("pvtl").get<int>() != kTimelineSchemaVersion)
      throw Error(Errc::unsupported_encoding, "timeline: unsupported pvtl version");
    TimelineDoc doc;
    doc.video_id = field<std::string>(root, "video_id");
    doc.duration_s = field<double>(root, "duration_s");
    doc.fps = field<double>(root, "fps");
    doc.frames_per_pixel = field<double>(root, "frames_per_pixel");
    doc.width_px = field<long>(root, "width_px");
    doc.thumbnail_width_px = field<long>(root, "thumbnail_width_px");
    doc.marker_interval_s = field<double>(root, "marker_interval_s");
    const json& rows = root.at("rows");

    for (const auto& t : row_by_id(rows, "thumbnails").at("items"))
      doc.thumbnails.push_back({field<double>(t, "t_start"), field<double>(t, "t_end"), field<long>(t, "x0"),
                                field<long>(t, "x1"), field<long>(t, "width_px"),
                                field<std::size_t>(t, "frame_index"), field<double>(t, "t"),
                                field<std::string>(t, "image")});
    const json& markers = row_by_id(rows, "markers");
    for (const auto& m : markers.at("items"))
      doc.markers.push_back({field<double>(m, "t"), field<long>(m, "x"), field<std::string>(m, "label")});
    for (const auto& b : markers.at("boundaries")) {
      const auto kind = parse_media_kind(field<std::string>(b, "kind"));
      if (!kind) throw Error(Errc::malformed_container, "timeline: bad boundary kind");
      doc.boundaries.push_back({field<double>(b, "t"), field<long>(b, "x"), *kind});
    }
    doc.video = row_from(row_by_id(rows, "video"));
    doc.audio = row_from(row_by_id(rows, "audio"));
    doc.theme_phrases = phrases_from(row_by_id(rows, "theme_phrases").at("items"));
    doc.topic_phrases = phrases_from(row_by_id(rows, "topic_phrases").at("items"));
    return doc;
  } catch (const json::exception& e) {
    throw Error(Errc::malformed_container, std::string("timeline JSON: ") + e.what());
  }
}

void export_doc(const TimelineDoc& doc, const std::filesystem::path& path) {
  const std::string text = timeline_to_json(doc);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::io_failure, "short write to " + path.string());
}

TimelineDoc import_doc(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return timeline_from_json(text);
}

}  // namespace pvseg
