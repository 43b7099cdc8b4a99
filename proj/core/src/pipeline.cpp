#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "pvseg/audio.hpp"
#include "pvseg/bic.hpp"
#include "pvseg/error.hpp"
#include "pvseg/features.hpp"
#include "pvseg/frames.hpp"
#include "pvseg/histogram.hpp"
#include "pvseg/numfmt.hpp"
#include "pvseg/pipeline.hpp"
#include "pvseg/shots.hpp"
#include "pvseg/speaker_analysis.hpp"
#include "pvseg/stage_io.hpp"
#include "pvseg/text_index.hpp"

namespace pvseg {
namespace fs = std::filesystem;
namespace {

fs::path out_path(const RunConfig& cfg, const char* name) { return cfg.output_dir / name; }

void prepare_output(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec || !fs::is_directory(cfg.output_dir))
    throw Error(Errc::io_failure, "cannot create output directory " + cfg.output_dir.string());
  std::ofstream echo(out_path(cfg, outputs::kConfigEcho), std::ios::binary);
  if (!echo) throw Error(Errc::io_failure, "output directory is not writable: " + cfg.output_dir.string());
  echo << resolved_config_text(cfg);
}

void require_input(const std::optional<fs::path>& p, const char* what) {
  if (p && !fs::exists(*p)) throw Error(Errc::io_failure, std::string(what) + " not found: " + p->string());
}

double read_cache_fps(const fs::path& cache) {
  std::ifstream in(cache, std::ios::binary);
  std::string header;
  if (!in || !std::getline(in, header)) throw Error(Errc::io_failure, "cannot read " + cache.string());
  const auto pos = header.find("fps=");
  if (pos == std::string::npos) throw Error(Errc::malformed_line, "no fps in " + cache.string());
  const auto end = header.find(' ', pos);
  const auto fps = parse_double(std::string_view(header).substr(pos + 4, end == std::string::npos ? std::string::npos : end - pos - 4));
  if (!fps || !(*fps > 0)) throw Error(Errc::malformed_line, "bad fps in " + cache.string());
  return *fps;
}

std::string default_video_id(const RunConfig& cfg) {
  if (!cfg.video_id.empty()) return cfg.video_id;
  for (const auto* p : {&cfg.audio, &cfg.frames, &cfg.histograms})
    if (*p) return (*p)->stem().string();
  return cfg.output_dir.filename().string();
}

FeatureSequence load_features(const RunConfig& cfg) {
  const auto dumped = out_path(cfg, outputs::kFeatures);
  if (cfg.audio) return extract_features(read_wav(*cfg.audio), cfg.framing, cfg.threads);
  if (fs::exists(dumped)) return read_feature_csv(dumped);
  throw Error(Errc::missing_dependency, "clustering needs --audio or a " + std::string(outputs::kFeatures) +
                                            " from segment-audio --dump-features");
}

}  // namespace

void run_segment_audio(const RunConfig& cfg, StageLog& log) {
  if (!cfg.audio) throw Error(Errc::invalid_argument, "segment-audio needs an audio input");
  require_input(cfg.audio, "audio");
  prepare_output(cfg);

  const AudioClip clip = read_wav(*cfg.audio);
  const FeatureSequence features = extract_features(clip, cfg.framing, cfg.threads);
  const auto boundaries = detect_speaker_changes(features, cfg.bic, cfg.threads);
  const auto segments = segments_from_boundaries(boundaries, clip.duration_s(), MediaKind::audio);

  write_boundaries_csv(out_path(cfg, outputs::kAudioBoundaries), MediaKind::audio, boundaries);
  write_segments_csv(out_path(cfg, outputs::kAudioSegments), segments);
  write_activity_csv(out_path(cfg, outputs::kAudioActivity), amplitude_envelope(clip, cfg.audio_bin_s));
  if (cfg.dump_features) write_feature_csv(out_path(cfg, outputs::kFeatures), features);
  log.push_back("segment-audio: " + std::to_string(features.frames.size()) + " feature frames, " +
                std::to_string(boundaries.size()) + " speaker changes, " + std::to_string(segments.size()) +
                " segments");
}

void run_segment_video(const RunConfig& cfg, StageLog& log) {
  if (!cfg.frames && !cfg.histograms)
    throw Error(Errc::invalid_argument, "segment-video needs frames or a histogram cache");
  require_input(cfg.frames, "frames");
  require_input(cfg.histograms, "histogram cache");
  prepare_output(cfg);

  std::optional<FrameSequence> frames;
  HistogramSeries series;
  if (cfg.frames) {
    frames = read_frames(*cfg.frames, cfg.fps);
    series = compute_histograms(*frames, cfg.hist_bins, cfg.color_space, cfg.threads);
  } else {
    series = read_histogram_cache(*cfg.histograms);
  }
  write_histogram_cache(out_path(cfg, outputs::kHistogramCache), series);

  const auto boundaries = detect_shots(series, cfg.shots);
  auto segments = segments_from_boundaries(boundaries, series.duration_s(), MediaKind::video);
  std::vector<KeyframeRef> keyframes;
  for (auto& s : segments) {
    s.keyframe = select_keyframe(series, s);
    keyframes.push_back(*s.keyframe);
  }

  write_boundaries_csv(out_path(cfg, outputs::kVideoBoundaries), MediaKind::video, boundaries);
  write_segments_csv(out_path(cfg, outputs::kVideoSegments), segments);
  write_activity_csv(out_path(cfg, outputs::kVideoActivity), video_activity(series));
  write_keyframes_csv(out_path(cfg, outputs::kKeyframes), keyframes);
  if (frames) {
    const fs::path dir = cfg.output_dir / cfg.timeline.keyframe_dir;
    fs::create_directories(dir);
    for (const auto& k : keyframes) write_pnm(dir / keyframe_file_name(k.frame_index), frames->frames[k.frame_index]);
  }
  log.push_back("segment-video: " + std::to_string(series.size()) + " frames, " +
                std::to_string(boundaries.size()) + " shot boundaries, " + std::to_string(segments.size()) +
                " segments");
}

void run_index_text(const RunConfig& cfg, StageLog& log) {
  if (!cfg.transcript) throw Error(Errc::invalid_argument, "index-text needs a transcript");
  require_input(cfg.transcript, "transcript");
  require_input(cfg.theme_list, "theme list");
  require_input(cfg.slides, "slide text");
  prepare_output(cfg);

  std::optional<double> span = cfg.transcript_duration_s;
  if (!span && cfg.audio && fs::exists(*cfg.audio)) span = read_wav(*cfg.audio).duration_s();
  const auto tokens = load_transcript(*cfg.transcript, span);

  const PhraseList themes = cfg.theme_list ? load_phrase_list(*cfg.theme_list, PhraseKind::theme)
                                           : default_theme_phrases();
  auto hits = filter_phrases(tokens, themes, cfg.match_threshold);
  std::size_t topic_count = 0;
  if (cfg.slides) {
    const auto topics = filter_phrases(tokens, load_slide_phrases(*cfg.slides), cfg.match_threshold);
    topic_count = topics.size();
    hits.insert(hits.end(), topics.begin(), topics.end());
  }
  write_hits_csv(out_path(cfg, outputs::kPhraseHits), hits);
  log.push_back("index-text: " + std::to_string(tokens.size()) + " tokens, " +
                std::to_string(hits.size() - topic_count) + " theme hits, " + std::to_string(topic_count) +
                " topic hits");
}

void run_cluster(const RunConfig& cfg, StageLog& log) {
  const auto seg_file = out_path(cfg, outputs::kAudioSegments);
  if (!fs::exists(seg_file))
    throw Error(Errc::missing_dependency, "cluster needs " + seg_file.string() + "; run segment-audio first");
  require_input(cfg.audio, "audio");
  prepare_output(cfg);

  const auto segments = read_segments_csv(seg_file);
  const auto features = load_features(cfg);

  ClusterOptions options;
  options.lambda = cfg.cluster_lambda;
  options.hint_bias = cfg.hint_bias;
  const auto activity_file = out_path(cfg, outputs::kVideoActivity);
  if (fs::exists(activity_file)) {
    options.hints = motion_consistency_hints(segments, read_activity_csv(activity_file), cfg.hint_cv_threshold);
    write_hints_csv(out_path(cfg, outputs::kHints), segments, options.hints);
  }
  const auto clusters = cluster_segments(segments, features, options);
  write_cluster_csv(out_path(cfg, outputs::kClusters), segments, clusters);
  log.push_back("cluster: " + std::to_string(segments.size()) + " segments in " +
                std::to_string(clusters.size()) + " clusters, " + std::to_string(options.hints.size()) +
                " motion hints");
}

TimelineDoc run_build_timeline(const RunConfig& cfg, StageLog& log) {
  prepare_output(cfg);
  TimelineInputs in;
  in.video_id = default_video_id(cfg);
  in.fps = cfg.timeline_fps;

  const auto file = [&](const char* name) { return out_path(cfg, name); };
  const auto present = [&](const char* name) { return fs::exists(file(name)); };

  if (present(outputs::kAudioSegments)) {
    in.audio_segments = read_segments_csv(file(outputs::kAudioSegments));
    if (present(outputs::kClusters)) {
      std::map<double, int> by_start;
      for (const auto& [t, id] : read_cluster_csv(file(outputs::kClusters))) by_start[t] = id;
      for (auto& s : in.audio_segments)
        if (const auto it = by_start.find(s.t_start); it != by_start.end()) s.cluster_id = it->second;
    }
  }
  if (present(outputs::kAudioActivity)) in.audio_activity = read_activity_csv(file(outputs::kAudioActivity));
  if (present(outputs::kVideoSegments)) {
    in.video_segments = read_segments_csv(file(outputs::kVideoSegments));
    if (present(outputs::kHistogramCache)) in.fps = read_cache_fps(file(outputs::kHistogramCache));
  }
  if (present(outputs::kVideoActivity)) in.video_activity = read_activity_csv(file(outputs::kVideoActivity));
  if (present(outputs::kKeyframes)) {
    for (const auto& k : read_keyframes_csv(file(outputs::kKeyframes)))
      if (fs::exists(cfg.output_dir / cfg.timeline.keyframe_dir / keyframe_file_name(k.frame_index)))
        in.keyframes.push_back(k);
  }
  if (present(outputs::kPhraseHits)) {
    for (auto& h : read_hits_csv(file(outputs::kPhraseHits)))
      (h.kind == PhraseKind::theme ? in.theme_hits : in.topic_hits).push_back(std::move(h));
  }

  if (in.audio_segments.empty() && in.video_segments.empty())
    throw Error(Errc::missing_dependency, "timeline needs audio or video segments in " + cfg.output_dir.string());
  for (const auto* segs : {&in.audio_segments, &in.video_segments})
    if (!segs->empty()) in.duration_s = std::max(in.duration_s, segs->back().t_end);

  const TimelineDoc doc = build_timeline(in, cfg.timeline);
  export_doc(doc, file(outputs::kTimeline));
  log.push_back("timeline: " + std::to_string(doc.width_px) + " px at " + format_double(doc.frames_per_pixel) +
                " frames/pixel, " + std::to_string(doc.thumbnails.size()) + " thumbnails");
  return doc;
}

void run_render(const RunConfig& cfg, StageLog& log) {
  const fs::path doc_path = cfg.doc ? *cfg.doc : out_path(cfg, outputs::kTimeline);
  if (!fs::exists(doc_path))
    throw Error(Errc::missing_dependency, "render needs " + doc_path.string());
  prepare_output(cfg);
  render_static(import_doc(doc_path), out_path(cfg, outputs::kSvg));
  log.push_back("render: wrote " + out_path(cfg, outputs::kSvg).string());
}

void run_analyze(const RunConfig& cfg, StageLog& log) {
  if (!cfg.audio && !cfg.frames && !cfg.histograms)
    throw Error(Errc::invalid_argument, "analyze needs at least one of audio, frames or histograms");
  prepare_output(cfg);

  if (cfg.audio) run_segment_audio(cfg, log);
  if (cfg.frames || cfg.histograms) run_segment_video(cfg, log);
  if (cfg.transcript) run_index_text(cfg, log);
  if (cfg.audio) {
    try {
      run_cluster(cfg, log);
    } catch (const Error& e) {
      if (e.code() != Errc::insufficient_samples) throw;
      fs::remove(out_path(cfg, outputs::kClusters));
      fs::remove(out_path(cfg, outputs::kHints));
      log.push_back(std::string("cluster: skipped (") + e.what() + ")");
    }
  }
  run_build_timeline(cfg, log);
  run_render(cfg, log);
}

}  // namespace pvseg
