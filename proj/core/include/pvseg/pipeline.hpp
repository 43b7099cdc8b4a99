#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pvseg/config.hpp"
#include "pvseg/timeline.hpp"

namespace pvseg {

// File names written into RunConfig::output_dir.
namespace outputs {
inline constexpr const char* kConfigEcho = "config.resolved";
inline constexpr const char* kFeatures = "features.csv";
inline constexpr const char* kAudioSegments = "audio_segments.csv";
inline constexpr const char* kAudioBoundaries = "audio_boundaries.csv";
inline constexpr const char* kAudioActivity = "audio_activity.csv";
inline constexpr const char* kHistogramCache = "histograms.pvhist";
inline constexpr const char* kVideoSegments = "video_segments.csv";
inline constexpr const char* kVideoBoundaries = "video_boundaries.csv";
inline constexpr const char* kVideoActivity = "video_activity.csv";
inline constexpr const char* kKeyframes = "keyframes.csv";
inline constexpr const char* kPhraseHits = "phrase_hits.csv";
inline constexpr const char* kClusters = "clusters.csv";
inline constexpr const char* kHints = "hints.csv";
inline constexpr const char* kTimeline = "timeline.json";
inline constexpr const char* kSvg = "timeline.svg";
}  // namespace outputs

/// One line per stage outcome, for the CLI to print.
using StageLog = std::vector<std::string>;

// Each stage reads its inputs from the config and from files earlier stages
// left in output_dir, and writes its own files plus the resolved config echo.
void run_segment_audio(const RunConfig& cfg, StageLog& log);
void run_segment_video(const RunConfig& cfg, StageLog& log);
void run_index_text(const RunConfig& cfg, StageLog& log);
void run_cluster(const RunConfig& cfg, StageLog& log);
TimelineDoc run_build_timeline(const RunConfig& cfg, StageLog& log);
void run_render(const RunConfig& cfg, StageLog& log);

/// All stages the configured inputs allow. Throws Error{invalid_argument}
/// when neither audio nor video input is configured.
void run_analyze(const RunConfig& cfg, StageLog& log);

}  // namespace pvseg
