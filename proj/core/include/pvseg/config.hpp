#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pvseg/bic.hpp"
#include "pvseg/features.hpp"
#include "pvseg/histogram.hpp"
#include "pvseg/shots.hpp"
#include "pvseg/timeline.hpp"

namespace pvseg {

/// Everything a pipeline run needs. Settings come from defaults, then a flat
/// `key = value` file, then command-line overrides.
struct RunConfig {
  std::optional<std::filesystem::path> audio;
  std::optional<std::filesystem::path> frames;      // directory of PGM/PPM or a .y4m stream
  std::optional<std::filesystem::path> histograms;  // PVHIST cache
  std::optional<std::filesystem::path> transcript;
  std::optional<std::filesystem::path> theme_list;  // defaults to the built-in list
  std::optional<std::filesystem::path> slides;
  std::optional<std::filesystem::path> doc;         // render: timeline JSON, default <output>/timeline.json
  std::filesystem::path output_dir = "pvseg_out";
  std::string video_id;

  double fps = 25.0;            // frame directories without a rate of their own
  double timeline_fps = 29.97;  // pixel mapping for audio-only runs

  FramingConfig framing;
  BicConfig bic;
  ShotConfig shots;
  int hist_bins = 512;
  ColorSpace color_space = ColorSpace::rgb;

  double match_threshold = 0.75;
  std::optional<double> transcript_duration_s;
  double audio_bin_s = 0.1;

  double cluster_lambda = 1.0;
  double hint_cv_threshold = 0.3;
  double hint_bias = -0.0;

  TimelineOptions timeline;
  bool dump_features = false;
  unsigned threads = 1;
};

/// Names accepted by apply_setting, in the order they are echoed.
const std::vector<std::string>& config_keys();

/// Throws Error{invalid_argument} for unknown keys or unparsable values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// `key = value` lines; '#' starts a comment. Throws Error{malformed_line}.
void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view origin = "config");
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Fully resolved settings as `key=value` lines (unset paths are empty).
std::string resolved_config_text(const RunConfig& cfg);

}  // namespace pvseg
