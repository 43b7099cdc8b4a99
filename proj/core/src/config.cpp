#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>

#include "pvseg/config.hpp"
#include "pvseg/error.hpp"
#include "pvseg/numfmt.hpp"

namespace pvseg {
namespace {

struct Setting {
  std::string key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(Errc::invalid_argument, "bad value '" + std::string(value) + "' for " + std::string(key));
}

double to_double(std::string_view key, std::string_view v) {
  const auto d = parse_double(v);
  if (!d) bad_value(key, v);
  return *d;
}

long long to_int(std::string_view key, std::string_view v) {
  const auto i = parse_int(v);
  if (!i) bad_value(key, v);
  return *i;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  bad_value(key, v);
}

std::string path_text(const std::optional<std::filesystem::path>& p) { return p ? p->string() : ""; }

std::optional<std::filesystem::path> to_path(std::string_view v) {
  if (v.empty()) return std::nullopt;
  return std::filesystem::path(std::string(v));
}

#define PVSEG_PATH(name)                                                         \
  Setting {                                                                      \
    #name, [](RunConfig& c, std::string_view v) { c.name = to_path(v); },        \
        [](const RunConfig& c) { return path_text(c.name); }                     \
  }
#define PVSEG_DOUBLE(name, member)                                                       \
  Setting {                                                                              \
    name, [](RunConfig& c, std::string_view v) { c.member = to_double(name, v); },       \
        [](const RunConfig& c) { return format_double(c.member); }                       \
  }

const std::vector<Setting>& settings() {
  static const std::vector<Setting> table{
      PVSEG_PATH(audio),
      PVSEG_PATH(frames),
      PVSEG_PATH(histograms),
      PVSEG_PATH(transcript),
      PVSEG_PATH(theme_list),
      PVSEG_PATH(slides),
      PVSEG_PATH(doc),
      Setting{"output_dir", [](RunConfig& c, std::string_view v) { c.output_dir = std::string(v); },
              [](const RunConfig& c) { return c.output_dir.string(); }},
      Setting{"video_id", [](RunConfig& c, std::string_view v) { c.video_id = std::string(v); },
              [](const RunConfig& c) { return c.video_id; }},
      PVSEG_DOUBLE("fps", fps),
      PVSEG_DOUBLE("timeline_fps", timeline_fps),
      PVSEG_DOUBLE("sets_per_second", framing.sets_per_second),
      Setting{"set_length",
              [](RunConfig& c, std::string_view v) {
                if (v == "auto" || v == "AUTO") c.framing.set_length = 0;
                else {
                  const auto n = to_int("set_length", v);
                  if (n < 0) bad_value("set_length", v);
                  c.framing.set_length = static_cast<std::size_t>(n);
                }
              },
              [](const RunConfig& c) {
                return c.framing.set_length ? std::to_string(c.framing.set_length) : std::string("auto");
              }},
      PVSEG_DOUBLE("bic_lambda", bic.lambda),
      PVSEG_DOUBLE("bic_initial_window_s", bic.initial_window_s),
      PVSEG_DOUBLE("bic_growth_step_s", bic.growth_step_s),
      PVSEG_DOUBLE("bic_max_window_s", bic.max_window_s),
      Setting{"bic_min_margin_frames",
              [](RunConfig& c, std::string_view v) {
                const auto n = to_int("bic_min_margin_frames", v);
                if (n < 0) bad_value("bic_min_margin_frames", v);
                c.bic.min_margin_frames = static_cast<std::size_t>(n);
              },
              [](const RunConfig& c) { return std::to_string(c.bic.min_margin_frames); }},
      PVSEG_DOUBLE("bic_clearance", bic.clearance),
      PVSEG_DOUBLE("shot_window_s", shots.window_s),
      PVSEG_DOUBLE("shot_deviation_k", shots.deviation_k),
      PVSEG_DOUBLE("shot_min_shot_s", shots.min_shot_s),
      Setting{"hist_bins",
              [](RunConfig& c, std::string_view v) {
                const auto n = to_int("hist_bins", v);
                if (n <= 0) bad_value("hist_bins", v);
                c.hist_bins = static_cast<int>(n);
              },
              [](const RunConfig& c) { return std::to_string(c.hist_bins); }},
      Setting{"color_space",
              [](RunConfig& c, std::string_view v) {
                if (v == "rgb") c.color_space = ColorSpace::rgb;
                else if (v == "gray") c.color_space = ColorSpace::gray;
                else bad_value("color_space", v);
              },
              [](const RunConfig& c) { return std::string(c.color_space == ColorSpace::rgb ? "rgb" : "gray"); }},
      PVSEG_DOUBLE("match_threshold", match_threshold),
      Setting{"transcript_duration_s",
              [](RunConfig& c, std::string_view v) {
                if (v.empty()) c.transcript_duration_s.reset();
                else c.transcript_duration_s = to_double("transcript_duration_s", v);
              },
              [](const RunConfig& c) {
                return c.transcript_duration_s ? format_double(*c.transcript_duration_s) : std::string();
              }},
      PVSEG_DOUBLE("audio_bin_s", audio_bin_s),
      PVSEG_DOUBLE("cluster_lambda", cluster_lambda),
      PVSEG_DOUBLE("hint_cv_threshold", hint_cv_threshold),
      PVSEG_DOUBLE("hint_bias", hint_bias),
      PVSEG_DOUBLE("frames_per_pixel", timeline.frames_per_pixel),
      Setting{"thumbnail_width_px",
              [](RunConfig& c, std::string_view v) { c.timeline.thumbnail_width_px = static_cast<long>(to_int("thumbnail_width_px", v)); },
              [](const RunConfig& c) { return std::to_string(c.timeline.thumbnail_width_px); }},
      PVSEG_DOUBLE("marker_interval_s", timeline.marker_interval_s),
      Setting{"dump_features", [](RunConfig& c, std::string_view v) { c.dump_features = to_bool("dump_features", v); },
              [](const RunConfig& c) { return std::string(c.dump_features ? "true" : "false"); }},
      Setting{"threads",
              [](RunConfig& c, std::string_view v) {
                const auto n = to_int("threads", v);
                if (n < 1) bad_value("threads", v);
                c.threads = static_cast<unsigned>(n);
              },
              [](const RunConfig& c) { return std::to_string(c.threads); }},
  };
  return table;
}

#undef PVSEG_PATH
#undef PVSEG_DOUBLE

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& s : settings()) k.push_back(s.key);
    return k;
  }();
  return keys;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  for (const auto& s : settings()) {
    if (s.key == key) {
      s.set(cfg, trim(value));
      return;
    }
  }
  throw Error(Errc::invalid_argument, "unknown setting '" + std::string(key) + "'");
}

void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view origin) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const auto body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::malformed_line, std::string(origin) + ":" + std::to_string(lineno) + ": expected key = value");
    apply_setting(cfg, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open config " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  apply_config_text(cfg, text, path.string());
}

std::string resolved_config_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& s : settings()) out += s.key + "=" + s.get(cfg) + "\n";
  return out;
}

}  // namespace pvseg
