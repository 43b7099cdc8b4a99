#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pvseg/error.hpp"
#include "pvseg/numfmt.hpp"
#include "pvseg/timeline.hpp"

namespace pvseg {
namespace {

struct Band {
  double y;
  double height;
};

// Fixed vertical layout, top to bottom in row order.
constexpr Band kThumbBand{0, 70};
constexpr Band kMarkerBand{70, 30};
constexpr Band kVideoBand{100, 60};
constexpr Band kAudioBand{160, 60};
constexpr Band kThemeBand{220, 30};
constexpr Band kTopicBand{250, 30};
constexpr double kTotalHeight = 280;

std::string num(double v) { return format_double(std::round(v * 100.0) / 100.0); }

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Max-pools activity bins into one value per pixel column.
std::vector<double> pooled(const TimelineDoc& doc, const ActivityTrack& track) {
  std::vector<double> cols(static_cast<std::size_t>(std::max<long>(doc.width_px, 1)), 0.0);
  for (std::size_t i = 0; i < track.values.size(); ++i) {
    const long x = doc.to_x((static_cast<double>(i) + 0.5) * track.bin_duration_s);
    const auto col = static_cast<std::size_t>(std::clamp<long>(x, 0, static_cast<long>(cols.size()) - 1));
    cols[col] = std::max(cols[col], track.values[i]);
  }
  return cols;
}

void media_row(std::ostringstream& svg, const TimelineDoc& doc, const MediaRow& row, Band band,
               const char* id, const char* color) {
  if (row.empty()) return;
  svg << "<g id=\"" << id << "\">\n";
  bool shade = false;
  for (const auto& s : row.segments) {
    svg << "<rect x=\"" << s.x0 << "\" y=\"" << num(band.y) << "\" width=\"" << std::max<long>(s.x1 - s.x0, 1)
        << "\" height=\"" << num(band.height) << "\" fill=\"" << (shade ? "#e8e8e8" : "#f8f8f8")
        << "\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n";
    shade = !shade;
  }
  if (row.activity && !row.activity->values.empty()) {
    const auto cols = pooled(doc, *row.activity);
    const double peak = *std::max_element(cols.begin(), cols.end());
    const double scale = peak > 0 ? (band.height - 4) / peak : 0.0;
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
    for (std::size_t x = 0; x < cols.size(); ++x) {
      if (x) svg << ' ';
      svg << x << ',' << num(band.y + band.height - 2 - cols[x] * scale);
    }
    svg << "\"/>\n";
  }
  svg << "</g>\n";
}

void phrase_row(std::ostringstream& svg, std::span<const PhraseItem> items, Band band, const char* id) {
  if (items.empty()) return;
  svg << "<g id=\"" << id << "\">\n";
  for (const auto& p : items) {
    svg << "<rect x=\"" << p.x0 << "\" y=\"" << num(band.y + 2) << "\" width=\""
        << std::max<long>(p.x1 - p.x0, 2) << "\" height=\"" << num(band.height - 4)
        << "\" fill=\"yellow\" fill-opacity=\"0.8\" stroke=\"#b8a000\" stroke-width=\"0.5\"><title>"
        << escape(p.phrase) << "</title></rect>\n";
    svg << "<text x=\"" << p.x0 << "\" y=\"" << num(band.y + band.height - 9)
        << "\" font-size=\"9\" font-family=\"sans-serif\">" << escape(p.phrase) << "</text>\n";
  }
  svg << "</g>\n";
}

}  // namespace

std::string render_svg(const TimelineDoc& doc) {
  const long width = std::max<long>(doc.width_px, 1);
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" "
         "version=\"1.1\" width=\""
      << width << "\" height=\"" << num(kTotalHeight) << "\" viewBox=\"0 0 " << width << ' '
      << num(kTotalHeight) << "\">\n"
      << "<title>" << escape(doc.video_id) << "</title>\n";

  if (!doc.thumbnails.empty()) {
    svg << "<g id=\"thumbnails\">\n";
    for (const auto& t : doc.thumbnails) {
      svg << "<image x=\"" << t.x0 << "\" y=\"" << num(kThumbBand.y + 5) << "\" width=\"" << t.width_px
          << "\" height=\"" << num(kThumbBand.height - 10) << "\" preserveAspectRatio=\"xMidYMid meet\" xlink:href=\""
          << escape(t.image) << "\"/>\n"
          << "<rect x=\"" << t.x0 << "\" y=\"" << num(kThumbBand.y + 5) << "\" width=\"" << t.width_px
          << "\" height=\"" << num(kThumbBand.height - 10) << "\" fill=\"none\" stroke=\"#333333\"/>\n";
    }
    svg << "</g>\n";
  }

  svg << "<g id=\"markers\">\n"
      << "<line x1=\"0\" y1=\"" << num(kMarkerBand.y + kMarkerBand.height - 1) << "\" x2=\"" << width
      << "\" y2=\"" << num(kMarkerBand.y + kMarkerBand.height - 1) << "\" stroke=\"black\"/>\n";
  for (const auto& m : doc.markers) {
    svg << "<line x1=\"" << m.x << "\" y1=\"" << num(kMarkerBand.y + 14) << "\" x2=\"" << m.x << "\" y2=\""
        << num(kMarkerBand.y + kMarkerBand.height) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << m.x + 2 << "\" y=\"" << num(kMarkerBand.y + 11)
        << "\" font-size=\"9\" font-family=\"sans-serif\">" << m.label << "</text>\n";
  }
  for (const auto& b : doc.boundaries) {
    svg << "<line class=\"boundary " << to_string(b.kind) << "\" x1=\"" << b.x << "\" y1=\""
        << num(kMarkerBand.y) << "\" x2=\"" << b.x << "\" y2=\"" << num(kAudioBand.y + kAudioBand.height)
        << "\" stroke=\"" << (b.kind == MediaKind::video ? "#800000" : "#006400") << "\" stroke-width=\"1\"/>\n";
  }
  svg << "</g>\n";

  media_row(svg, doc, doc.video, kVideoBand, "video", "red");
  media_row(svg, doc, doc.audio, kAudioBand, "audio", "green");
  phrase_row(svg, doc.theme_phrases, kThemeBand, "theme_phrases");
  phrase_row(svg, doc.topic_phrases, kTopicBand, "topic_phrases");
  svg << "</svg>\n";
  return svg.str();
}

void render_static(const TimelineDoc& doc, const std::filesystem::path& path) {
  const auto text = render_svg(doc);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::io_failure, "short write to " + path.string());
}

}  // namespace pvseg
