#include <string>

#include "pvseg/error.hpp"
#include "pvseg/numfmt.hpp"
#include "pvseg/segment.hpp"

namespace pvseg {

std::string_view to_string(MediaKind kind) noexcept {
  return kind == MediaKind::audio ? "audio" : "video";
}

std::optional<MediaKind> parse_media_kind(std::string_view text) noexcept {
  if (text == "audio") return MediaKind::audio;
  if (text == "video") return MediaKind::video;
  return std::nullopt;
}

std::vector<Segment> segments_from_boundaries(std::span<const Boundary> boundaries,
                                              double total_duration, MediaKind kind) {
  if (!(total_duration > 0.0))
    throw Error(Errc::invalid_argument, "total duration must be positive");
  double prev = 0.0;
  for (const auto& b : boundaries) {
    if (!(b.t > prev) || !(b.t < total_duration))
      throw Error(Errc::unsorted_boundaries,
                  "boundary at " + format_double(b.t) + " after " + format_double(prev));
    prev = b.t;
  }

  std::vector<Segment> out;
  out.reserve(boundaries.size() + 1);
  double start = 0.0;
  double score = 0.0;
  for (const auto& b : boundaries) {
    out.push_back(Segment{kind, start, b.t, score, std::nullopt, std::nullopt});
    start = b.t;
    score = b.score;
  }
  out.push_back(Segment{kind, start, total_duration, score, std::nullopt, std::nullopt});
  return out;
}

}  // namespace pvseg
