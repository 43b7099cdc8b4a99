#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace pvseg {

/// 8-bit image, row-major, channels interleaved (1 = gray, 3 = RGB).
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> pixels;

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  bool operator==(const Image&) const = default;
};

struct FrameSequence {
  double fps = 0.0;
  int width = 0;
  int height = 0;
  std::vector<Image> frames;  // frame index == position

  double duration_s() const { return fps > 0 ? frames.size() / fps : 0.0; }
};

/// Reads a binary or ASCII PGM/PPM (P2, P3, P5, P6). maxval up to 255.
Image read_pnm(const std::filesystem::path& path);
/// Writes P5 for gray images and P6 for RGB.
void write_pnm(const std::filesystem::path& path, const Image& image);

/// Loads either a directory of *.pgm / *.ppm images in lexicographic filename
/// order, or a single YUV4MPEG2 stream. `fps` is used for directories and for
/// streams whose header carries no F tag.
///
/// Throws Error{empty_sequence} when nothing is found and
/// Error{inconsistent_dimensions} when frames disagree in size or channel count.
FrameSequence read_frames(const std::filesystem::path& path, double fps = 25.0);

FrameSequence read_y4m(const std::filesystem::path& path, double fallback_fps = 25.0);

}  // namespace pvseg
