#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "pvseg/frames.hpp"

namespace pvseg {

enum class ColorSpace {
  rgb,   // bins = b^3, each channel quantized to b levels
  gray,  // bins = b, luma quantized to b levels
};

struct HistogramSeries {
  double fps = 0.0;
  int bins = 0;
  std::vector<std::vector<double>> histograms;

  std::size_t size() const { return histograms.size(); }
  double time_of(std::size_t frame) const { return frame / fps; }
  double duration_s() const { return fps > 0 ? histograms.size() / fps : 0.0; }
};

/// L1-normalized histogram of a single image. RGB images in gray mode are
/// reduced to BT.601 luma; gray images in RGB mode populate the diagonal.
std::vector<double> image_histogram(const Image& image, int bins, ColorSpace space = ColorSpace::rgb);

/// Per-frame histograms, computed on up to `threads` workers in frame order.
/// Throws Error{invalid_argument} when `bins` is not a perfect cube in RGB mode.
HistogramSeries compute_histograms(const FrameSequence& seq, int bins = 512,
                                   ColorSpace space = ColorSpace::rgb, unsigned threads = 1);

// PVHIST v1 cache: `PVHIST v1 fps=<f> bins=<b> frames=<n>` then n lines of b values.
void write_histogram_cache(std::ostream& out, const HistogramSeries& series);
void write_histogram_cache(const std::filesystem::path& path, const HistogramSeries& series);
HistogramSeries read_histogram_cache(std::istream& in);
HistogramSeries read_histogram_cache(const std::filesystem::path& path);

}  // namespace pvseg
