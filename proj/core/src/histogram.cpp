#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "pvseg/error.hpp"
#include "pvseg/histogram.hpp"
#include "pvseg/numfmt.hpp"
#include "pvseg/parallel.hpp"

namespace pvseg {
namespace {

int cube_root_exact(int bins) {
  const int b = static_cast<int>(std::lround(std::cbrt(static_cast<double>(bins))));
  return b * b * b == bins ? b : 0;
}

int quantize(int value, int levels) { return value * levels / 256; }

int luma(const std::uint8_t* px) {
  return static_cast<int>(std::lround(0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]));
}

}  // namespace

std::vector<double> image_histogram(const Image& image, int bins, ColorSpace space) {
  if (bins <= 0) throw Error(Errc::invalid_argument, "bins must be positive");
  if (image.channels != 1 && image.channels != 3)
    throw Error(Errc::invalid_argument, "image must have 1 or 3 channels");
  const std::size_t n = image.pixel_count();
  if (n == 0) throw Error(Errc::empty_sequence, "image has no pixels");

  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  const auto* px = image.pixels.data();
  if (space == ColorSpace::rgb) {
    const int b = cube_root_exact(bins);
    if (b == 0) throw Error(Errc::invalid_argument, "RGB histogram needs bins = b^3");
    for (std::size_t i = 0; i < n; ++i) {
      int r = 0, g = 0, bl = 0;
      if (image.channels == 3) {
        r = px[3 * i];
        g = px[3 * i + 1];
        bl = px[3 * i + 2];
      } else {
        r = g = bl = px[i];
      }
      ++counts[static_cast<std::size_t>((quantize(r, b) * b + quantize(g, b)) * b + quantize(bl, b))];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const int y = image.channels == 3 ? luma(px + 3 * i) : px[i];
      ++counts[static_cast<std::size_t>(quantize(y, bins))];
    }
  }

  std::vector<double> hist(counts.size());
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < counts.size(); ++k) hist[k] = static_cast<double>(counts[k]) * inv;
  return hist;
}

HistogramSeries compute_histograms(const FrameSequence& seq, int bins, ColorSpace space,
                                   unsigned threads) {
  if (space == ColorSpace::rgb && cube_root_exact(bins) == 0)
    throw Error(Errc::invalid_argument, "RGB histogram needs bins = b^3, got " + std::to_string(bins));
  HistogramSeries out;
  out.fps = seq.fps;
  out.bins = bins;
  out.histograms.resize(seq.frames.size());
  parallel_for(seq.frames.size(), threads, [&](std::size_t i) {
    out.histograms[i] = image_histogram(seq.frames[i], bins, space);
  });
  return out;
}

void write_histogram_cache(std::ostream& out, const HistogramSeries& series) {
  out << "PVHIST v1 fps=" << format_double(series.fps) << " bins=" << series.bins
      << " frames=" << series.histograms.size() << '\n';
  for (const auto& h : series.histograms) {
    for (std::size_t k = 0; k < h.size(); ++k) {
      if (k) out << ' ';
      out << format_double(h[k]);
    }
    out << '\n';
  }
}

void write_histogram_cache(const std::filesystem::path& path, const HistogramSeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
  write_histogram_cache(out, series);
  if (!out) throw Error(Errc::io_failure, "short write to " + path.string());
}

HistogramSeries read_histogram_cache(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::malformed_line, "empty histogram cache");
  std::istringstream header(line);
  std::string magic, version;
  header >> magic >> version;
  if (magic != "PVHIST" || version != "v1")
    throw Error(Errc::malformed_line, "not a PVHIST v1 header: " + line);

  HistogramSeries series;
  long long frames = -1;
  std::string field;
  while (header >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw Error(Errc::malformed_line, "bad header field " + field);
    const auto key = field.substr(0, eq);
    const auto value = std::string_view(field).substr(eq + 1);
    if (key == "fps") series.fps = parse_double(value).value_or(-1.0);
    else if (key == "bins") series.bins = static_cast<int>(parse_int(value).value_or(-1));
    else if (key == "frames") frames = parse_int(value).value_or(-1);
  }
  if (series.fps <= 0 || series.bins <= 0 || frames < 0)
    throw Error(Errc::malformed_line, "incomplete PVHIST header: " + line);

  series.histograms.reserve(static_cast<std::size_t>(frames));
  for (long long i = 0; i < frames; ++i) {
    if (!std::getline(in, line))
      throw Error(Errc::malformed_line, "histogram cache ends after " + std::to_string(i) + " frames");
    std::vector<double> h;
    h.reserve(static_cast<std::size_t>(series.bins));
    std::istringstream row(line);
    std::string tok;
    while (row >> tok) {
      const auto v = parse_double(tok);
      if (!v) throw Error(Errc::malformed_line, "bad value '" + tok + "' in frame " + std::to_string(i));
      h.push_back(*v);
    }
    if (static_cast<int>(h.size()) != series.bins)
      throw Error(Errc::bin_mismatch, "frame " + std::to_string(i) + " has " +
                                          std::to_string(h.size()) + " bins");
    series.histograms.push_back(std::move(h));
  }
  return series;
}

HistogramSeries read_histogram_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open " + path.string());
  return read_histogram_cache(in);
}

}  // namespace pvseg
