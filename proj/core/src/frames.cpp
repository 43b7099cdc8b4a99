#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "pvseg/error.hpp"
#include "pvseg/frames.hpp"
#include "pvseg/numfmt.hpp"

namespace pvseg {
namespace fs = std::filesystem;
namespace {

std::vector<char> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Header token reader that skips whitespace and '#' comments.
class PnmHeader {
 public:
  PnmHeader(const std::vector<char>& data, const fs::path& path) : data_(data), path_(path) {}

  std::string token() {
    skip_space();
    std::string out;
    while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_])))
      out.push_back(data_[pos_++]);
    if (out.empty()) throw Error(Errc::malformed_container, "truncated PNM header in " + path_.string());
    return out;
  }

  int number() {
    const auto tok = token();
    const auto v = parse_int(tok);
    if (!v || *v < 0) throw Error(Errc::malformed_container, "bad PNM header value '" + tok + "'");
    return static_cast<int>(*v);
  }

  // After maxval exactly one whitespace byte precedes binary data.
  std::size_t binary_start() const { return pos_ + 1; }
  std::size_t& pos() { return pos_; }

  void skip_space() {
    while (pos_ < data_.size()) {
      const char c = data_[pos_];
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

 private:
  const std::vector<char>& data_;
  const fs::path& path_;
  std::size_t pos_ = 0;
};

std::uint8_t scale_to_8bit(int v, int maxval) {
  if (maxval == 255) return static_cast<std::uint8_t>(v);
  return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
}

bool is_pnm(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

std::uint8_t clamp_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(v + 0.5, 0.0, 255.0));
}

}  // namespace

Image read_pnm(const fs::path& path) {
  const auto data = slurp(path);
  PnmHeader hdr(data, path);
  const auto magic = hdr.token();
  int channels = 0;
  bool ascii = false;
  if (magic == "P5") channels = 1;
  else if (magic == "P6") channels = 3;
  else if (magic == "P2") { channels = 1; ascii = true; }
  else if (magic == "P3") { channels = 3; ascii = true; }
  else throw Error(Errc::unsupported_encoding, "not a PGM/PPM file: " + path.string());

  Image img;
  img.width = hdr.number();
  img.height = hdr.number();
  const int maxval = hdr.number();
  if (img.width <= 0 || img.height <= 0 || maxval <= 0 || maxval > 255)
    throw Error(Errc::unsupported_encoding, "unsupported PNM geometry/maxval in " + path.string());
  img.channels = channels;
  const std::size_t count = img.pixel_count() * channels;
  img.pixels.resize(count);

  if (ascii) {
    for (std::size_t i = 0; i < count; ++i) {
      const int v = hdr.number();
      if (v > maxval) throw Error(Errc::malformed_container, "sample exceeds maxval");
      img.pixels[i] = scale_to_8bit(v, maxval);
    }
  } else {
    const std::size_t start = hdr.binary_start();
    if (start + count > data.size())
      throw Error(Errc::malformed_container, "truncated PNM raster in " + path.string());
    for (std::size_t i = 0; i < count; ++i)
      img.pixels[i] = scale_to_8bit(static_cast<unsigned char>(data[start + i]), maxval);
  }
  return img;
}

void write_pnm(const fs::path& path, const Image& image) {
  if (image.channels != 1 && image.channels != 3)
    throw Error(Errc::invalid_argument, "write_pnm: channels must be 1 or 3");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
  out << (image.channels == 1 ? "P5" : "P6") << '\n'
      << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw Error(Errc::io_failure, "short write to " + path.string());
}

FrameSequence read_y4m(const fs::path& path, double fallback_fps) {
  const auto data = slurp(path);
  const auto header_end = std::find(data.begin(), data.end(), '\n');
  if (header_end == data.end()) throw Error(Errc::malformed_container, "no YUV4MPEG2 header line");
  std::istringstream header(std::string(data.begin(), header_end));
  std::string word;
  header >> word;
  if (word != "YUV4MPEG2") throw Error(Errc::malformed_container, "missing YUV4MPEG2 signature");

  FrameSequence seq;
  seq.fps = fallback_fps;
  std::string colorspace = "420jpeg";
  while (header >> word) {
    const char tag = word[0];
    const std::string value = word.substr(1);
    if (tag == 'W') seq.width = static_cast<int>(parse_int(value).value_or(0));
    else if (tag == 'H') seq.height = static_cast<int>(parse_int(value).value_or(0));
    else if (tag == 'C') colorspace = value;
    else if (tag == 'F') {
      const auto colon = value.find(':');
      const auto num = parse_double(value.substr(0, colon));
      const auto den = colon == std::string::npos ? std::optional<double>(1.0)
                                                  : parse_double(value.substr(colon + 1));
      if (num && den && *num > 0 && *den > 0) seq.fps = *num / *den;
    }
  }
  if (seq.width <= 0 || seq.height <= 0)
    throw Error(Errc::malformed_container, "YUV4MPEG2 header lacks W/H");

  const bool mono = colorspace.rfind("mono", 0) == 0;
  const bool is444 = colorspace.rfind("444", 0) == 0;
  const bool is420 = colorspace.rfind("420", 0) == 0;
  if (!mono && !is444 && !is420)
    throw Error(Errc::unsupported_encoding, "YUV4MPEG2 colorspace C" + colorspace);

  const int cw = is444 ? seq.width : (seq.width + 1) / 2;
  const int ch = is444 ? seq.height : (seq.height + 1) / 2;
  const std::size_t luma = static_cast<std::size_t>(seq.width) * seq.height;
  const std::size_t chroma = mono ? 0 : static_cast<std::size_t>(cw) * ch;
  const std::size_t frame_bytes = luma + 2 * chroma;

  std::size_t pos = static_cast<std::size_t>(header_end - data.begin()) + 1;
  while (pos < data.size()) {
    const auto line_end = std::find(data.begin() + static_cast<std::ptrdiff_t>(pos), data.end(), '\n');
    const std::string frame_tag(data.begin() + static_cast<std::ptrdiff_t>(pos), line_end);
    if (frame_tag.rfind("FRAME", 0) != 0)
      throw Error(Errc::malformed_container, "expected FRAME marker");
    pos = static_cast<std::size_t>(line_end - data.begin()) + 1;
    if (pos + frame_bytes > data.size())
      throw Error(Errc::malformed_container, "truncated YUV4MPEG2 frame");

    Image img;
    img.width = seq.width;
    img.height = seq.height;
    if (mono) {
      img.channels = 1;
      img.pixels.assign(data.begin() + static_cast<std::ptrdiff_t>(pos),
                        data.begin() + static_cast<std::ptrdiff_t>(pos + luma));
    } else {
      img.channels = 3;
      img.pixels.resize(luma * 3);
      const auto* y = reinterpret_cast<const unsigned char*>(data.data() + pos);
      const auto* u = y + luma;
      const auto* v = u + chroma;
      for (int r = 0; r < seq.height; ++r) {
        for (int c = 0; c < seq.width; ++c) {
          const std::size_t ci = is444 ? static_cast<std::size_t>(r) * cw + c
                                       : static_cast<std::size_t>(r / 2) * cw + c / 2;
          // BT.601 full-range YCbCr to RGB
          const double yy = y[static_cast<std::size_t>(r) * seq.width + c];
          const double cb = u[ci] - 128.0;
          const double cr = v[ci] - 128.0;
          const std::size_t o = (static_cast<std::size_t>(r) * seq.width + c) * 3;
          img.pixels[o] = clamp_byte(yy + 1.402 * cr);
          img.pixels[o + 1] = clamp_byte(yy - 0.344136 * cb - 0.714136 * cr);
          img.pixels[o + 2] = clamp_byte(yy + 1.772 * cb);
        }
      }
    }
    seq.frames.push_back(std::move(img));
    pos += frame_bytes;
  }
  if (seq.frames.empty()) throw Error(Errc::empty_sequence, "no frames in " + path.string());
  return seq;
}

FrameSequence read_frames(const fs::path& path, double fps) {
  if (fps <= 0) throw Error(Errc::invalid_argument, "fps must be positive");
  if (!fs::exists(path)) throw Error(Errc::io_failure, "no such path " + path.string());
  if (!fs::is_directory(path)) return read_y4m(path, fps);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path))
    if (entry.is_regular_file() && is_pnm(entry.path())) files.push_back(entry.path());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  if (files.empty()) throw Error(Errc::empty_sequence, "no PGM/PPM frames in " + path.string());

  FrameSequence seq;
  seq.fps = fps;
  seq.frames.reserve(files.size());
  for (const auto& f : files) {
    Image img = read_pnm(f);
    if (!seq.frames.empty()) {
      const Image& first = seq.frames.front();
      if (img.width != first.width || img.height != first.height || img.channels != first.channels)
        throw Error(Errc::inconsistent_dimensions,
                    f.filename().string() + " is " + std::to_string(img.width) + "x" +
                        std::to_string(img.height) + ", expected " + std::to_string(first.width) +
                        "x" + std::to_string(first.height));
    }
    seq.frames.push_back(std::move(img));
  }
  seq.width = seq.frames.front().width;
  seq.height = seq.frames.front().height;
  return seq;
}

}  // namespace pvseg
