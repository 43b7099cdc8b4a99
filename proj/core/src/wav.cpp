#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "pvseg/audio.hpp"
#include "pvseg/error.hpp"

namespace pvseg {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(std::span<const std::byte> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}

std::uint16_t le16(std::span<const std::byte> b, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned>(b[at]) |
                                    static_cast<unsigned>(b[at + 1]) << 8);
}

bool tag_is(std::span<const std::byte> b, std::size_t at, const char (&tag)[5]) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

float decode_sample(std::span<const std::byte> b, std::size_t at, const FormatChunk& fmt) {
  switch (fmt.bits) {
    case 8:
      return (static_cast<float>(b[at]) - 128.0f) / 128.0f;
    case 16:
      return static_cast<float>(static_cast<std::int16_t>(le16(b, at))) / 32768.0f;
    case 24: {
      std::uint32_t u = static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
                        static_cast<std::uint32_t>(b[at + 2]) << 16;
      if (u & 0x800000u) u |= 0xFF000000u;
      return static_cast<float>(static_cast<double>(static_cast<std::int32_t>(u)) / 8388608.0);
    }
    case 32: {
      const std::uint32_t u = le32(b, at);
      if (fmt.format == kFormatFloat) {
        float f = 0.0f;
        std::memcpy(&f, &u, sizeof f);
        if (!std::isfinite(f)) return 0.0f;
        return std::clamp(f, -1.0f, 1.0f);
      }
      return static_cast<float>(static_cast<double>(static_cast<std::int32_t>(u)) / 2147483648.0);
    }
  }
  return 0.0f;
}

}  // namespace

AudioClip parse_wav(std::span<const std::byte> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE"))
    throw Error(Errc::malformed_container, "missing RIFF/WAVE header");

  std::optional<FormatChunk> fmt;
  std::optional<std::span<const std::byte>> data;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = le32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (tag_is(bytes, pos, "fmt ")) {
      if (size < 16 || body + size > bytes.size())
        throw Error(Errc::malformed_container, "truncated fmt chunk");
      FormatChunk f;
      f.format = le16(bytes, body);
      f.channels = le16(bytes, body + 2);
      f.sample_rate = le32(bytes, body + 4);
      f.block_align = le16(bytes, body + 12);
      f.bits = le16(bytes, body + 14);
      if (f.format == kFormatExtensible) {
        if (size < 40) throw Error(Errc::malformed_container, "truncated WAVE_FORMAT_EXTENSIBLE");
        f.format = le16(bytes, body + 24);  // first two bytes of the subformat GUID
      }
      fmt = f;
    } else if (tag_is(bytes, pos, "data")) {
      // Streams written before their length is known sometimes leave the data
      // size too large; clamp to what is actually present.
      const std::size_t avail = bytes.size() - body;
      data = bytes.subspan(body, std::min<std::size_t>(size, avail));
    }
    const std::size_t advance = 8 + static_cast<std::size_t>(size) + (size & 1u);
    if (advance > bytes.size() - pos) break;
    pos += advance;
  }

  if (!fmt) throw Error(Errc::malformed_container, "no fmt chunk");
  if (!data) throw Error(Errc::malformed_container, "no data chunk");

  const bool int_pcm = fmt->format == kFormatPcm &&
                       (fmt->bits == 8 || fmt->bits == 16 || fmt->bits == 24 || fmt->bits == 32);
  const bool float_pcm = fmt->format == kFormatFloat && fmt->bits == 32;
  if (!int_pcm && !float_pcm)
    throw Error(Errc::unsupported_encoding, "format tag " + std::to_string(fmt->format) + " with " +
                                                std::to_string(fmt->bits) + " bits");
  if (fmt->channels < 1 || fmt->channels > 2)
    throw Error(Errc::unsupported_encoding, std::to_string(fmt->channels) + " channels");
  if (fmt->sample_rate == 0) throw Error(Errc::malformed_container, "zero sample rate");

  const std::size_t sample_bytes = fmt->bits / 8u;
  const std::size_t frame_bytes = sample_bytes * fmt->channels;
  if (fmt->block_align != frame_bytes)
    throw Error(Errc::malformed_container, "block align does not match channels*bits");

  AudioClip clip;
  clip.sample_rate = static_cast<int>(fmt->sample_rate);
  const std::size_t n = data->size() / frame_bytes;
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t at = i * frame_bytes;
    if (fmt->channels == 1) {
      clip.samples[i] = decode_sample(*data, at, *fmt);
    } else {
      const double l = decode_sample(*data, at, *fmt);
      const double r = decode_sample(*data, at + sample_bytes, *fmt);
      clip.samples[i] = static_cast<float>((l + r) / 2.0);
    }
  }
  return clip;
}

AudioClip read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_wav(std::as_bytes(std::span(raw)));
}

std::vector<std::byte> encode_wav(std::span<const float> interleaved, int sample_rate, int channels,
                                  WavEncoding encoding) {
  if (channels < 1 || channels > 2 || sample_rate <= 0)
    throw Error(Errc::invalid_argument, "encode_wav: bad channel count or sample rate");
  int bits = 16;
  std::uint16_t tag = kFormatPcm;
  switch (encoding) {
    case WavEncoding::pcm8: bits = 8; break;
    case WavEncoding::pcm16: bits = 16; break;
    case WavEncoding::pcm24: bits = 24; break;
    case WavEncoding::pcm32: bits = 32; break;
    case WavEncoding::float32: bits = 32; tag = kFormatFloat; break;
  }
  const std::uint32_t bytes_per_sample = static_cast<std::uint32_t>(bits / 8);
  const std::uint32_t data_size = static_cast<std::uint32_t>(interleaved.size()) * bytes_per_sample;

  std::vector<std::byte> out;
  out.reserve(44 + data_size);
  auto put_tag = [&](const char* t) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>(t[i]));
  };
  auto put = [&](std::uint32_t v, int nbytes) {
    for (int i = 0; i < nbytes; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFFu));
  };

  put_tag("RIFF");
  put(36 + data_size, 4);
  put_tag("WAVE");
  put_tag("fmt ");
  put(16, 4);
  put(tag, 2);
  put(static_cast<std::uint32_t>(channels), 2);
  put(static_cast<std::uint32_t>(sample_rate), 4);
  put(static_cast<std::uint32_t>(sample_rate) * channels * bytes_per_sample, 4);
  put(static_cast<std::uint32_t>(channels) * bytes_per_sample, 2);
  put(static_cast<std::uint32_t>(bits), 2);
  put_tag("data");
  put(data_size, 4);

  for (float s : interleaved) {
    const double x = std::clamp(static_cast<double>(s), -1.0, 1.0);
    switch (encoding) {
      case WavEncoding::pcm8: {
        const long v = std::clamp(std::lround(x * 128.0) + 128, 0L, 255L);
        put(static_cast<std::uint32_t>(v), 1);
        break;
      }
      case WavEncoding::pcm16: {
        const long v = std::clamp(std::lround(x * 32768.0), -32768L, 32767L);
        put(static_cast<std::uint32_t>(static_cast<std::uint16_t>(v)), 2);
        break;
      }
      case WavEncoding::pcm24: {
        const long v = std::clamp(std::lround(x * 8388608.0), -8388608L, 8388607L);
        put(static_cast<std::uint32_t>(v) & 0xFFFFFFu, 3);
        break;
      }
      case WavEncoding::pcm32: {
        const long long v =
            std::clamp(std::llround(x * 2147483648.0), -2147483648LL, 2147483647LL);
        put(static_cast<std::uint32_t>(v), 4);
        break;
      }
      case WavEncoding::float32: {
        const float f = static_cast<float>(x);
        std::uint32_t u = 0;
        std::memcpy(&u, &f, sizeof u);
        put(u, 4);
        break;
      }
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip, WavEncoding encoding) {
  const auto bytes = encode_wav(clip.samples, clip.sample_rate, 1, encoding);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io_failure, "short write to " + path.string());
}

}  // namespace pvseg
