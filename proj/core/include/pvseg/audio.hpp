#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace pvseg {

/// Mono PCM audio with samples normalized to [-1, +1].
struct AudioClip {
  int sample_rate = 0;
  std::vector<float> samples;

  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

enum class WavEncoding { pcm8, pcm16, pcm24, pcm32, float32 };

/// Parses a RIFF/WAVE file. Integer PCM is scaled by 2^(bits-1) (8-bit is
/// offset-binary), float samples are clamped to [-1, +1], and stereo is
/// downmixed by averaging the two channels of each sample frame.
///
/// Throws Error{malformed_container} for broken RIFF structure (missing or
/// truncated chunks) and Error{unsupported_encoding} for anything other than
/// 8/16/24/32-bit integer PCM or 32-bit float with one or two channels.
AudioClip read_wav(const std::filesystem::path& path);
AudioClip parse_wav(std::span<const std::byte> bytes);

// Interleaved channel data in [-1, +1]; 16-bit output is the inverse of the
// read scaling, so reading back a 16-bit file is lossless.
std::vector<std::byte> encode_wav(std::span<const float> interleaved, int sample_rate,
                                  int channels, WavEncoding encoding = WavEncoding::pcm16);
void write_wav(const std::filesystem::path& path, const AudioClip& clip,
               WavEncoding encoding = WavEncoding::pcm16);

}  // namespace pvseg
