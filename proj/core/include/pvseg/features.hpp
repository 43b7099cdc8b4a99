#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "pvseg/audio.hpp"
#include "pvseg/segment.hpp"

namespace pvseg {

inline constexpr std::size_t kMfccCount = 13;
inline constexpr std::size_t kMelFilterCount = 26;
inline constexpr double kLogEnergyFloor = 1e-10;
inline constexpr std::size_t kMinMfccWindow = 32;

using MfccVector = std::array<double, kMfccCount>;

struct FeatureFrame {
  double t_start = 0.0;
  MfccVector coeffs{};

  bool operator==(const FeatureFrame&) const = default;
};

struct FeatureSequence {
  int sample_rate = 0;
  double sets_per_second = 8.0;
  std::size_t set_length_samples = 0;
  std::vector<FeatureFrame> frames;
};

/// Sparse framing: `sets_per_second` windows per second, each `set_length`
/// samples long. A set_length of 0 means AUTO = round(sample_rate / 62.5),
/// which is 512 / 256 / 128 at 32 / 16 / 8 kHz.
struct FramingConfig {
  double sets_per_second = 8.0;
  std::size_t set_length = 0;
};

std::size_t auto_set_length(int sample_rate);

struct SampleWindow {
  std::size_t offset = 0;
  double t_start = 0.0;
  std::span<const float> samples;
};

/// Windows start at floor(i * sample_rate / sets_per_second); a trailing
/// window that would run past the clip is dropped, so the count is
/// floor((len - set_length) / hop) + 1.
/// Throws Error{clip_too_short} when the clip holds less than one window.
std::vector<SampleWindow> frame_audio(const AudioClip& clip, const FramingConfig& cfg = {});

/// Triangular filters on the HTK mel scale, evenly spaced from 0 Hz to
/// Nyquist, evaluated on the bins of an `fft_size`-point magnitude spectrum.
class MelFilterbank {
 public:
  MelFilterbank(int sample_rate, std::size_t fft_size, std::size_t filter_count = kMelFilterCount);

  std::size_t fft_size() const { return fft_size_; }
  std::size_t size() const { return filters_.size(); }
  const std::vector<double>& center_hz() const { return center_hz_; }
  double weight(std::size_t filter, std::size_t bin) const;

  std::vector<double> apply(std::span<const double> magnitude) const;

 private:
  struct Filter {
    std::size_t first_bin = 0;
    std::vector<double> weights;
  };
  std::size_t fft_size_;
  std::vector<Filter> filters_;
  std::vector<double> center_hz_;
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);
std::size_t next_pow2(std::size_t n);

/// Hann-windowed, zero-padded magnitude spectrum (bins 0..fft_size/2).
std::vector<double> magnitude_spectrum(std::span<const float> window, std::size_t fft_size);

std::vector<double> mel_filter_energies(std::span<const float> window, int sample_rate);

/// 13 cepstral coefficients c0..c12 of one window:
/// Hann -> zero-pad to 2^k -> |FFT| -> 26 mel filters -> log(max(E, 1e-10)) -> DCT-II.
MfccVector mfcc(std::span<const float> window, int sample_rate);
MfccVector mfcc(std::span<const float> window, const MelFilterbank& bank);

FeatureSequence extract_features(const AudioClip& clip, const FramingConfig& cfg = {},
                                 unsigned threads = 1);

/// Per-bin RMS; a full-scale square wave maps to 1.0. A trailing partial bin
/// is kept and measured over the samples it has.
ActivityGraph amplitude_envelope(const AudioClip& clip, double bin_duration_s);

void write_feature_csv(const std::filesystem::path& path, const FeatureSequence& features);
FeatureSequence read_feature_csv(const std::filesystem::path& path);

}  // namespace pvseg
