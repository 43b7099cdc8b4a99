#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "pvseg/audio.hpp"
#include "pvseg/features.hpp"
#include "pvseg/frames.hpp"
#include "pvseg/histogram.hpp"

namespace pvseg::testing {

using Rng = std::mt19937_64;

class TempDir {
 public:
  explicit TempDir(const std::string& tag = "pvseg");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// ---- feature streams -------------------------------------------------------

/// `count` frames of N(mean, sigma^2 I) at `rate` frames/s starting at t0.
std::vector<FeatureFrame> gaussian_frames(Rng& rng, std::size_t count, const MfccVector& mean,
                                          double sigma = 1.0, double rate = 8.0, double t0 = 0.0);

MfccVector filled(double value);

/// Back-to-back blocks, each `seconds` long, drawn from the given means.
FeatureSequence piecewise_stream(Rng& rng, const std::vector<MfccVector>& means, double seconds,
                                 double rate = 8.0);

// ---- audio -----------------------------------------------------------------

AudioClip sine_clip(int sample_rate, double hz, double seconds, double amplitude = 1.0);
AudioClip square_clip(int sample_rate, double hz, double seconds);
AudioClip noise_clip(Rng& rng, int sample_rate, double seconds, double amplitude);
/// Sum of harmonics of f0 with 1/k amplitude roll-off, light noise added.
AudioClip voiced_clip(Rng& rng, int sample_rate, double f0, double seconds, double amplitude = 0.3);
AudioClip concat(const std::vector<AudioClip>& parts);

// ---- video -----------------------------------------------------------------

Image solid_image(int w, int h, std::array<std::uint8_t, 3> rgb);
/// A slide-like scene: background with a few rectangles, seeded by `scene`.
Image scene_image(int w, int h, unsigned scene);
/// Adds independent N(0, sigma^2) noise to every channel value.
Image with_noise(Rng& rng, const Image& base, double sigma);
/// Per-pixel linear blend a*(1-alpha) + b*alpha.
Image blend(const Image& a, const Image& b, double alpha);

/// Static scene `a` until cut_s, scene `b` afterwards, with sensor noise.
FrameSequence cut_sequence(Rng& rng, double fps, double seconds, double cut_s, double noise_sigma = 2.0);
FrameSequence static_sequence(Rng& rng, double fps, double seconds, double noise_sigma = 2.0);
/// Linear crossfade over the whole duration, with sensor noise.
FrameSequence crossfade_sequence(Rng& rng, double fps, double seconds, double noise_sigma = 2.0);
/// Random independent content every frame.
FrameSequence motion_sequence(Rng& rng, double fps, double seconds);

void write_frame_dir(const std::filesystem::path& dir, const FrameSequence& seq);

// ---- independent oracles ---------------------------------------------------

/// ln det by Gaussian elimination with partial pivoting, in long double.
double logdet_oracle(std::vector<std::vector<long double>> m);

/// Maximum-likelihood covariance (two-pass) of rows [begin, end) plus ridge * I.
std::vector<std::vector<long double>> covariance_oracle(const std::vector<FeatureFrame>& frames,
                                                        std::size_t begin, std::size_t end,
                                                        double ridge = 1e-8);

/// Full dBIC from first principles.
double delta_bic_oracle(const std::vector<FeatureFrame>& frames, std::size_t split, double lambda);

/// Recursive-definition edit distance (memoized), independent of the library's DP.
std::size_t edit_distance_oracle(const std::string& a, const std::string& b);

/// Rand index between two labelings of the same items.
double rand_index(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace pvseg::testing
