#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "pvseg/error.hpp"
#include "pvseg/features.hpp"
#include "pvseg/numfmt.hpp"
#include "pvseg/parallel.hpp"

namespace pvseg {
namespace {

void fft_inplace(std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto u = x[i + k];
        const auto v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

MfccVector cepstrum(const std::vector<double>& energies) {
  const std::size_t m = energies.size();
  std::vector<double> log_e(m);
  double mean = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    log_e[k] = std::log(std::max(energies[k], kLogEnergyFloor));
    mean += log_e[k];
  }
  mean /= static_cast<double>(m);

  const double scale = std::sqrt(2.0 / static_cast<double>(m));
  MfccVector c{};
  c[0] = scale * mean * static_cast<double>(m);
  // Rows i >= 1 sum to zero, so any offset may be removed; log_e[0] makes flat spectra exactly 0.
  for (std::size_t i = 1; i < kMfccCount; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k)
      acc += (log_e[k] - log_e[0]) *
             std::cos(std::numbers::pi * static_cast<double>(i) * (static_cast<double>(k) + 0.5) /
                      static_cast<double>(m));
    c[i] = scale * acc;
  }
  return c;
}

}  // namespace

std::size_t auto_set_length(int sample_rate) {
  if (sample_rate <= 0) throw Error(Errc::invalid_argument, "sample rate must be positive");
  return static_cast<std::size_t>(std::llround(sample_rate / 62.5));
}

std::vector<SampleWindow> frame_audio(const AudioClip& clip, const FramingConfig& cfg) {
  if (clip.sample_rate <= 0) throw Error(Errc::invalid_argument, "sample rate must be positive");
  if (!(cfg.sets_per_second > 0.0))
    throw Error(Errc::invalid_argument, "sets_per_second must be positive");
  const std::size_t len = cfg.set_length ? cfg.set_length : auto_set_length(clip.sample_rate);
  if (clip.samples.size() < len)
    throw Error(Errc::clip_too_short, std::to_string(clip.samples.size()) +
                                          " samples, one set needs " + std::to_string(len));

  const double hop = clip.sample_rate / cfg.sets_per_second;
  const auto count =
      static_cast<std::size_t>(std::floor(static_cast<double>(clip.samples.size() - len) / hop)) + 1;
  std::vector<SampleWindow> windows;
  windows.reserve(count);
  const std::span<const float> all(clip.samples);
  for (std::size_t i = 0; i < count; ++i) {
    const auto offset = static_cast<std::size_t>(std::floor(static_cast<double>(i) * hop));
    windows.push_back({offset, static_cast<double>(offset) / clip.sample_rate, all.subspan(offset, len)});
  }
  return windows;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

MelFilterbank::MelFilterbank(int sample_rate, std::size_t fft_size, std::size_t filter_count)
    : fft_size_(fft_size) {
  if (sample_rate <= 0 || fft_size < 2 || filter_count == 0)
    throw Error(Errc::invalid_argument, "bad filterbank geometry");
  const double top = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(filter_count + 2);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = mel_to_hz(top * static_cast<double>(i) / static_cast<double>(filter_count + 1));

  const std::size_t bins = fft_size / 2 + 1;
  const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(fft_size);
  filters_.resize(filter_count);
  center_hz_.resize(filter_count);
  for (std::size_t m = 0; m < filter_count; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    center_hz_[m] = mid;
    Filter& f = filters_[m];
    f.first_bin = bins;
    for (std::size_t k = 0; k < bins; ++k) {
      const double hz = static_cast<double>(k) * bin_hz;
      double w = 0.0;
      if (hz > lo && hz <= mid) w = (hz - lo) / (mid - lo);
      else if (hz > mid && hz < hi) w = (hi - hz) / (hi - mid);
      if (w <= 0.0) {
        if (f.first_bin != bins) break;
        continue;
      }
      if (f.first_bin == bins) f.first_bin = k;
      f.weights.push_back(w);
    }
    if (f.first_bin == bins) f.first_bin = 0;
  }
}

double MelFilterbank::weight(std::size_t filter, std::size_t bin) const {
  const Filter& f = filters_.at(filter);
  if (bin < f.first_bin || bin >= f.first_bin + f.weights.size()) return 0.0;
  return f.weights[bin - f.first_bin];
}

std::vector<double> MelFilterbank::apply(std::span<const double> magnitude) const {
  std::vector<double> out(filters_.size(), 0.0);
  for (std::size_t m = 0; m < filters_.size(); ++m) {
    const Filter& f = filters_[m];
    double acc = 0.0;
    for (std::size_t j = 0; j < f.weights.size() && f.first_bin + j < magnitude.size(); ++j)
      acc += f.weights[j] * magnitude[f.first_bin + j];
    out[m] = acc;
  }
  return out;
}

std::vector<double> magnitude_spectrum(std::span<const float> window, std::size_t fft_size) {
  const std::size_t n = window.size();
  if (n < 2 || fft_size < n) throw Error(Errc::invalid_argument, "bad window/fft size");
  std::vector<std::complex<double>> buf(fft_size);
  for (std::size_t i = 0; i < n; ++i) {
    const double hann =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
    buf[i] = hann * static_cast<double>(window[i]);
  }
  fft_inplace(buf);
  std::vector<double> mag(fft_size / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(buf[k]);
  return mag;
}

std::vector<double> mel_filter_energies(std::span<const float> window, int sample_rate) {
  if (window.size() < kMinMfccWindow)
    throw Error(Errc::invalid_argument, "MFCC window needs at least 32 samples");
  const MelFilterbank bank(sample_rate, next_pow2(window.size()));
  return bank.apply(magnitude_spectrum(window, bank.fft_size()));
}

MfccVector mfcc(std::span<const float> window, const MelFilterbank& bank) {
  if (window.size() < kMinMfccWindow)
    throw Error(Errc::invalid_argument, "MFCC window needs at least 32 samples");
  if (bank.fft_size() != next_pow2(window.size()))
    throw Error(Errc::invalid_argument, "filterbank FFT size does not match window");
  return cepstrum(bank.apply(magnitude_spectrum(window, bank.fft_size())));
}

MfccVector mfcc(std::span<const float> window, int sample_rate) {
  if (window.size() < kMinMfccWindow)
    throw Error(Errc::invalid_argument, "MFCC window needs at least 32 samples");
  return mfcc(window, MelFilterbank(sample_rate, next_pow2(window.size())));
}

FeatureSequence extract_features(const AudioClip& clip, const FramingConfig& cfg, unsigned threads) {
  const auto windows = frame_audio(clip, cfg);
  FeatureSequence seq;
  seq.sample_rate = clip.sample_rate;
  seq.sets_per_second = cfg.sets_per_second;
  seq.set_length_samples = windows.front().samples.size();
  if (seq.set_length_samples < kMinMfccWindow)
    throw Error(Errc::invalid_argument, "MFCC window needs at least 32 samples");

  const MelFilterbank bank(clip.sample_rate, next_pow2(seq.set_length_samples));
  seq.frames.resize(windows.size());
  parallel_for(windows.size(), threads, [&](std::size_t i) {
    seq.frames[i] = FeatureFrame{windows[i].t_start, mfcc(windows[i].samples, bank)};
  });
  return seq;
}

ActivityGraph amplitude_envelope(const AudioClip& clip, double bin_duration_s) {
  if (!(bin_duration_s > 0.0)) throw Error(Errc::invalid_argument, "bin duration must be positive");
  if (clip.sample_rate <= 0) throw Error(Errc::invalid_argument, "sample rate must be positive");
  const auto per_bin = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(bin_duration_s * clip.sample_rate)));

  ActivityGraph g;
  g.kind = MediaKind::audio;
  g.bin_duration_s = static_cast<double>(per_bin) / clip.sample_rate;
  const std::size_t n = clip.samples.size();
  g.values.reserve((n + per_bin - 1) / per_bin);
  for (std::size_t start = 0; start < n; start += per_bin) {
    const std::size_t end = std::min(n, start + per_bin);
    double acc = 0.0;
    for (std::size_t i = start; i < end; ++i) acc += static_cast<double>(clip.samples[i]) * clip.samples[i];
    g.values.push_back(std::min(1.0, std::sqrt(acc / static_cast<double>(end - start))));
  }
  return g;
}

void write_feature_csv(const std::filesystem::path& path, const FeatureSequence& features) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
  out << "t_start";
  for (std::size_t i = 0; i < kMfccCount; ++i) out << ",c" << i;
  out << '\n';
  for (const auto& f : features.frames) {
    out << format_double(f.t_start);
    for (double c : f.coeffs) out << ',' << format_double(c);
    out << '\n';
  }
  if (!out) throw Error(Errc::io_failure, "short write to " + path.string());
}

FeatureSequence read_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open " + path.string());
  FeatureSequence seq;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || (lineno == 1 && line.rfind("t_start", 0) == 0)) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) {
      const auto v = parse_double(cell);
      if (!v) throw Error(Errc::malformed_line, path.string() + ":" + std::to_string(lineno));
      values.push_back(*v);
    }
    if (values.size() != kMfccCount + 1)
      throw Error(Errc::malformed_line, path.string() + ":" + std::to_string(lineno) +
                                            " expects 14 columns");
    FeatureFrame f;
    f.t_start = values[0];
    std::copy(values.begin() + 1, values.end(), f.coeffs.begin());
    seq.frames.push_back(f);
  }
  if (seq.frames.size() >= 2) {
    const double span = seq.frames.back().t_start - seq.frames.front().t_start;
    if (span > 0) seq.sets_per_second = static_cast<double>(seq.frames.size() - 1) / span;
  }
  return seq;
}

}  // namespace pvseg
