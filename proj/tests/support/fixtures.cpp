#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace pvseg::testing {
namespace fs = std::filesystem;

namespace {
constexpr int kFrameW = 48;
constexpr int kFrameH = 36;

std::uint8_t clamp_u8(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }
}  // namespace

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          (tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter.fetch_add(1)));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<FeatureFrame> gaussian_frames(Rng& rng, std::size_t count, const MfccVector& mean, double sigma,
                                          double rate, double t0) {
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<FeatureFrame> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].t_start = t0 + static_cast<double>(i) / rate;
    for (std::size_t j = 0; j < kMfccCount; ++j) out[i].coeffs[j] = mean[j] + sigma * n01(rng);
  }
  return out;
}

MfccVector filled(double value) {
  MfccVector v;
  v.fill(value);
  return v;
}

FeatureSequence piecewise_stream(Rng& rng, const std::vector<MfccVector>& means, double seconds, double rate) {
  FeatureSequence seq;
  seq.sample_rate = 16000;
  seq.sets_per_second = rate;
  seq.set_length_samples = 256;
  const auto per_block = static_cast<std::size_t>(std::lround(seconds * rate));
  for (const auto& m : means) {
    const double t0 = static_cast<double>(seq.frames.size()) / rate;
    auto block = gaussian_frames(rng, per_block, m, 1.0, rate, t0);
    seq.frames.insert(seq.frames.end(), block.begin(), block.end());
  }
  return seq;
}

AudioClip sine_clip(int sample_rate, double hz, double seconds, double amplitude) {
  AudioClip clip{sample_rate, {}};
  const auto n = static_cast<std::size_t>(std::lround(seconds * sample_rate));
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    clip.samples[i] = static_cast<float>(amplitude * std::sin(2.0 * std::numbers::pi * hz * i / sample_rate));
  return clip;
}

AudioClip square_clip(int sample_rate, double hz, double seconds) {
  AudioClip clip{sample_rate, {}};
  const auto n = static_cast<std::size_t>(std::lround(seconds * sample_rate));
  const double period = sample_rate / hz;
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) clip.samples[i] = std::fmod(i, period) < period / 2 ? 1.0f : -1.0f;
  return clip;
}

AudioClip noise_clip(Rng& rng, int sample_rate, double seconds, double amplitude) {
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  AudioClip clip{sample_rate, {}};
  clip.samples.resize(static_cast<std::size_t>(std::lround(seconds * sample_rate)));
  for (auto& s : clip.samples) s = static_cast<float>(u(rng));
  return clip;
}

AudioClip voiced_clip(Rng& rng, int sample_rate, double f0, double seconds, double amplitude) {
  std::normal_distribution<double> jitter(0.0, 0.01);
  AudioClip clip{sample_rate, {}};
  const auto n = static_cast<std::size_t>(std::lround(seconds * sample_rate));
  clip.samples.resize(n);
  const int harmonics = std::max(1, static_cast<int>(sample_rate / 2 / f0) - 1);
  double norm = 0;
  for (int k = 1; k <= harmonics; ++k) norm += 1.0 / k;
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0;
    for (int k = 1; k <= harmonics; ++k) v += std::sin(2.0 * std::numbers::pi * f0 * k * i / sample_rate) / k;
    clip.samples[i] = static_cast<float>(std::clamp(amplitude * v / norm + jitter(rng), -1.0, 1.0));
  }
  return clip;
}

AudioClip concat(const std::vector<AudioClip>& parts) {
  AudioClip out{parts.empty() ? 0 : parts.front().sample_rate, {}};
  for (const auto& p : parts) out.samples.insert(out.samples.end(), p.samples.begin(), p.samples.end());
  return out;
}

Image solid_image(int w, int h, std::array<std::uint8_t, 3> rgb) {
  Image img{w, h, 3, {}};
  img.pixels.resize(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < img.pixels.size(); i += 3)
    std::copy(rgb.begin(), rgb.end(), img.pixels.begin() + static_cast<std::ptrdiff_t>(i));
  return img;
}

Image scene_image(int w, int h, unsigned scene) {
  Rng rng(0x5CE7E + scene * 7919ULL);
  std::uniform_int_distribution<int> color(0, 255);
  const auto pick = [&] {
    return std::array<std::uint8_t, 3>{static_cast<std::uint8_t>(color(rng)), static_cast<std::uint8_t>(color(rng)),
                                       static_cast<std::uint8_t>(color(rng))};
  };
  Image img = solid_image(w, h, pick());
  for (int r = 0; r < 3; ++r) {
    const auto c = pick();
    std::uniform_int_distribution<int> xs(0, w / 2), ys(0, h / 2);
    const int x0 = xs(rng), y0 = ys(rng);
    const int x1 = std::min(w, x0 + w / 3 + xs(rng) / 2), y1 = std::min(h, y0 + h / 3 + ys(rng) / 2);
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x)
        std::copy(c.begin(), c.end(), img.pixels.begin() + (static_cast<std::ptrdiff_t>(y) * w + x) * 3);
  }
  return img;
}

Image with_noise(Rng& rng, const Image& base, double sigma) {
  std::normal_distribution<double> n(0.0, sigma);
  Image out = base;
  for (auto& p : out.pixels) p = clamp_u8(p + n(rng));
  return out;
}

Image blend(const Image& a, const Image& b, double alpha) {
  Image out = a;
  for (std::size_t i = 0; i < out.pixels.size(); ++i) out.pixels[i] = clamp_u8(a.pixels[i] * (1 - alpha) + b.pixels[i] * alpha);
  return out;
}

namespace {
FrameSequence make_sequence(double fps, std::size_t count) {
  FrameSequence seq;
  seq.fps = fps;
  seq.width = kFrameW;
  seq.height = kFrameH;
  seq.frames.reserve(count);
  return seq;
}
std::size_t frame_count(double fps, double seconds) { return static_cast<std::size_t>(std::lround(fps * seconds)); }
}  // namespace

FrameSequence cut_sequence(Rng& rng, double fps, double seconds, double cut_s, double noise_sigma) {
  const std::size_t n = frame_count(fps, seconds);
  const std::size_t cut = frame_count(fps, cut_s);
  auto seq = make_sequence(fps, n);
  const Image a = scene_image(kFrameW, kFrameH, 1), b = scene_image(kFrameW, kFrameH, 2);
  for (std::size_t i = 0; i < n; ++i) seq.frames.push_back(with_noise(rng, i < cut ? a : b, noise_sigma));
  return seq;
}

FrameSequence static_sequence(Rng& rng, double fps, double seconds, double noise_sigma) {
  const std::size_t n = frame_count(fps, seconds);
  auto seq = make_sequence(fps, n);
  const Image a = scene_image(kFrameW, kFrameH, 3);
  for (std::size_t i = 0; i < n; ++i) seq.frames.push_back(with_noise(rng, a, noise_sigma));
  return seq;
}

FrameSequence crossfade_sequence(Rng& rng, double fps, double seconds, double noise_sigma) {
  const std::size_t n = frame_count(fps, seconds);
  auto seq = make_sequence(fps, n);
  const Image a = scene_image(kFrameW, kFrameH, 4), b = scene_image(kFrameW, kFrameH, 5);
  for (std::size_t i = 0; i < n; ++i)
    seq.frames.push_back(with_noise(rng, blend(a, b, n > 1 ? static_cast<double>(i) / (n - 1) : 0.0), noise_sigma));
  return seq;
}

FrameSequence motion_sequence(Rng& rng, double fps, double seconds) {
  const std::size_t n = frame_count(fps, seconds);
  auto seq = make_sequence(fps, n);
  std::uniform_int_distribution<unsigned> scene(100, 1000000);
  for (std::size_t i = 0; i < n; ++i) seq.frames.push_back(scene_image(kFrameW, kFrameH, scene(rng)));
  return seq;
}

void write_frame_dir(const fs::path& dir, const FrameSequence& seq) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "f%05zu.ppm", i);
    write_pnm(dir / name, seq.frames[i]);
  }
}

double logdet_oracle(std::vector<std::vector<long double>> m) {
  const std::size_t n = m.size();
  long double logdet = 0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
    std::swap(m[col], m[pivot]);
    const long double p = m[col][col];
    if (p == 0) throw std::runtime_error("singular");
    logdet += std::log(std::fabs(p));
    for (std::size_t r = col + 1; r < n; ++r) {
      const long double f = m[r][col] / p;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return static_cast<double>(logdet);
}

std::vector<std::vector<long double>> covariance_oracle(const std::vector<FeatureFrame>& frames, std::size_t begin,
                                                        std::size_t end, double ridge) {
  const std::size_t d = kMfccCount;
  const long double n = static_cast<long double>(end - begin);
  std::vector<long double> mean(d, 0);
  for (std::size_t i = begin; i < end; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += frames[i].coeffs[j];
  for (auto& m : mean) m /= n;
  std::vector<std::vector<long double>> cov(d, std::vector<long double>(d, 0));
  for (std::size_t i = begin; i < end; ++i)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        cov[a][b] += (frames[i].coeffs[a] - mean[a]) * (frames[i].coeffs[b] - mean[b]);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) cov[a][b] /= n;
    cov[a][a] += ridge;
  }
  return cov;
}

double delta_bic_oracle(const std::vector<FeatureFrame>& frames, std::size_t split, double lambda) {
  const double n = static_cast<double>(frames.size());
  const double n1 = static_cast<double>(split);
  const double n2 = n - n1;
  const double d = kMfccCount;
  // Ridge = eps * pooled covariance + eps^2 * I, shared by all three terms.
  const long double eps = 1e-8L;
  auto ridge = covariance_oracle(frames, 0, frames.size(), 0.0);
  for (std::size_t r = 0; r < ridge.size(); ++r) {
    for (auto& v : ridge[r]) v *= eps;
    ridge[r][r] += eps * eps;
  }
  const auto regularized = [&](std::size_t b, std::size_t e) {
    auto c = covariance_oracle(frames, b, e, 0.0);
    for (std::size_t r = 0; r < c.size(); ++r)
      for (std::size_t k = 0; k < c.size(); ++k) c[r][k] += ridge[r][k];
    return logdet_oracle(c);
  };
  const double whole = regularized(0, frames.size());
  const double left = regularized(0, split);
  const double right = regularized(split, frames.size());
  const double penalty = 0.5 * (d + d * (d + 1) / 2) * std::log(n);
  return n / 2 * whole - n1 / 2 * left - n2 / 2 * right - lambda * penalty;
}

std::size_t edit_distance_oracle(const std::string& a, const std::string& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    if (const auto it = memo.find({i, j}); it != memo.end()) return it->second;
    std::size_t best = self(self, i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    best = std::min(best, self(self, i + 1, j) + 1);
    best = std::min(best, self(self, i, j + 1) + 1);
    memo[{i, j}] = best;
    return best;
  };
  return rec(rec, 0, 0);
}

double rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("label vectors differ in length");
  std::size_t agree = 0, pairs = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j, ++pairs)
      if ((a[i] == a[j]) == (b[i] == b[j])) ++agree;
  return pairs == 0 ? 1.0 : static_cast<double>(agree) / pairs;
}

}  // namespace pvseg::testing
