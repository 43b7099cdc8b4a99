#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pvseg/features.hpp"
#include "pvseg/segment.hpp"

namespace pvseg {

/// Covariances are regularized by kCovarianceRidge times the pooled covariance
/// of the data under test (plus kCovarianceRidge^2 * I), which keeps dBIC
/// invariant under affine maps of the features.
inline constexpr double kCovarianceRidge = 1e-8;

/// Growing-window scan parameters. Defaults: see README ("Tuning").
struct BicConfig {
  double lambda = 0.85;
  double initial_window_s = 4.0;
  double growth_step_s = 2.0;
  double max_window_s = 30.0;
  std::size_t min_margin_frames = 24;
  /// A split is a change only when its dBIC exceeds this (0 = strict positivity).
  double clearance = 0.0;
};

/// Model-complexity term (1/2)(d + d(d+1)/2) ln N of a full-covariance Gaussian.
double bic_penalty(std::size_t dimension, std::size_t n);

/// dBIC for splitting `features` into [0, split) and [split, N):
///   (N/2) ln|S| - (N1/2) ln|S1| - (N2/2) ln|S2| - lambda * penalty(d, N)
/// with maximum-likelihood covariances plus 1e-8 I. Positive favours two models.
///
/// Throws Error{insufficient_samples} when either side has <= d (13) frames and
/// Error{singular_covariance} when a covariance is not positive definite.
double bic_delta(std::span<const FeatureFrame> features, std::size_t split, double lambda);

/// Data term only (lambda = 0); useful for diagnostics.
double bic_data_term(std::span<const FeatureFrame> features, std::size_t split);

/// Growing two-window BIC scan. Each window starts at the current origin with
/// initial_window_s of frames; every split leaving at least
/// max(min_margin_frames, d + 1) frames on each side is scored. A positive
/// maximum (lowest split on ties) becomes a boundary and the next window
/// starts at that frame. A maximum on the last admissible split is deferred
/// while the window can still grow. Without a boundary the window grows by
/// growth_step_s, and once it reaches max_window_s the origin slides forward
/// by growth_step_s.
///
/// Throws Error{clip_too_short} when the stream is shorter than initial_window_s.
std::vector<Boundary> detect_speaker_changes(const FeatureSequence& features,
                                             const BicConfig& cfg = {}, unsigned threads = 1);

}  // namespace pvseg
