#pragma once

#include <span>
#include <vector>

#include "pvseg/histogram.hpp"
#include "pvseg/segment.hpp"

namespace pvseg {

struct ShotConfig {
  double window_s = 4.0;
  double deviation_k = 8.0;
  double min_shot_s = 1.0;
};

/// L1 distance in [0, 2]. Throws Error{bin_mismatch} on length mismatch.
double frame_distance(std::span<const double> a, std::span<const double> b);

/// values[i] = frame_distance(h[i], h[i+1]); one bin per frame interval.
/// Throws Error{empty_sequence} for fewer than two frames.
ActivityGraph video_activity(const HistogramSeries& series);

/// Twin-window cut test on the activity series d. For each frame transition
/// c, W1 = d over the window_s before c and W2 = d over the window_s after it
/// (both excluding d[c]). A cut is declared at frame c+1 when
///   d[c] - mean(W1 u W2) > deviation_k * stdev(W1 u W2).
/// Candidates closer than min_shot_s to a stronger one, or to either end of
/// the series, are suppressed (stronger = larger z; earlier wins ties).
///
/// Throws Error{series_too_short} unless the series spans 2 * window_s.
std::vector<Boundary> detect_shots(const HistogramSeries& series, const ShotConfig& cfg = {});

/// Frame in [segment.t_start, segment.t_end) closest in L1 to the segment's
/// mean histogram; earliest frame on ties. Throws Error{empty_segment}.
KeyframeRef select_keyframe(const HistogramSeries& series, const Segment& segment);

}  // namespace pvseg
