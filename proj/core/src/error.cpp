#include "pvseg/error.hpp"

namespace pvseg {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::malformed_container: return "MalformedContainer";
    case Errc::unsupported_encoding: return "UnsupportedEncoding";
    case Errc::inconsistent_dimensions: return "InconsistentDimensions";
    case Errc::empty_sequence: return "EmptySequence";
    case Errc::clip_too_short: return "ClipTooShort";
    case Errc::insufficient_samples: return "InsufficientSamples";
    case Errc::singular_covariance: return "SingularCovariance";
    case Errc::unsorted_boundaries: return "UnsortedBoundaries";
    case Errc::bin_mismatch: return "BinMismatch";
    case Errc::series_too_short: return "SeriesTooShort";
    case Errc::empty_segment: return "EmptySegment";
    case Errc::malformed_line: return "MalformedLine";
    case Errc::non_monotonic_timestamps: return "NonMonotonicTimestamps";
    case Errc::scale_out_of_range: return "ScaleOutOfRange";
    case Errc::io_failure: return "IoFailure";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::missing_dependency: return "MissingDependency";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace pvseg
