#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pvseg {

enum class Errc {
  malformed_container,
  unsupported_encoding,
  inconsistent_dimensions,
  empty_sequence,
  clip_too_short,
  insufficient_samples,
  singular_covariance,
  unsorted_boundaries,
  bin_mismatch,
  series_too_short,
  empty_segment,
  malformed_line,
  non_monotonic_timestamps,
  scale_out_of_range,
  io_failure,
  invalid_argument,
  missing_dependency,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the Errc codes above so
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace pvseg
