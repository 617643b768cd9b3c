#pragma once

#include <stdexcept>
#include <string>

namespace laxconf {

// Error taxonomy. The CLI maps these onto process exit codes:
// parse_error -> 2, validation_error -> 3, cap_error -> 4, internal_error -> 5.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (JSON, rationals, command files).
struct parse_error : error {
  using error::error;
};

// Well-formed input that violates a precondition or schema invariant
// (quantale mismatch, carrier mismatch, non-surjective map, ...).
struct validation_error : error {
  using error::error;
};

// A configured resource bound was hit: enumeration caps, iteration caps,
// or rational arithmetic leaving the exactly representable range.
struct cap_error : error {
  using error::error;
};

// An internal invariant was broken; always a bug.
struct internal_error : error {
  using error::error;
};

}  // namespace laxconf
