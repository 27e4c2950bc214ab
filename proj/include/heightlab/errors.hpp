#pragma once

#include <stdexcept>
#include <string>

namespace heightlab {

// Malformed user input (fractions, polynomial maps, flags). CLI exit code 2.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configured resource ceiling was hit: orbit bit-length, iteration
// ceiling, polynomial degree, or the p-adic working-precision cap.
// CLI exit code 3.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --strict rejected an input that would otherwise be normalized with a
// warning. CLI exit code 4.
struct StrictInputViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An enumeration region exceeds the configured candidate budget. CLI exit
// code 5.
struct RegionTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A finite-place cocycle could not resolve a valuation at the current
// working precision. Internal: callers double the precision and restart
// from the initial state; it never crosses the public height API.
struct PrecisionExhausted : std::runtime_error {
    explicit PrecisionExhausted(long digits_)
        : std::runtime_error("p-adic working precision exhausted at " +
                             std::to_string(digits_) + " digits"),
          digits(digits_) {}
    long digits;
};

} // namespace heightlab
