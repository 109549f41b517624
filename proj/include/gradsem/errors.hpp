#ifndef GRADSEM_ERRORS_HPP
#define GRADSEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gradsem {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed inputs: manifests, CSV rows, config values, program text.
// CLI exit code 2.
struct ValidationError : Error {
    using Error::Error;
};

// Scoring-backend failures: transport errors after retries, protocol
// violations, fixture cache misses. CLI exit code 3.
struct BackendError : Error {
    using Error::Error;
};

// Numeric/statistical failures: NaN scores, grid mismatches, degenerate
// objectives, sampling floors. CLI exit code 4.
struct StatsError : Error {
    using Error::Error;
};

// Church program errors carry source positions where available.
struct LexError : ValidationError {
    using ValidationError::ValidationError;
};

struct ParseError : ValidationError {
    using ValidationError::ValidationError;
};

struct EvalError : ValidationError {
    using ValidationError::ValidationError;
};

}  // namespace gradsem

#endif  // GRADSEM_ERRORS_HPP
