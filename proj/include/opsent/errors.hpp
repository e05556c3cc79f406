#pragma once

#include <stdexcept>
#include <string>

namespace opsent {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: out-of-range value, malformed config, inconsistent flags.
// The CLI maps this to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Pair index with i == j or outside 1..3.
class IndexError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Kinematic configuration below the degeneracy thresholds (vanishing photon
// energy, undefined decay plane). CLI exit code 2.
class DegenerateKinematics : public Error {
public:
    using Error::Error;
};

// State norm below the zero-norm threshold; nothing can be normalized.
// CLI exit code 3.
class ZeroNormState : public Error {
public:
    using Error::Error;
};

// Basis tag does not match what the operation requires.
class BasisError : public Error {
public:
    using Error::Error;
};

// Every optimizer restart exhausted its iteration budget. CLI exit code 3.
class NoConvergence : public Error {
public:
    using Error::Error;
};

// A rejection-sampling weight beat the envelope; the envelope estimate is
// too small. CLI exit code 3.
class EnvelopeExceeded : public Error {
public:
    using Error::Error;
};

// Filesystem failure while writing output. CLI exit code 1.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace opsent
