#pragma once

#include <stdexcept>
#include <string>

namespace hartogs {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Structurally invalid input: bad parameter triples, non-positive mu,
/// malformed rational literals, violated operation preconditions.
struct InvalidArgument : Error {
    using Error::Error;
};

/// A point left the domain where a kernel/potential/metric is defined
/// (boundary contact, dual-kernel positivity failure, non-PD metric).
struct DomainViolation : Error {
    using Error::Error;
};

/// Two routes that must agree by theory disagreed.  This indicates a bug in
/// the implementation, never a property of the input.
struct InternalConsistencyError : Error {
    using Error::Error;
};

} // namespace hartogs
