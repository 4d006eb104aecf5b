#pragma once

#include <stdexcept>
#include <string>

namespace vsr {

/// Caller passed arguments that violate an operation's contract.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A file's structure does not match what its header declares.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Well-formed file carrying unusable values (NaN, out of range).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace vsr
