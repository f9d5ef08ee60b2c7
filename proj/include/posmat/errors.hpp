#pragma once

#include <stdexcept>
#include <string>

namespace posmat {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two values live over different variable contexts.
struct ContextMismatch : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

/// A computed object violated one of its own invariants; indicates a bug.
struct InternalError : Error {
    using Error::Error;
};

}  // namespace posmat
