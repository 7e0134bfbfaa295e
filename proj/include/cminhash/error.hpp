#pragma once

#include <stdexcept>
#include <string>

namespace cmh {

enum class ErrorKind {
    InvalidArgument,
    InvalidDimension,
    EmptyVector,
    IncompatibleSketch,
    UndefinedSimilarity,
    Parse,
    Format,
    Budget,
    Io,
};

/// Single exception type for the library. The kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace cmh
