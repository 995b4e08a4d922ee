#pragma once

#include <stdexcept>
#include <string>

namespace graspsynth {

enum class ErrorKind {
    InvalidArgument,
    InvalidState,
    EmptyResult,
    EmptyDemonstration,
    NoAffinity,
    DegenerateVariance,
    UnsupportedGripper,
    InvalidStart,
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; `kind()` lets callers (the CLI in
// particular) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

inline void require(bool condition, const std::string& what) {
    if (!condition) {
        throw Error(ErrorKind::InvalidArgument, what);
    }
}

}  // namespace graspsynth
