// error.hpp
// Exception hierarchy shared by every layer of the toolkit.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace otto {

enum class ErrorKind {
    InvalidState,
    InfiniteDivergence,
    NegativeTemperatureRequired,
    PopulationMismatch,
    InvalidAcceptor,
    InvalidDonor,
    ZeroWork,
    NotAnEngine,
    InvalidArgument,
    WrongOmega,
    IndexOutOfRange,
    ConfigError,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::InfiniteDivergence: return "InfiniteDivergence";
    case ErrorKind::NegativeTemperatureRequired: return "NegativeTemperatureRequired";
    case ErrorKind::PopulationMismatch: return "PopulationMismatch";
    case ErrorKind::InvalidAcceptor: return "InvalidAcceptor";
    case ErrorKind::InvalidDonor: return "InvalidDonor";
    case ErrorKind::ZeroWork: return "ZeroWork";
    case ErrorKind::NotAnEngine: return "NotAnEngine";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::WrongOmega: return "WrongOmega";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Domain error. `what()` is "<Kind>: <detail>" so diagnostics always lead
/// with the error name.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return to_string(kind_); }

private:
    ErrorKind kind_;
};

/// Configuration error carrying the 1-based line it was found on (0 when the
/// problem is not tied to a single line).
class ConfigError : public Error {
public:
    ConfigError(int line, const std::string& detail)
        : Error(ErrorKind::ConfigError,
                (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + detail),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& detail) {
    throw Error(kind, detail);
}

}  // namespace otto
