#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trigsvm {

enum class ErrorKind {
    invalid_parameter,
    shape,
    empty_input,
    data,
    numerical_failure,
    regularization_failure,
    degenerate_data,
    convergence,
    protocol,
    label,
    parse,
    io,
    format,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base exception for every library failure. The kind lets callers branch
/// without a deep class hierarchy.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when SMO hits its iteration cap. Carries the gap at that point.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& message, double violation, long iterations)
        : Error(ErrorKind::convergence, message), violation_(violation), iterations_(iterations) {}

    double violation() const noexcept { return violation_; }
    long iterations() const noexcept { return iterations_; }

private:
    double violation_;
    long iterations_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_parameter: return "invalid parameter";
        case ErrorKind::shape: return "shape error";
        case ErrorKind::empty_input: return "empty input";
        case ErrorKind::data: return "data error";
        case ErrorKind::numerical_failure: return "numerical failure";
        case ErrorKind::regularization_failure: return "regularization failure";
        case ErrorKind::degenerate_data: return "degenerate data";
        case ErrorKind::convergence: return "convergence error";
        case ErrorKind::protocol: return "protocol error";
        case ErrorKind::label: return "label error";
        case ErrorKind::parse: return "parse error";
        case ErrorKind::io: return "I/O error";
        case ErrorKind::format: return "format error";
    }
    return "error";
}

}  // namespace trigsvm
