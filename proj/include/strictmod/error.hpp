#pragma once

#include <stdexcept>
#include <string>

namespace strictmod {

enum class ErrorKind {
    Domain,          // bad input values or shapes
    Mismatch,        // incompatible fields, bases or sizes
    DivisionByZero,
    Precision,       // truncated data cannot decide the question
    Capacity,        // desk-scale guard tripped
    NotSupported,    // input outside the shapes an operation handles
    Tower,           // extension tower cannot hold all solutions
    Parse,
};

inline const char* to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Mismatch: return "mismatch";
    case ErrorKind::DivisionByZero: return "division-by-zero";
    case ErrorKind::Precision: return "precision";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::NotSupported: return "not-supported";
    case ErrorKind::Tower: return "tower-insufficient";
    case ErrorKind::Parse: return "parse";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace strictmod
