#pragma once

#include <stdexcept>
#include <string>

namespace cpnet {

/// Machine-readable failure categories surfaced by library operations.
enum class ErrorCode {
    UnknownAttribute,
    OutOfRange,
    CapacityOverflow,
    InvalidInput,
    TooLarge,
    TableMismatch,
    GraphMismatch,
    AttributeSetMismatch,
    NotComposable,
    NoComposableSubset,
    SyntaxError,
    ValidationError,
    IoError,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownAttribute: return "UnknownAttribute";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::CapacityOverflow: return "CapacityOverflow";
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::TableMismatch: return "TableMismatch";
        case ErrorCode::GraphMismatch: return "GraphMismatch";
        case ErrorCode::AttributeSetMismatch: return "AttributeSetMismatch";
        case ErrorCode::NotComposable: return "NotComposable";
        case ErrorCode::NoComposableSubset: return "NoComposableSubset";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

/// Exception type carrying an ErrorCode alongside the human message.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace cpnet
