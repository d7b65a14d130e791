#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fifcover {

enum class ErrorCode {
    NonIncreasingAbscissas,
    LengthMismatch,
    ScalingOutOfRange,
    TooFewPoints,
    NonFiniteValue,
    DegenerateMap,
    LetterOutOfRange,
    DepthCapExceeded,
    MalformedDocument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonIncreasingAbscissas: return "NonIncreasingAbscissas";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ScalingOutOfRange: return "ScalingOutOfRange";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::DegenerateMap: return "DegenerateMap";
    case ErrorCode::LetterOutOfRange: return "LetterOutOfRange";
    case ErrorCode::DepthCapExceeded: return "DepthCapExceeded";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    }
    return "Unknown";
}

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace fifcover
