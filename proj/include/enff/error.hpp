#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace enff {

enum class ErrorCode {
    MalformedRow,
    GapDetected,
    DuplicateTimestamp,
    RangeOutOfData,
    InvalidSplit,
    SeriesTooShort,
    DegenerateVariance,
    InsufficientHistory,
    EmptyTrainingSet,
    SignalTooShort,
    LengthMismatch,
    DimensionMismatch,
    UnsupportedKind,
    EmptyDataset,
    InsufficientData,
    EmptyValidation,
    ZeroActual,
    EmptyInput,
    InvalidConfig,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (and tests) can dispatch on the kind without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace enff
