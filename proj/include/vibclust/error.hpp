#ifndef VIBCLUST_ERROR_HPP
#define VIBCLUST_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace vibclust {

enum class ErrorCode {
    InvalidArgument,
    MissingFile,
    MissingColumn,
    NonNumericCell,
    LabelOutOfRange,
    NoWindows,
    DimensionMismatch,
    MissingPrerequisite,
    Io,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::MissingFile: return "missing file";
        case ErrorCode::MissingColumn: return "missing column";
        case ErrorCode::NonNumericCell: return "non-numeric cell";
        case ErrorCode::LabelOutOfRange: return "label out of range";
        case ErrorCode::NoWindows: return "no windows";
        case ErrorCode::DimensionMismatch: return "dimension mismatch";
        case ErrorCode::MissingPrerequisite: return "missing prerequisite";
        case ErrorCode::Io: return "i/o error";
    }
    return "unknown error";
}

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

inline void require(bool condition, std::string_view message,
                    ErrorCode code = ErrorCode::InvalidArgument) {
    if (!condition) {
        throw Error(code, std::string(message));
    }
}

}  // namespace vibclust

#endif  // VIBCLUST_ERROR_HPP
