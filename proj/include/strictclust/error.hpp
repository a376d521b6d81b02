#ifndef STRICTCLUST_ERROR_HPP
#define STRICTCLUST_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace strictclust {

enum class ErrorCode {
    StrictnessOutOfRange,
    BadDimensionality,
    DimensionMismatch,
    NegativeFeature,
    NonFiniteFeature,
    ParseError,
    IoError,
    ChecksumMismatch,
    VersionUnsupported,
    InvariantViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI, the Python module) can map it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Malformed input text. line is 1-based (0 when unknown), column is the
// 1-based field index within a CSV row (0 for JSONL or whole-line problems).
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace strictclust

#endif  // STRICTCLUST_ERROR_HPP
