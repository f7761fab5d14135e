#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace specssa {

enum class ErrorCode {
    EmptySeries,
    WindowOutOfRange,
    ConvergenceFailure,
    GridTooSmall,
    GridMismatch,
    InvariantViolation,
    DimensionMismatch,
    IndexOutOfRange,
    BadParams,
    Io,
    Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// command-line front-end can map it to a stable exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace specssa
