#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qverify {

enum class ErrorCode {
    ModeMismatch,
    NotAUnit,
    GridMismatch,
    IndeterminateValuation,
    Pole,
    Divergent,
    SyntaxError,
    UnboundIndex,
    UnknownParameter,
    UnresolvedSign,
    NonCoercive,
    ConstraintViolation,
    ExhaustedSampler,
    UnknownId,
    NotPositiveDefinite,
    Precondition,
    Io,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI and the report writer can classify it without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message)
{
    throw Error(code, message);
}

} // namespace qverify
