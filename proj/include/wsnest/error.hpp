#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wsn {

enum class ErrorCode {
    InvalidArgument,
    DuplicateEdge,
    SelfLoop,
    OutOfRange,
    Disconnected,
    RetriesExhausted,
    SingularCovariance,
    DimensionMismatch,
    ZeroInformation,
    NotConverged,
    ZeroTransmissionNoise,
    SingularR,
    ZeroVector,
    Parse,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by iterative routines that hit their cap; keeps the last residual.
class NotConvergedError : public Error {
public:
    NotConvergedError(const std::string& what, double residual);

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace wsn
