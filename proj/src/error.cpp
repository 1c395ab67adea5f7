#include "wsnest/error.hpp"

namespace wsn {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::Disconnected: return "Disconnected";
        case ErrorCode::RetriesExhausted: return "RetriesExhausted";
        case ErrorCode::SingularCovariance: return "SingularCovariance";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ZeroInformation: return "ZeroInformation";
        case ErrorCode::NotConverged: return "NotConverged";
        case ErrorCode::ZeroTransmissionNoise: return "ZeroTransmissionNoise";
        case ErrorCode::SingularR: return "SingularR";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

NotConvergedError::NotConvergedError(const std::string& what, double residual)
    : Error(ErrorCode::NotConverged, what + " (residual " + std::to_string(residual) + ")"),
      residual_(residual) {}

}  // namespace wsn
