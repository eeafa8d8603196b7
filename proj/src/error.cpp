#include "ddapprox/error.hpp"

namespace ddapprox {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::ZeroNode:
        return "ZeroNode";
    case ErrorCode::ZeroVector:
        return "ZeroVector";
    case ErrorCode::NotPowerOfTwo:
        return "NotPowerOfTwo";
    case ErrorCode::LengthMismatch:
        return "LengthMismatch";
    case ErrorCode::CorruptVirtualEdge:
        return "CorruptVirtualEdge";
    case ErrorCode::UnknownGate:
        return "UnknownGate";
    case ErrorCode::QubitOutOfRange:
        return "QubitOutOfRange";
    case ErrorCode::DuplicateQubitInCycle:
        return "DuplicateQubitInCycle";
    case ErrorCode::NonMonotoneCycle:
        return "NonMonotoneCycle";
    case ErrorCode::MalformedLine:
        return "MalformedLine";
    case ErrorCode::GridTooSmall:
        return "GridTooSmall";
    case ErrorCode::UnsupportedOnApproximatedDD:
        return "UnsupportedOnApproximatedDD";
    case ErrorCode::TooManyQubits:
        return "TooManyQubits";
    case ErrorCode::LevelTooLow:
        return "LevelTooLow";
    case ErrorCode::NoCandidate:
        return "NoCandidate";
    case ErrorCode::IllegalPair:
        return "IllegalPair";
    case ErrorCode::InvalidArgument:
        return "InvalidArgument";
    case ErrorCode::DimensionMismatch:
        return "DimensionMismatch";
    case ErrorCode::Io:
        return "Io";
    }
    return "Unknown";
}

namespace {
std::string format_message(ErrorCode code, const std::string &what, int line) {
    std::string msg(to_string(code));
    if (line > 0) {
        msg += " (line " + std::to_string(line) + ")";
    }
    if (!what.empty()) {
        msg += ": " + what;
    }
    return msg;
}
} // namespace

Error::Error(ErrorCode code, const std::string &what, int line)
    : std::runtime_error(format_message(code, what, line)), code_(code),
      line_(line) {}

} // namespace ddapprox
