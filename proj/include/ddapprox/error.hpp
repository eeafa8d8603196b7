#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ddapprox {

enum class ErrorCode {
    ZeroNode,
    ZeroVector,
    NotPowerOfTwo,
    LengthMismatch,
    CorruptVirtualEdge,
    UnknownGate,
    QubitOutOfRange,
    DuplicateQubitInCycle,
    NonMonotoneCycle,
    MalformedLine,
    GridTooSmall,
    UnsupportedOnApproximatedDD,
    TooManyQubits,
    LevelTooLow,
    NoCandidate,
    IllegalPair,
    InvalidArgument,
    DimensionMismatch,
    Io,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library. `code()` identifies the failure
/// class; parse errors additionally carry the 1-based input line.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what, int line = 0);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] int line() const noexcept { return line_; }

  private:
    ErrorCode code_;
    int line_;
};

} // namespace ddapprox
