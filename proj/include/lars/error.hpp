#pragma once

#include <stdexcept>
#include <string>

namespace lars {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file (config or trace). Carries file/line context in the message.
struct ParseError : Error {
    using Error::Error;
};

// Structurally valid input that violates an invariant; message names the field.
struct ValidationError : Error {
    using Error::Error;
};

// Trace semantics violated (e.g. icount going backwards).
struct TraceError : Error {
    using Error::Error;
};

// Trace ended while the tuner was still sampling retention units.
struct PartialSamplingError : Error {
    using Error::Error;
};

// A should-never-happen condition; maps to exit code 4 in the CLI.
struct InternalError : Error {
    using Error::Error;
};

inline void check_internal(bool cond, const char* what) {
    if (!cond)
        throw InternalError(std::string("internal invariant failed: ") + what);
}

}  // namespace lars
