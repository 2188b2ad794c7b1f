#ifndef ORIWHEEL_ERRORS_HPP
#define ORIWHEEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace oriwheel {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A parameter violates its domain (non-positive length, bad angle, ...).
struct InvalidParams : Error {
    using Error::Error;
};

/// The rigid-folding branch does not exist at the requested fold angle.
struct FoldInfeasible : Error {
    using Error::Error;
};

/// Ring closure residual cannot be brought below tolerance in the fold range.
struct NoClosure : Error {
    using Error::Error;
};

/// The closed-form closure angle is undefined for these parameters.
struct Infeasible : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct NoFeasibleDesign : Error {
    using Error::Error;
};

struct CalibrationFailed : Error {
    using Error::Error;
};

/// Configuration document fails schema validation.
struct ValidationError : Error {
    using Error::Error;
};

} // namespace oriwheel

#endif // ORIWHEEL_ERRORS_HPP
