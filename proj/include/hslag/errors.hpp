#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hslag {

// Base for all recoverable failures raised by the library. The CLI maps
// ConfigError to exit code 2 and NumericError subclasses to exit code 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

struct EvaluationAtSingularity : NumericError {
    using NumericError::NumericError;
};

struct LoopTooCloseToSingularity : NumericError {
    using NumericError::NumericError;
};

struct ResolutionTooCoarse : NumericError {
    using NumericError::NumericError;
};

struct TooCoarse : NumericError {
    using NumericError::NumericError;
};

struct SingularityOnNode : NumericError {
    using NumericError::NumericError;
};

struct IncompatibleBoundaryData : NumericError {
    using NumericError::NumericError;
};

struct NoConvergence : NumericError {
    NoConvergence(std::uint64_t iterations_, double residual_, const std::string& what_)
        : NumericError(what_), iterations(iterations_), residual(residual_) {}
    std::uint64_t iterations;
    double residual;
};

struct PathDependence : NumericError {
    using NumericError::NumericError;
};

struct ContourCrossesZeroSet : NumericError {
    using NumericError::NumericError;
};

struct DegenerateMetric : NumericError {
    using NumericError::NumericError;
};

struct UniquenessViolation : NumericError {
    using NumericError::NumericError;
};

}  // namespace hslag
