#pragma once

#include <stdexcept>
#include <string>

namespace relscat {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpeedExceeded : Error { using Error::Error; };
struct NegativeInput : Error { using Error::Error; };
struct NonPerpendicular : Error { using Error::Error; };
struct BelowThreshold : Error { using Error::Error; };
struct ConditionViolated : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct QuadratureFailure : Error { using Error::Error; };
struct StepFailure : Error { using Error::Error; };
struct ExtrapolationDiverged : Error { using Error::Error; };
struct InsufficientSampling : Error { using Error::Error; };
struct SlowDecay : Error { using Error::Error; };
struct BelowRho0 : Error { using Error::Error; };
struct NoRoot : Error { using Error::Error; };

struct ConfigError : Error {
    ConfigError(const std::string& msg, int line = 0)
        : Error(line > 0 ? "config line " + std::to_string(line) + ": " + msg : msg),
          line_number(line) {}
    int line_number;
};

}  // namespace relscat
