#pragma once

#include <stdexcept>
#include <string>

namespace omcoh {

/// Input violates a physicality bound (uncertainty principle, negative
/// occupation, covariance not positive enough).
struct PhysicalityError : std::domain_error {
    explicit PhysicalityError(const std::string& msg) : std::domain_error(msg) {}
};

/// Malformed input: wrong shape, non-finite entries, out-of-range argument.
struct InputError : std::invalid_argument {
    explicit InputError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Drift matrix is not strictly stable; carries the diagnostics a caller
/// needs to report the margin situation.
struct StabilityError : std::runtime_error {
    StabilityError(const std::string& msg, double margin1, double margin2,
                   double abscissa)
        : std::runtime_error(msg),
          margin1(margin1),
          margin2(margin2),
          abscissa(abscissa) {}

    double margin1 = 0.0;
    double margin2 = 0.0;
    double abscissa = 0.0;
};

/// Working point sits inside the marginal band where the steady
/// covariance diverges; distinct from a clear-cut instability.
struct MarginalStabilityError : StabilityError {
    using StabilityError::StabilityError;
};

/// Iterative scheme ran out of its time budget.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& msg, double final_norm)
        : std::runtime_error(msg), final_norm(final_norm) {}

    double final_norm = 0.0;
};

/// Linear-algebra backend failure (singular system, eigensolver breakdown).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Configuration file problem; message names the offending key.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Measurement record inconsistent with the detection model (output
/// covariance below the vacuum floor).
struct MeasurementError : std::runtime_error {
    explicit MeasurementError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace omcoh
