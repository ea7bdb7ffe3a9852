#pragma once

#include <stdexcept>
#include <string>

namespace fixpoint {

/// A hypothesis of the underlying theorem failed to hold for the given input
/// (the construction cannot even start). CLI maps these to exit code 2.
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Difference quotients of f in y keep growing under refinement, or exceed
/// the configured cap: no usable Lipschitz constant on the rectangle.
struct LipschitzUnboundedError : HypothesisError {
    using HypothesisError::HypothesisError;
};

/// Some eigenvalue of the linearization has |Re lambda| below tolerance.
struct NonHyperbolicError : HypothesisError {
    using HypothesisError::HypothesisError;
};

/// f evaluated to a nonfinite value (or hit a domain error) on the sample
/// grid, so sup-based bounds are meaningless.
struct NonfiniteSampleError : HypothesisError {
    using HypothesisError::HypothesisError;
};

/// The Schur basis is numerically rank deficient (condition number > 1e8).
struct IllConditionedBasisError : HypothesisError {
    using HypothesisError::HypothesisError;
};

/// Contraction-constant calibration failed: ||e^P|| >= 1, ||e^-Q|| >= 1, no
/// Holder exponent gives r < 1, or the cutoff radius underflowed.
struct CalibrationError : HypothesisError {
    using HypothesisError::HypothesisError;
};

/// A Picard iterate left the rectangle |y - y0| <= b. Cannot happen when M,
/// L, h come from this library's own estimators; user overrides can trip it.
struct IterateEscapedRectangleError : HypothesisError {
    using HypothesisError::HypothesisError;
};

/// An iterative kernel (ODE step control, fixed-point inversion, Newton)
/// failed to converge. CLI maps these to exit code 3.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two sampled functions were combined across incompatible grids.
struct GridMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace fixpoint
