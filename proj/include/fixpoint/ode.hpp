#pragma once

#include <functional>
#include <vector>

#include "fixpoint/linalg.hpp"

namespace fixpoint::num {

/// Autonomous right-hand side dy = f(y).
using Rhs = std::function<Vec(const Vec&)>;

/// Flow map phi_t(y0) by adaptive Dormand-Prince 5(4). tol feeds both the
/// absolute and relative per-step error control. t may be negative (backward
/// flow) or zero (returns y0 unchanged). Deterministic: fixed coefficients,
/// fixed controller, no randomness.
/// Throws ConvergenceError on step-size underflow (stiff or escaping
/// trajectory) or when the state stops being finite.
Vec integrate_flow(const Rhs& f, const Vec& y0, double t, double tol);

/// As integrate_flow, but also records the state at the requested
/// intermediate times (dense output via extra integration legs; sample_times
/// must be sorted toward t). Used for trajectory plots.
std::vector<Vec> integrate_path(const Rhs& f, const Vec& y0, const std::vector<double>& sample_times,
                                double tol);

}  // namespace fixpoint::num
