#pragma once

#include <vector>

namespace fixpoint::num {

/// Uniformly sampled scalar function on [x_start, x_end]. Node count is odd
/// (>= 3) so composite Simpson pairs tile the interval exactly.
struct SampledFunction1D {
    double x_start = 0.0;
    double x_end = 1.0;
    std::vector<double> values;

    SampledFunction1D() = default;
    SampledFunction1D(double x0, double x1, std::vector<double> v);

    int n_nodes() const { return static_cast<int>(values.size()); }
    double spacing() const { return (x_end - x_start) / (n_nodes() - 1); }
    double node(int i) const { return x_start + i * spacing(); }

    /// sup |values| over the nodes.
    double max_abs() const;
};

/// sup_i |f.values[i] - g.values[i]| for two functions on the same grid.
/// Throws GridMismatchError when ranges or node counts differ.
double sup_difference(const SampledFunction1D& f, const SampledFunction1D& g);

/// Running integral F(x_i) = int_{x_start}^{x_i} f, F(x_0) = 0. Even nodes by
/// composite Simpson; interior odd nodes by the quadratic rule on the
/// enclosing pair restricted to its first half (half-pair Simpson plus a
/// 3-point correction), so every node is populated. Exact for quadratic
/// integrands at all nodes and for cubics at even nodes.
SampledFunction1D cumulative_integral(const SampledFunction1D& f);

/// Piecewise cubic Hermite value at x (clamped to the sample range). Node
/// slopes use centered differences inside and cubic one-sided stencils at
/// the boundary, so node values are reproduced exactly, linear data exactly,
/// and smooth data at O(spacing^3).
double interpolate(const SampledFunction1D& f, double x);

}  // namespace fixpoint::num
