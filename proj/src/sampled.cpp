#include "fixpoint/sampled.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fixpoint/errors.hpp"

namespace fixpoint::num {

SampledFunction1D::SampledFunction1D(double x0, double x1, std::vector<double> v)
    : x_start(x0), x_end(x1), values(std::move(v)) {
    if (!(x_end > x_start)) throw std::invalid_argument("sample range must have x_end > x_start");
    const int n = n_nodes();
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("node count must be odd and at least 3");
}

double SampledFunction1D::max_abs() const {
    double best = 0.0;
    for (double v : values) best = std::max(best, std::fabs(v));
    return best;
}

double sup_difference(const SampledFunction1D& f, const SampledFunction1D& g) {
    if (f.n_nodes() != g.n_nodes() || f.x_start != g.x_start || f.x_end != g.x_end)
        throw GridMismatchError("sampled functions live on different grids");
    double best = 0.0;
    for (int i = 0; i < f.n_nodes(); ++i)
        best = std::max(best, std::fabs(f.values[static_cast<std::size_t>(i)] -
                                        g.values[static_cast<std::size_t>(i)]));
    return best;
}

SampledFunction1D cumulative_integral(const SampledFunction1D& f) {
    const int n = f.n_nodes();
    const double h = f.spacing();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    const auto& v = f.values;
    for (int i = 0; i + 2 < n; i += 2) {
        const double f0 = v[static_cast<std::size_t>(i)];
        const double f1 = v[static_cast<std::size_t>(i + 1)];
        const double f2 = v[static_cast<std::size_t>(i + 2)];
        // First half of the pair: quadratic through (f0, f1, f2) integrated
        // over [x_i, x_i+1]; equivalently half-pair Simpson + h/4 (f0 - f2).
        out[static_cast<std::size_t>(i + 1)] =
            out[static_cast<std::size_t>(i)] + h * (5.0 * f0 + 8.0 * f1 - f2) / 12.0;
        out[static_cast<std::size_t>(i + 2)] =
            out[static_cast<std::size_t>(i)] + h * (f0 + 4.0 * f1 + f2) / 3.0;
    }
    return SampledFunction1D(f.x_start, f.x_end, std::move(out));
}

namespace {

// Node slope estimates: 4th-order one-sided cubic stencils at the two
// boundary nodes (exact for cubics), centered differences inside.
double node_slope(const std::vector<double>& v, int i, int n, double h) {
    if (i == 0) {
        if (n == 3) return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
        return (-11.0 * v[0] + 18.0 * v[1] - 9.0 * v[2] + 2.0 * v[3]) / (6.0 * h);
    }
    if (i == n - 1) {
        const auto at = [&](int k) { return v[static_cast<std::size_t>(k)]; };
        if (n == 3) return (3.0 * at(2) - 4.0 * at(1) + at(0)) / (2.0 * h);
        return (11.0 * at(n - 1) - 18.0 * at(n - 2) + 9.0 * at(n - 3) - 2.0 * at(n - 4)) / (6.0 * h);
    }
    return (v[static_cast<std::size_t>(i + 1)] - v[static_cast<std::size_t>(i - 1)]) / (2.0 * h);
}

}  // namespace

double interpolate(const SampledFunction1D& f, double x) {
    const int n = f.n_nodes();
    const double h = f.spacing();
    double u = (x - f.x_start) / h;
    u = std::clamp(u, 0.0, static_cast<double>(n - 1));
    int cell = static_cast<int>(u);
    cell = std::min(cell, n - 2);
    const double t = u - cell;

    const double y0 = f.values[static_cast<std::size_t>(cell)];
    const double y1 = f.values[static_cast<std::size_t>(cell + 1)];
    if (t == 0.0) return y0;
    const double m0 = node_slope(f.values, cell, n, h) * h;
    const double m1 = node_slope(f.values, cell + 1, n, h) * h;

    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 +
           (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
}

}  // namespace fixpoint::num
