#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "fixpoint/expr.hpp"
#include "fixpoint/sampled.hpp"

namespace fixpoint::picard {

/// Scalar initial value problem y' = f(x, y), y(x0) = y0, studied on the
/// closed rectangle |x - x0| <= a, |y - y0| <= b.
struct Ivp {
    expr::ExprAst f;
    double x0 = 0.0;
    double y0 = 0.0;
    double a = 1.0;
    double b = 1.0;

    static Ivp make(std::string_view f_source, double x0, double y0, double a, double b);
};

struct SolveOptions {
    double tol = 1e-8;
    int max_iterations = 30;
    int n_nodes = 1025;            // odd; nodes of the iterate grid on [x0, x0+h]
    int samples_per_axis = 65;     // rectangle sampling for the sup bounds
    double lipschitz_cap = 1e6;
    bool backward = false;         // solve on [x0-h, x0] instead (mirrored field)
    std::optional<double> start_value;  // phi_0 = const start_value instead of y0
};

struct PicardRun {
    num::SampledFunction1D solution;
    std::vector<num::SampledFunction1D> iterates;  // phi_0, phi_1, ...
    std::vector<double> gaps;     // gaps[k] = sup |phi_{k+1} - phi_k|
    std::vector<double> apriori;  // apriori[k] = apriori_gap_bound(M, L, h, k+1)
    double bound_m = 0.0;
    double lipschitz = 0.0;
    double interval = 0.0;        // half-width h actually used
    double residual = 0.0;        // sup |phi' - f(x, phi)| by centered differences
    bool converged = false;
    int iterations = 0;           // integral-operator applications performed
};

/// Safety-padded sup of |f| over the rectangle sample grid. Nonfinite or
/// domain-error samples raise NonfiniteSampleError.
double bound_M(const Ivp& ivp, int samples_per_axis = 65);

/// Safety-padded Lipschitz constant of f in y over the rectangle. Uses the
/// symbolic derivative when available, otherwise difference quotients whose
/// spacing is refined twice; quotients that keep growing under refinement or
/// exceed `cap` raise LipschitzUnboundedError.
double estimate_L(const Ivp& ivp, int samples_per_axis = 65, double cap = 1e6);

/// h = min(a, b / M); M = 0 degenerates to h = a.
double existence_interval(const Ivp& ivp, double m);

/// One application of the integral operator: (x, phi) -> y0 + int_{x0}^x f(t, phi(t)) dt.
/// The iterate must live on a grid starting or ending at x0.
num::SampledFunction1D picard_step(const Ivp& ivp, const num::SampledFunction1D& phi);

/// Run the iteration from phi_0 = const (start_value or y0) until the sup gap
/// is <= tol and the residual is <= 10 tol, or max_iterations is exhausted.
/// An iterate leaving |y - y0| <= b raises IterateEscapedRectangleError.
PicardRun solve(const Ivp& ivp, const SolveOptions& options = {});

/// (M / L) (L h)^n / n!, the classical bound on sup |phi_n - phi_{n-1}|.
double apriori_gap_bound(double m, double lip, double h, int n);

/// (M / L) sum_{k >= n} (L h)^k / k!, bounding sup |phi_m - phi_n| for all m > n.
double cauchy_tail_bound(double m, double lip, double h, int n);

/// Pointwise C exp(int_{x_start}^x A), the comparison envelope for
/// z(x) <= C + int A z. Negative C or negative samples of A are rejected.
num::SampledFunction1D gronwall_envelope(double c, const num::SampledFunction1D& a);

/// sup over interior nodes of |phi'(x_i) - f(x_i, phi(x_i))| with phi'
/// estimated by centered differences.
double residual(const Ivp& ivp, const num::SampledFunction1D& phi);

/// Sup distance between two runs' final iterates (same grid required).
double uniqueness_gap(const PicardRun& first, const PicardRun& second);

}  // namespace fixpoint::picard
