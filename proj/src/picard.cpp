#include "fixpoint/picard.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fixpoint/errors.hpp"

namespace fixpoint::picard {

namespace {

constexpr double kSafety = 1.05;
constexpr int kMinSamples = 33;

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = lo + i * step;
    xs.back() = hi;
    return xs;
}

double eval_f(const Ivp& ivp, double x, double y) {
    const double args[2] = {x, y};
    return ivp.f.eval(std::span<const double>(args, 2));
}

void check_samples(int samples_per_axis) {
    if (samples_per_axis < kMinSamples)
        throw std::invalid_argument("rectangle sampling needs at least 33 points per axis");
}

/// Field for the reflected problem x -> 2 x0 - x, which turns a backward
/// solve into a forward one with the same rectangle constants.
Ivp mirrored(const Ivp& ivp) {
    auto vars = ivp.f.variables();
    auto reflected_x = expr::ExprAst::constant(2.0 * ivp.x0, vars) - expr::ExprAst::variable("x", vars);
    Ivp out = ivp;
    out.f = -ivp.f.substitute("x", reflected_x);
    return out;
}

num::SampledFunction1D mirror_back(const num::SampledFunction1D& phi, double x0) {
    std::vector<double> values(phi.values.rbegin(), phi.values.rend());
    return num::SampledFunction1D(2.0 * x0 - phi.x_end, x0, std::move(values));
}

}  // namespace

Ivp Ivp::make(std::string_view f_source, double x0, double y0, double a, double b) {
    if (!(a > 0) || !(b > 0))
        throw std::invalid_argument("rectangle half-widths must be positive");
    Ivp ivp{expr::ExprAst::parse(f_source, {"x", "y"}), x0, y0, a, b};
    return ivp;
}

double bound_M(const Ivp& ivp, int samples_per_axis) {
    check_samples(samples_per_axis);
    auto xs = linspace(ivp.x0 - ivp.a, ivp.x0 + ivp.a, samples_per_axis);
    auto ys = linspace(ivp.y0 - ivp.b, ivp.y0 + ivp.b, samples_per_axis);
    double sup = 0.0;
    for (double x : xs) {
        for (double y : ys) {
            double v;
            try {
                v = eval_f(ivp, x, y);
            } catch (const expr::EvalDomainError& e) {
                throw NonfiniteSampleError(std::string("field not evaluable on the rectangle: ") + e.what());
            }
            sup = std::max(sup, std::abs(v));
        }
    }
    return kSafety * sup;
}

double estimate_L(const Ivp& ivp, int samples_per_axis, double cap) {
    check_samples(samples_per_axis);
    auto xs = linspace(ivp.x0 - ivp.a, ivp.x0 + ivp.a, samples_per_axis);

    bool symbolic_ok = true;
    double sup = 0.0;
    try {
        auto df = ivp.f.differentiate("y");
        auto ys = linspace(ivp.y0 - ivp.b, ivp.y0 + ivp.b, samples_per_axis);
        for (double x : xs) {
            for (double y : ys) {
                const double args[2] = {x, y};
                sup = std::max(sup, std::abs(df.eval(std::span<const double>(args, 2))));
            }
        }
    } catch (const expr::DerivativeError&) {
        symbolic_ok = false;
    } catch (const expr::EvalDomainError&) {
        // The derivative exists symbolically but blows up somewhere on the
        // rectangle (fractional powers at zero and the like); let the
        // difference quotients decide whether it is genuinely unbounded.
        symbolic_ok = false;
    }

    if (!symbolic_ok) {
        // Difference quotients at three spacings, each pass 4x finer. A
        // bounded derivative gives stable quotients; a blow-up keeps growing.
        double base = 2.0 * ivp.b / (samples_per_axis - 1);
        double estimates[3] = {0.0, 0.0, 0.0};
        for (int pass = 0; pass < 3; ++pass) {
            double d = base / std::pow(4.0, pass);
            long steps = (samples_per_axis - 1) * (pass == 0 ? 1L : pass == 1 ? 4L : 16L);
            double worst = 0.0;
            try {
                for (double x : xs) {
                    double prev = eval_f(ivp, x, ivp.y0 - ivp.b);
                    for (long j = 1; j <= steps; ++j) {
                        double y = (j == steps) ? ivp.y0 + ivp.b : ivp.y0 - ivp.b + j * d;
                        double cur = eval_f(ivp, x, y);
                        worst = std::max(worst, std::abs(cur - prev) / d);
                        prev = cur;
                    }
                }
            } catch (const expr::EvalDomainError& e) {
                throw NonfiniteSampleError(std::string("field not evaluable on the rectangle: ") + e.what());
            }
            estimates[pass] = worst;
        }
        if (estimates[1] > 1.5 * estimates[0] && estimates[2] > 1.5 * estimates[1])
            throw LipschitzUnboundedError(
                "difference quotients keep growing under grid refinement; "
                "no Lipschitz constant in y on this rectangle");
        sup = std::max({estimates[0], estimates[1], estimates[2]});
    }

    double lip = kSafety * sup;
    if (lip > cap)
        throw LipschitzUnboundedError("Lipschitz estimate exceeds the cap of " + std::to_string(cap));
    return lip;
}

double existence_interval(const Ivp& ivp, double m) {
    if (m < 0) throw std::invalid_argument("sup bound must be nonnegative");
    if (m == 0) return ivp.a;
    return std::min(ivp.a, ivp.b / m);
}

num::SampledFunction1D picard_step(const Ivp& ivp, const num::SampledFunction1D& phi) {
    double scale = std::max({1.0, std::abs(phi.x_start), std::abs(phi.x_end)});
    if (std::abs(phi.x_start - ivp.x0) > 1e-12 * scale)
        throw std::invalid_argument("iterate grid must start at x0");
    int n = phi.n_nodes();
    std::vector<double> integrand(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        try {
            integrand[static_cast<std::size_t>(i)] = eval_f(ivp, phi.node(i), phi.values[static_cast<std::size_t>(i)]);
        } catch (const expr::EvalDomainError& e) {
            throw NonfiniteSampleError(std::string("field not evaluable along the iterate: ") + e.what());
        }
    }
    num::SampledFunction1D g(phi.x_start, phi.x_end, std::move(integrand));
    auto integral = num::cumulative_integral(g);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = ivp.y0 + integral.values[static_cast<std::size_t>(i)];
    return num::SampledFunction1D(phi.x_start, phi.x_end, std::move(out));
}

PicardRun solve(const Ivp& ivp, const SolveOptions& options) {
    if (!(options.tol > 0)) throw std::invalid_argument("tol must be positive");
    if (options.max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");

    PicardRun run;
    run.bound_m = bound_M(ivp, options.samples_per_axis);
    run.lipschitz = estimate_L(ivp, options.samples_per_axis, options.lipschitz_cap);
    run.interval = existence_interval(ivp, run.bound_m);

    const Ivp iter_ivp = options.backward ? mirrored(ivp) : ivp;

    double start = options.start_value.value_or(ivp.y0);
    double escape = ivp.b + 1e-12 * std::max(1.0, std::abs(ivp.y0) + ivp.b);
    if (std::abs(start - ivp.y0) > escape)
        throw IterateEscapedRectangleError("initial function lies outside the rectangle");

    num::SampledFunction1D phi(ivp.x0, ivp.x0 + run.interval,
                               std::vector<double>(static_cast<std::size_t>(options.n_nodes), start));
    run.iterates.push_back(phi);

    for (int k = 0; k < options.max_iterations; ++k) {
        auto next = picard_step(iter_ivp, phi);
        ++run.iterations;
        for (double v : next.values) {
            if (std::abs(v - ivp.y0) > escape)
                throw IterateEscapedRectangleError(
                    "iterate " + std::to_string(run.iterations) + " leaves |y - y0| <= b");
        }
        double gap = num::sup_difference(next, phi);
        run.gaps.push_back(gap);
        run.apriori.push_back(apriori_gap_bound(run.bound_m, run.lipschitz, run.interval, k + 1));
        run.iterates.push_back(next);
        phi = next;
        if (gap <= options.tol) {
            run.residual = residual(iter_ivp, phi);
            if (run.residual <= 10.0 * options.tol) {
                run.converged = true;
                break;
            }
        }
    }
    if (!run.converged) run.residual = residual(iter_ivp, phi);
    run.solution = phi;

    if (options.backward) {
        for (auto& it : run.iterates) it = mirror_back(it, ivp.x0);
        run.solution = mirror_back(run.solution, ivp.x0);
        run.residual = residual(ivp, run.solution);
    }
    return run;
}

double apriori_gap_bound(double m, double lip, double h, int n) {
    if (n < 1) throw std::invalid_argument("iteration index must be >= 1");
    if (m < 0 || lip < 0 || !(h > 0)) throw std::invalid_argument("bad theorem constants");
    if (m == 0) return 0.0;
    if (lip == 0) return n == 1 ? m * h : 0.0;
    return std::exp(std::log(m / lip) + n * std::log(lip * h) - std::lgamma(n + 1.0));
}

double cauchy_tail_bound(double m, double lip, double h, int n) {
    if (n < 0) throw std::invalid_argument("iteration index must be >= 0");
    if (m < 0 || lip < 0 || !(h > 0)) throw std::invalid_argument("bad theorem constants");
    if (m == 0) return 0.0;
    if (lip == 0) return n == 0 ? m * h : 0.0;
    // Sum the tail forwards; this avoids the cancellation in
    // exp(L h) - partial_sum once n is past the hump.
    double lh = lip * h;
    double term = std::exp(n * std::log(lh) - std::lgamma(n + 1.0));
    double sum = term;
    for (int k = n + 1; k < n + 500; ++k) {
        term *= lh / k;
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return (m / lip) * sum;
}

num::SampledFunction1D gronwall_envelope(double c, const num::SampledFunction1D& a) {
    if (c < 0) throw HypothesisError("comparison constant must be nonnegative");
    for (double v : a.values)
        if (v < 0) throw HypothesisError("rate function must be nonnegative");
    auto integral = num::cumulative_integral(a);
    std::vector<double> out(integral.values.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (c == 0.0) ? 0.0 : c * std::exp(integral.values[i]);
    return num::SampledFunction1D(a.x_start, a.x_end, std::move(out));
}

double residual(const Ivp& ivp, const num::SampledFunction1D& phi) {
    int n = phi.n_nodes();
    double h = phi.spacing();
    double worst = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        double slope = (phi.values[static_cast<std::size_t>(i + 1)] - phi.values[static_cast<std::size_t>(i - 1)]) / (2.0 * h);
        double fx = eval_f(ivp, phi.node(i), phi.values[static_cast<std::size_t>(i)]);
        worst = std::max(worst, std::abs(slope - fx));
    }
    return worst;
}

double uniqueness_gap(const PicardRun& first, const PicardRun& second) {
    return num::sup_difference(first.solution, second.solution);
}

}  // namespace fixpoint::picard
