// End-to-end acceptance gate. Each numbered criterion prints exactly one
// PASS/FAIL line; the process exit code is the number of failures. All
// tolerances are pinned here on purpose: loosening them is a library
// regression, not a test problem.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fixpoint/errors.hpp"
#include "fixpoint/hartman.hpp"
#include "fixpoint/linalg.hpp"
#include "fixpoint/picard.hpp"
#include "fixpoint/sampled.hpp"

namespace fs = std::filesystem;
using namespace fixpoint;
using num::DenseMatrix;
using num::Vec;

namespace {

int g_failures = 0;

void report(int idx, bool ok, const std::string& label, const std::string& detail) {
    if (!ok) ++g_failures;
    std::printf("%s criterion-%d: %s%s%s%s\n", ok ? "PASS" : "FAIL", idx, label.c_str(),
                detail.empty() ? "" : " (", detail.c_str(), detail.empty() ? "" : ")");
    std::fflush(stdout);
}

void run_criterion(int idx, const std::string& label,
                   const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    report(idx, ok, label, detail);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const fs::path& dir) {
    fs::create_directories(dir);
    std::string cmd = std::string("\"") + FIXPOINT_CLI_PATH + "\" " + args + " >\"" +
                      (dir / "stdout.txt").string() + "\" 2>\"" + (dir / "stderr.txt").string() +
                      "\"";
    int status = std::system(cmd.c_str());
    return (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
}

double taylor_partial_sum(double x, int degree) {
    double sum = 1.0, term = 1.0;
    for (int j = 1; j <= degree; ++j) {
        term *= x / j;
        sum += term;
    }
    return sum;
}

picard::PicardRun exponential_run(std::optional<double> start = std::nullopt) {
    auto ivp = picard::Ivp::make("y", 0.0, 1.0, 1.0, 1.0);
    picard::SolveOptions opts;  // tol 1e-8, 30 iterations, 1025 nodes
    opts.start_value = start;
    return picard::solve(ivp, opts);
}

hartman::VectorFieldND curved_saddle() { return hartman::VectorFieldND::parse({"-x", "y + x^2"}); }

// ---- random expression corpus for the derivative cross-check ----

struct ExprFuzzer {
    std::mt19937 rng{20260815u};

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

    std::string leaf() {
        switch (pick(4)) {
            case 0: return "x";
            case 1: return "y";
            case 2: return "x";
            default: {
                char buf[32];
                std::snprintf(buf, sizeof buf, "(%.3f)", uniform(-2.0, 2.0));
                return buf;
            }
        }
    }

    std::string gen(int depth) {
        if (depth <= 0) return leaf();
        std::string a = gen(depth - 1);
        std::string b = gen(depth - 1);
        switch (pick(10)) {
            case 0: return "(" + a + " + " + b + ")";
            case 1: return "(" + a + " - " + b + ")";
            case 2: return "(" + a + " * " + b + ")";
            case 3: return "sin(" + a + ")";
            case 4: return "cos(" + a + ")";
            case 5: return "(" + a + ")^2";
            case 6: return "(" + a + ")^3";
            case 7: return "exp(" + a + ")";
            case 8: return "(" + a + ") / (3 + (" + b + ")^2)";
            default: return "log(4 + (" + a + ")^2)";
        }
    }
};

}  // namespace

int main() {
    // 1. Model problem y' = y, y(0) = 1 on the unit rectangle.
    picard::PicardRun expo;
    run_criterion(1, "exponential IVP: convergence, accuracy, runtime, Taylor iterates",
                  [&](std::string& detail) {
        auto t0 = std::chrono::steady_clock::now();
        expo = exponential_run();
        double elapsed = seconds_since(t0);
        if (!expo.converged || expo.iterations > 30) {
            detail = "did not converge within 30 iterations";
            return false;
        }
        double sup_err = 0.0;
        for (int i = 0; i < expo.solution.n_nodes(); ++i) {
            double x = expo.solution.node(i);
            sup_err = std::max(sup_err,
                               std::abs(expo.solution.values[static_cast<std::size_t>(i)] -
                                        std::exp(x)));
        }
        double taylor_err = 0.0;
        for (std::size_t k = 0; k < expo.iterates.size(); ++k) {
            const auto& it = expo.iterates[k];
            for (int i = 0; i < it.n_nodes(); ++i)
                taylor_err = std::max(taylor_err,
                                      std::abs(it.values[static_cast<std::size_t>(i)] -
                                               taylor_partial_sum(it.node(i),
                                                                  static_cast<int>(k))));
        }
        detail = "n=" + std::to_string(expo.iterations) + ", sup err " + fmt(sup_err) +
                 ", taylor dev " + fmt(taylor_err) + ", " + fmt(elapsed) + " s";
        return sup_err <= 1e-6 && taylor_err <= 1e-9 && elapsed < 1.0;
    });

    // 2. Observed gaps never beat the factorial a-priori bound.
    run_criterion(2, "iterate gaps dominated by the factorial bound", [&](std::string& detail) {
        if (expo.iterates.empty()) expo = exponential_run();
        double worst = -1e300;
        for (std::size_t k = 0; k < expo.gaps.size(); ++k) {
            double bound = picard::apriori_gap_bound(expo.bound_m, expo.lipschitz, expo.interval,
                                                     static_cast<int>(k) + 1);
            worst = std::max(worst, expo.gaps[k] - bound);
        }
        detail = "max gap excess " + fmt(worst);
        return worst <= 1e-9;
    });

    // 3. Every iterate pair obeys the tail bound for the earlier index.
    run_criterion(3, "iterate pairs dominated by the Cauchy tail bound", [&](std::string& detail) {
        double worst = -1e300;
        for (std::size_t n = 0; n < expo.iterates.size(); ++n)
            for (std::size_t m = n + 1; m < expo.iterates.size(); ++m) {
                double tail = picard::cauchy_tail_bound(expo.bound_m, expo.lipschitz,
                                                        expo.interval, static_cast<int>(n));
                worst = std::max(worst,
                                 num::sup_difference(expo.iterates[m], expo.iterates[n]) - tail);
            }
        detail = "max tail excess " + fmt(worst);
        return worst <= 1e-9;
    });

    // 4. Confinement across a smooth corpus: sup |phi_n - y0| <= M h <= b.
    run_criterion(4, "iterates stay inside the rectangle on a 20-problem corpus",
                  [&](std::string& detail) {
        const std::vector<std::string> corpus{
            "y",          "-y",          "x",           "x + y",        "x - y",
            "x*y",        "sin(x)",      "cos(y)",      "sin(x)*cos(y)", "y / (1 + x^2)",
            "exp(-y)",    "exp(y)",      "1 / (2 + y)", "x^2 - y",      "y^2",
            "cos(x*y)",   "sin(y) + x",  "y*cos(x)",    "2*x*y",        "sqrt(1 + y^2)"};
        int violations = 0;
        for (const auto& f : corpus) {
            auto ivp = picard::Ivp::make(f, 0.0, 1.0, 1.0, 1.0);
            picard::SolveOptions opts;
            opts.tol = 1e-6;
            auto run = picard::solve(ivp, opts);
            double cap = run.bound_m * run.interval;
            if (cap > ivp.b + 1e-12) ++violations;
            for (const auto& it : run.iterates) {
                double dev = 0.0;
                for (double v : it.values) dev = std::max(dev, std::abs(v - ivp.y0));
                if (dev > cap + 1e-9) ++violations;
            }
        }
        detail = std::to_string(violations) + " violations over " +
                 std::to_string(corpus.size()) + " problems";
        return violations == 0;
    });

    // 5. The limit does not depend on the seed iterate; the zero-constant
    //    comparison envelope is identically zero.
    run_criterion(5, "distinct starts agree; zero-constant envelope is zero",
                  [&](std::string& detail) {
        auto shifted = exponential_run(1.3);
        double gap = picard::uniqueness_gap(expo, shifted);
        num::SampledFunction1D rate(0.0, 1.0, std::vector<double>(65, 1.0));
        auto env = picard::gronwall_envelope(0.0, rate);
        bool all_zero = true;
        for (double v : env.values) all_zero = all_zero && v == 0.0;
        detail = "limit gap " + fmt(gap) + (all_zero ? ", envelope exactly zero"
                                                     : ", envelope has nonzero entries");
        return gap <= 2e-8 && all_zero;
    });

    // 6. A slope field with unbounded partial slope is rejected, fast.
    run_criterion(6, "cube-root slope field is rejected quickly", [&](std::string& detail) {
        fs::path dir = fs::path("acceptance_scratch") / "cuberoot";
        auto t0 = std::chrono::steady_clock::now();
        int code = run_cli("picard solve --f \"3*y^(2/3)\" --x0 0 --y0 0 --a 1 --b 1", dir);
        double elapsed = seconds_since(t0);
        detail = "exit " + std::to_string(code) + ", " + fmt(elapsed) + " s";
        return code == 2 && elapsed < 1.0;
    });

    // 7. Spectral gatekeeping: rotation rejected with its eigenvalues
    //    reported, saddle accepted with the right splitting.
    run_criterion(7, "rotation rejected with spectrum, saddle split correctly",
                  [&](std::string& detail) {
        auto rotation = hartman::VectorFieldND::parse({"y", "-x"});
        auto j = rotation.jacobian_at(Vec{0.0, 0.0});
        auto rep = hartman::check_hyperbolic(j);
        bool spectrum_ok = !rep.hyperbolic && rep.eigenvalues.size() == 2;
        for (const auto& ev : rep.eigenvalues)
            spectrum_ok = spectrum_ok && std::abs(ev.real()) <= 1e-9 &&
                          std::abs(std::abs(ev.imag()) - 1.0) <= 1e-9;
        bool rejected = false;
        try {
            hartman::spectral_split(j);
        } catch (const NonHyperbolicError&) {
            rejected = true;
        }

        auto saddle = hartman::VectorFieldND::parse({"-x", "2*y"});
        auto split = hartman::spectral_split(saddle.jacobian_at(Vec{0.0, 0.0}));
        bool split_ok = split.dim_stable() == 1 && split.dim_unstable() == 1 &&
                        std::abs(split.schur.stable_block(0, 0) + 1.0) <= 1e-9 &&
                        std::abs(split.schur.unstable_block(0, 0) - 2.0) <= 1e-9 &&
                        std::abs(split.b - std::exp(-1.0)) <= 1e-9 &&
                        std::abs(split.c - std::exp(-2.0)) <= 1e-9;
        detail = std::string("rotation ") + (rejected ? "rejected" : "accepted") +
                 ", saddle dims " + std::to_string(split.dim_stable()) + "/" +
                 std::to_string(split.dim_unstable());
        return spectrum_ok && rejected && split_ok;
    });

    // 8. A linear saddle conjugates to itself: H is the identity grid.
    run_criterion(8, "linear saddle conjugacy is the identity grid", [&](std::string& detail) {
        auto field = hartman::VectorFieldND::parse({"-x", "y"});
        auto split = hartman::spectral_split(field.jacobian_at(Vec{0.0, 0.0}));
        auto t0 = std::chrono::steady_clock::now();
        auto run = hartman::build_conjugacy(field, split);  // 65 x 65 nodes
        double elapsed = seconds_since(t0);
        double dev = 0.0;
        for (long flat = 0; flat < run.conjugacy.grid.total_nodes(); ++flat)
            dev = std::max(dev,
                           (run.conjugacy.value_at(flat) - run.conjugacy.grid.point(flat)).norm2());
        double gap_max = 0.0;
        for (double g : run.psi_gaps) gap_max = std::max(gap_max, g);
        for (double g : run.phi_gaps) gap_max = std::max(gap_max, g);
        detail = "sup |H - id| " + fmt(dev) + ", max gap " + fmt(gap_max) + ", residual " +
                 fmt(run.residual) + ", " + fmt(elapsed) + " s";
        return run.converged && dev <= 1e-9 && gap_max <= 1e-9 && run.residual <= 1e-8 &&
               elapsed < 10.0;
    });

    // 9. The curved saddle: residual checker agrees with the analytic
    //    conjugacy, the constructed grid map has a small residual near the
    //    origin, and the fixed point maps to zero exactly.
    hartman::ConjugacyRun curved_run;
    bool curved_ready = false;
    run_criterion(9, "curved saddle conjugacy: analytic check, residual, origin",
                  [&](std::string& detail) {
        auto field = curved_saddle();
        auto split = hartman::spectral_split(field.jacobian_at(Vec{0.0, 0.0}));
        auto t0 = std::chrono::steady_clock::now();
        curved_run = hartman::build_conjugacy(field, split);  // 65 x 65 nodes
        double elapsed = seconds_since(t0);
        curved_ready = true;
        double s0 = curved_run.constants.s0;

        auto exact = [&split](const Vec& p) {
            auto w = split.from_split(p);
            return split.to_split(Vec{w[0], w[1] + w[0] * w[0] / 3.0});
        };
        double exact_res = hartman::conjugacy_residual(exact, field, split, s0 / 4.0);

        std::array<int, 3> center{};
        const auto& grid = curved_run.conjugacy.grid;
        for (int ax = 0; ax < grid.dim; ++ax)
            center[static_cast<std::size_t>(ax)] = (grid.nodes[static_cast<std::size_t>(ax)] - 1) / 2;
        auto h0 = curved_run.conjugacy.value_at(grid.flatten(center));
        bool origin_fixed = h0[0] == 0.0 && h0[1] == 0.0;

        detail = "analytic residual " + fmt(exact_res) + ", grid residual " +
                 fmt(curved_run.residual) + ", H(0) " + (origin_fixed ? "exact" : "nonzero") +
                 ", " + fmt(elapsed) + " s";
        return curved_run.converged && exact_res <= 1e-9 && curved_run.residual <= 1e-3 &&
               origin_fixed && elapsed < 60.0;
    });

    // 10. The contraction certificate holds on the recorded iterates.
    run_criterion(10, "contraction certificate: Holder bound and gap ratios",
                  [&](std::string& detail) {
        if (!curved_ready) {
            auto field = curved_saddle();
            auto split = hartman::spectral_split(field.jacobian_at(Vec{0.0, 0.0}));
            curved_run = hartman::build_conjugacy(field, split);
            curved_ready = true;
        }
        double r = curved_run.constants.r;
        auto holder = hartman::verify_holder_bound(curved_run, 1e-9);
        double worst_ratio = 0.0;
        auto scan_ratios = [&](const std::vector<double>& gaps) {
            for (std::size_t j = 1; j < gaps.size(); ++j)
                if (gaps[j - 1] > 1e-12)
                    worst_ratio = std::max(worst_ratio, gaps[j] / gaps[j - 1]);
        };
        scan_ratios(curved_run.psi_gaps);
        scan_ratios(curved_run.phi_gaps);
        detail = "r " + fmt(r) + ", holder " + (holder.all_ok ? "ok" : "violated") +
                 ", worst gap ratio " + fmt(worst_ratio);
        return r < 1.0 && holder.all_ok && worst_ratio <= r + 0.05;
    });

    // 11. Kernel spot checks: quadrature exactness, exponential inverses,
    //     symbolic vs numeric derivatives, flow group property.
    run_criterion(11, "kernel spot checks: quadrature, expm, derivatives, flow",
                  [&](std::string& detail) {
        // Composite quadrature integrates cubics exactly at even nodes.
        double quad_err = 0.0;
        {
            int n = 65;
            std::vector<double> vals(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                double x = static_cast<double>(i) / (n - 1);
                vals[static_cast<std::size_t>(i)] = x * x * x - 2.0 * x * x + x - 1.0;
            }
            num::SampledFunction1D f(0.0, 1.0, vals);
            auto cum = num::cumulative_integral(f);
            for (int i = 0; i < n; i += 2) {
                double x = cum.node(i);
                double exact = x * x * x * x / 4.0 - 2.0 * x * x * x / 3.0 + x * x / 2.0 - x;
                quad_err = std::max(quad_err,
                                    std::abs(cum.values[static_cast<std::size_t>(i)] - exact));
            }
        }

        // e^A e^{-A} = I.
        double expm_err = 0.0;
        {
            std::vector<DenseMatrix> mats;
            DenseMatrix a1(2, 2);
            a1(0, 0) = 0.3;  a1(0, 1) = -1.2;
            a1(1, 0) = 0.7;  a1(1, 1) = 0.1;
            DenseMatrix a2(2, 2);
            a2(0, 0) = 0.0;  a2(0, 1) = 1.3;
            a2(1, 0) = -1.3; a2(1, 1) = 0.0;
            DenseMatrix a3(3, 3);
            a3(0, 0) = -0.5; a3(0, 1) = 0.2;  a3(0, 2) = 0.0;
            a3(1, 0) = 0.1;  a3(1, 1) = 0.4;  a3(1, 2) = -0.3;
            a3(2, 0) = 0.0;  a3(2, 1) = 0.25; a3(2, 2) = -0.1;
            mats.push_back(a1);
            mats.push_back(a2);
            mats.push_back(a3);
            for (const auto& m : mats) {
                auto prod = num::matrix_exponential(m) * num::matrix_exponential(m.scaled(-1.0));
                auto diff = prod - DenseMatrix::identity(m.rows());
                expm_err = std::max(expm_err, diff.max_abs());
            }
        }

        // Symbolic derivatives agree with Richardson difference quotients on
        // a corpus of randomly generated expressions.
        int accepted_exprs = 0;
        double deriv_err = 0.0;
        {
            ExprFuzzer fuzz;
            const std::vector<std::string> vars{"x", "y"};
            int guard = 0;
            while (accepted_exprs < 100 && guard++ < 5000) {
                std::string src = fuzz.gen(3);
                expr::ExprAst ast = expr::ExprAst::parse(src, vars);
                expr::ExprAst der = ast.differentiate("x");
                bool used = false;
                for (int attempt = 0; attempt < 20 && !used; ++attempt) {
                    double x = fuzz.uniform(-1.0, 1.0);
                    double y = fuzz.uniform(-1.0, 1.0);
                    const double h = 1e-4;
                    try {
                        double args[2] = {x, y};
                        auto at = [&](double xv) {
                            double a[2] = {xv, y};
                            return ast.eval(std::span<const double>(a, 2));
                        };
                        double f0 = at(x), fp = at(x + h), fm = at(x - h);
                        double fp2 = at(x + h / 2), fm2 = at(x - h / 2);
                        double sym = der.eval(std::span<const double>(args, 2));
                        double cap = 1e3;
                        if (!std::isfinite(sym) || std::abs(sym) > cap) continue;
                        for (double v : {f0, fp, fm, fp2, fm2})
                            if (!std::isfinite(v) || std::abs(v) > cap)
                                throw expr::EvalDomainError("sample out of range");
                        double d1 = (fp - fm) / (2 * h);
                        double d2 = (fp2 - fm2) / h;
                        double fd = (4 * d2 - d1) / 3;
                        double rel = std::abs(fd - sym) / std::max(1.0, std::abs(sym));
                        deriv_err = std::max(deriv_err, rel);
                        if (rel > 1e-6) {
                            detail = "derivative mismatch on " + src;
                            return false;
                        }
                        used = true;
                    } catch (const expr::EvalDomainError&) {
                        continue;
                    }
                }
                if (used) ++accepted_exprs;
            }
        }

        // Time additivity of the flow integrator.
        double flow_err = 0.0;
        {
            auto rhs = curved_saddle().rhs();
            Vec p{0.04, 0.02};
            auto two_step = num::integrate_flow(rhs, num::integrate_flow(rhs, p, 0.7, 1e-10), 0.3,
                                                1e-10);
            auto one_step = num::integrate_flow(rhs, p, 1.0, 1e-10);
            flow_err = (two_step - one_step).norm2();
        }

        detail = "quad " + fmt(quad_err) + ", expm " + fmt(expm_err) + ", deriv " +
                 fmt(deriv_err) + " over " + std::to_string(accepted_exprs) +
                 " exprs, flow " + fmt(flow_err);
        return quad_err <= 1e-14 && expm_err <= 1e-10 && accepted_exprs == 100 &&
               deriv_err <= 1e-6 && flow_err <= 1e-9;
    });

    // 12. Determinism: repeated identical CLI invocations emit identical bytes.
    run_criterion(12, "identical CLI invocations produce identical bytes",
                  [&](std::string& detail) {
        fs::path root = fs::path("acceptance_scratch") / "determinism";
        fs::remove_all(root);
        std::string solve = "picard solve --f \"sin(x)*y + x\" --x0 0 --y0 1 --a 1 --b 1 --out ";
        int c1 = run_cli(solve + "\"" + (root / "p1").string() + "\"", root);
        int c2 = run_cli(solve + "\"" + (root / "p2").string() + "\"", root);
        std::string conj = "hg conjugacy --field \"-x, y\" --grid 17 --out ";
        int c3 = run_cli(conj + "\"" + (root / "h1").string() + "\"", root);
        int c4 = run_cli(conj + "\"" + (root / "h2").string() + "\"", root);
        bool ran = c1 == 0 && c2 == 0 && c3 == 0 && c4 == 0;
        std::string a = slurp(root / "p1" / "picard_iterates.csv");
        bool same = ran && !a.empty() &&
                    a == slurp(root / "p2" / "picard_iterates.csv") &&
                    slurp(root / "p1" / "picard_gaps.csv") ==
                        slurp(root / "p2" / "picard_gaps.csv") &&
                    slurp(root / "h1" / "conjugacy_h.csv") ==
                        slurp(root / "h2" / "conjugacy_h.csv") &&
                    !slurp(root / "h1" / "conjugacy_h.csv").empty();
        detail = ran ? (same ? "all byte-identical" : "byte difference found")
                     : "a run failed (exit codes " + std::to_string(c1) + std::to_string(c2) +
                           std::to_string(c3) + std::to_string(c4) + ")";
        return same;
    });

    std::printf("%d of 12 criteria failed\n", g_failures);
    return g_failures;
}
