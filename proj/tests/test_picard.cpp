#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>
#include <vector>

#include "fixpoint/errors.hpp"
#include "fixpoint/picard.hpp"

using namespace fixpoint;
using picard::Ivp;
using picard::PicardRun;
using picard::SolveOptions;

namespace {

PicardRun reference_run() {
    auto ivp = Ivp::make("y", 0.0, 1.0, 1.0, 1.0);
    SolveOptions opts;
    opts.tol = 1e-8;
    return picard::solve(ivp, opts);
}

}  // namespace

TEST_CASE("exponential reference problem") {
    auto run = reference_run();
    CHECK(run.converged);
    CHECK(run.iterations <= 30);
    // sup |f| over the rectangle is 2, padded by 5%.
    CHECK(run.bound_m == doctest::Approx(2.1).epsilon(1e-12));
    CHECK(run.lipschitz == doctest::Approx(1.05).epsilon(1e-12));
    CHECK(run.interval == doctest::Approx(1.0 / 2.1).epsilon(1e-12));

    const auto& sol = run.solution;
    double worst = 0.0;
    for (int i = 0; i < sol.n_nodes(); ++i)
        worst = std::max(worst, std::abs(sol.values[static_cast<std::size_t>(i)] - std::exp(sol.node(i))));
    CHECK(worst <= 1e-7);
    CHECK(run.residual <= 1e-7);
}

TEST_CASE("iterates are the Taylor partial sums for y' = y") {
    auto run = reference_run();
    for (std::size_t k = 0; k < run.iterates.size(); ++k) {
        const auto& it = run.iterates[k];
        double worst = 0.0;
        for (int i = 0; i < it.n_nodes(); ++i) {
            double x = it.node(i);
            double taylor = 0.0, term = 1.0;
            for (std::size_t j = 0; j <= k; ++j) {
                taylor += term;
                term *= x / static_cast<double>(j + 1);
            }
            worst = std::max(worst, std::abs(it.values[static_cast<std::size_t>(i)] - taylor));
        }
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("gap sequence dominated by the a priori bound") {
    auto run = reference_run();
    REQUIRE(run.gaps.size() == run.apriori.size());
    for (std::size_t k = 0; k < run.gaps.size(); ++k)
        CHECK(run.gaps[k] <= run.apriori[k] + 1e-9);
}

TEST_CASE("cauchy tail dominates every recorded pair") {
    auto run = reference_run();
    int count = static_cast<int>(run.iterates.size());
    for (int n = 0; n < count; ++n) {
        double tail = picard::cauchy_tail_bound(run.bound_m, run.lipschitz, run.interval, n);
        for (int m = n + 1; m < count; ++m) {
            double sup = num::sup_difference(run.iterates[static_cast<std::size_t>(m)],
                                             run.iterates[static_cast<std::size_t>(n)]);
            CHECK(sup <= tail + 1e-9);
        }
    }
}

TEST_CASE("bound formulas: closed-form spot checks") {
    // M/L (Lh)^n / n! at M = L = h = 1, n = 3  ->  1/6.
    CHECK(picard::apriori_gap_bound(1, 1, 1, 3) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    // Tail at n = 1, M = L = h = 1: e - 1.
    CHECK(picard::cauchy_tail_bound(1, 1, 1, 1) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
    // Tail at n = 0 is the full series (M/L) e^{Lh}.
    CHECK(picard::cauchy_tail_bound(2.1, 1.05, 1.0 / 2.1, 0) ==
          doctest::Approx(2.0 * std::exp(0.5)).epsilon(1e-13));
    // Monotone decreasing in n, limit 0.
    double prev = picard::cauchy_tail_bound(1, 1, 1, 0);
    for (int n = 1; n < 30; ++n) {
        double cur = picard::cauchy_tail_bound(1, 1, 1, n);
        CHECK(cur <= prev);
        prev = cur;
    }
    CHECK(prev <= 1e-25);
    // Degenerate L = 0 (f independent of y): only the first gap is nonzero.
    CHECK(picard::apriori_gap_bound(2, 0, 0.5, 1) == doctest::Approx(1.0));
    CHECK(picard::apriori_gap_bound(2, 0, 0.5, 2) == 0.0);
    CHECK(picard::cauchy_tail_bound(2, 0, 0.5, 0) == doctest::Approx(1.0));
    CHECK(picard::cauchy_tail_bound(2, 0, 0.5, 1) == 0.0);
    CHECK_THROWS_AS(picard::apriori_gap_bound(1, 1, 1, 0), std::invalid_argument);
}

TEST_CASE("uniqueness: second starting function lands on the same fixed point") {
    auto ivp = Ivp::make("y", 0.0, 1.0, 1.0, 1.0);
    SolveOptions opts;
    opts.tol = 1e-8;
    auto first = picard::solve(ivp, opts);
    opts.start_value = 1.3;
    auto second = picard::solve(ivp, opts);
    CHECK(first.converged);
    CHECK(second.converged);
    CHECK(picard::uniqueness_gap(first, second) <= 2e-8);
}

TEST_CASE("gronwall envelope") {
    std::vector<double> rate(9, 2.0);
    num::SampledFunction1D a(0, 1, rate);
    SUBCASE("zero constant gives the zero function exactly") {
        auto env = picard::gronwall_envelope(0.0, a);
        for (double v : env.values) CHECK(v == 0.0);
    }
    SUBCASE("constant rate gives C e^{2x}") {
        auto env = picard::gronwall_envelope(1.5, a);
        for (int i = 0; i < env.n_nodes(); ++i)
            CHECK(env.values[static_cast<std::size_t>(i)] ==
                  doctest::Approx(1.5 * std::exp(2.0 * env.node(i))).epsilon(1e-10));
    }
    SUBCASE("hypothesis violations") {
        CHECK_THROWS_AS(picard::gronwall_envelope(-1.0, a), HypothesisError);
        std::vector<double> bad(9, 1.0);
        bad[4] = -0.5;
        CHECK_THROWS_AS(picard::gronwall_envelope(1.0, num::SampledFunction1D(0, 1, bad)),
                        HypothesisError);
    }
}

TEST_CASE("lipschitz failure is detected, quickly") {
    auto ivp = Ivp::make("3*y^(2/3)", 0.0, 0.0, 1.0, 1.0);
    auto start = std::chrono::steady_clock::now();
    CHECK_THROWS_AS(picard::estimate_L(ivp), LipschitzUnboundedError);
    CHECK_THROWS_AS(picard::solve(ivp), LipschitzUnboundedError);
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(elapsed < 1.0);
}

TEST_CASE("lipschitz estimation") {
    SUBCASE("symbolic path") {
        auto ivp = Ivp::make("x + y^2", 0.0, 0.0, 1.0, 2.0);
        // sup |2y| over |y| <= 2 is 4, padded.
        CHECK(picard::estimate_L(ivp) == doctest::Approx(4.2).epsilon(1e-12));
    }
    SUBCASE("difference quotients handle abs") {
        auto ivp = Ivp::make("abs(y)", 0.0, 0.0, 1.0, 1.0);
        double lip = picard::estimate_L(ivp);
        CHECK(lip == doctest::Approx(1.05).epsilon(1e-9));
    }
    SUBCASE("cap") {
        auto ivp = Ivp::make("1e5*y", 0.0, 0.0, 1.0, 1.0);
        CHECK_THROWS_AS(picard::estimate_L(ivp, 65, 1e4), LipschitzUnboundedError);
    }
    SUBCASE("nonfinite samples") {
        auto ivp = Ivp::make("1/x", 0.0, 0.0, 1.0, 1.0);
        CHECK_THROWS_AS(picard::bound_M(ivp), NonfiniteSampleError);
    }
    SUBCASE("minimum sampling enforced") {
        auto ivp = Ivp::make("y", 0.0, 0.0, 1.0, 1.0);
        CHECK_THROWS_AS(picard::bound_M(ivp, 16), std::invalid_argument);
    }
}

TEST_CASE("rectangle escape raises on a bad starting function") {
    auto ivp = Ivp::make("y", 0.0, 1.0, 1.0, 1.0);
    SolveOptions opts;
    opts.start_value = 3.5;  // outside |y - 1| <= 1
    CHECK_THROWS_AS(picard::solve(ivp, opts), IterateEscapedRectangleError);
}

TEST_CASE("iterates stay inside the rectangle") {
    for (const char* f : {"y", "-y", "x*y", "sin(x)+y", "cos(x*y)"}) {
        auto run = picard::solve(Ivp::make(f, 0.0, 0.5, 1.0, 1.0));
        double cap = run.bound_m * run.interval;
        CHECK(cap <= 1.0 + 1e-12);
        for (const auto& it : run.iterates) {
            double worst = 0.0;
            for (double v : it.values) worst = std::max(worst, std::abs(v - 0.5));
            CHECK(worst <= cap + 1e-9);
        }
    }
}

TEST_CASE("field with no y dependence converges in one application") {
    SolveOptions opts;
    opts.tol = 1e-7;  // the residual check is FD-limited on this wide interval
    auto run = picard::solve(Ivp::make("cos(x)", 0.0, 0.0, 1.0, 1.0), opts);
    CHECK(run.converged);
    CHECK(run.iterations <= 2);
    CHECK(run.interval == doctest::Approx(1.0 / 1.05).epsilon(1e-12));
    const auto& sol = run.solution;
    for (int i = 0; i < sol.n_nodes(); ++i)
        CHECK(std::abs(sol.values[static_cast<std::size_t>(i)] - std::sin(sol.node(i))) <= 1e-10);
}

TEST_CASE("backward solve mirrors the field") {
    SolveOptions opts;
    opts.backward = true;
    auto run = picard::solve(Ivp::make("y", 0.0, 1.0, 1.0, 1.0), opts);
    CHECK(run.converged);
    const auto& sol = run.solution;
    CHECK(sol.x_end == doctest::Approx(0.0));
    CHECK(sol.x_start == doctest::Approx(-1.0 / 2.1).epsilon(1e-12));
    double worst = 0.0;
    for (int i = 0; i < sol.n_nodes(); ++i)
        worst = std::max(worst, std::abs(sol.values[static_cast<std::size_t>(i)] - std::exp(sol.node(i))));
    CHECK(worst <= 1e-7);
    CHECK(run.residual <= 1e-6);
}

TEST_CASE("picard_step validates its grid") {
    auto ivp = Ivp::make("y", 0.0, 1.0, 1.0, 1.0);
    num::SampledFunction1D wrong(0.5, 1.0, {1.0, 1.0, 1.0});
    CHECK_THROWS_AS(picard::picard_step(ivp, wrong), std::invalid_argument);
}
