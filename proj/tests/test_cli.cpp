#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    fs::path dir = fs::path("cli_scratch") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

/// Run the binary under test with sh, capturing exit code and both streams.
CliResult run_cli(const std::string& args, const fs::path& dir) {
    fs::path out_file = dir / "stdout.txt";
    fs::path err_file = dir / "stderr.txt";
    std::string cmd = std::string("\"") + FIXPOINT_CLI_PATH + "\" " + args + " >\"" +
                      out_file.string() + "\" 2>\"" + err_file.string() + "\"";
    int status = std::system(cmd.c_str());
    int code = -1;
    if (status != -1 && WIFEXITED(status)) code = WEXITSTATUS(status);
    return {code, slurp(out_file), slurp(err_file)};
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("picard solve: converges, reports bounds, writes csv") {
    auto dir = scratch_dir("solve_basic");
    auto r = run_cli("picard solve --f y --x0 0 --y0 1 --a 1 --b 1 --out \"" +
                         (dir / "run").string() + "\"",
                     dir);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "M=2.1 L=1.05 h=0.47619"));
    CHECK(contains(r.out, "converged n="));
    CHECK(contains(r.out, "residual="));
    CHECK(fs::exists(dir / "run" / "picard_iterates.csv"));
    CHECK(fs::exists(dir / "run" / "picard_gaps.csv"));
    auto csv = slurp(dir / "run" / "picard_iterates.csv");
    CHECK(contains(csv, "x,phi_0"));
}

TEST_CASE("picard solve: identical invocations give byte-identical csv") {
    auto dir = scratch_dir("solve_determinism");
    std::string base = "picard solve --f \"sin(x)*y\" --x0 0 --y0 1 --a 1 --b 1 --out ";
    auto r1 = run_cli(base + "\"" + (dir / "one").string() + "\"", dir);
    auto r2 = run_cli(base + "\"" + (dir / "two").string() + "\"", dir);
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    CHECK(slurp(dir / "one" / "picard_iterates.csv") == slurp(dir / "two" / "picard_iterates.csv"));
    CHECK(slurp(dir / "one" / "picard_gaps.csv") == slurp(dir / "two" / "picard_gaps.csv"));
    CHECK(!slurp(dir / "one" / "picard_iterates.csv").empty());
}

TEST_CASE("picard solve: split iterate layout and svg emission") {
    auto dir = scratch_dir("solve_layout");
    // Coarse grid: the difference-quotient residual floor is ~4e-6 here, so
    // the tolerance must sit above it.
    auto r = run_cli("picard solve --f y --y0 1 --iterates split --emit both --nodes 129 "
                     "--tol 1e-5 --out \"" +
                         (dir / "run").string() + "\"",
                     dir);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "run" / "picard_iterate_0.csv"));
    CHECK(fs::exists(dir / "run" / "picard_iterate_1.csv"));
    CHECK(fs::exists(dir / "run" / "picard_iterates.svg"));
    auto svg = slurp(dir / "run" / "picard_iterates.svg");
    CHECK(contains(svg, "<svg"));
    CHECK(contains(svg, "width=\"800\" height=\"600\""));
}

TEST_CASE("picard solve: usage errors exit 1") {
    auto dir = scratch_dir("solve_usage");
    auto missing = run_cli("picard solve --y0 1", dir);
    CHECK(missing.exit_code == 1);
    auto bad_expr = run_cli("picard solve --f \"2x\"", dir);
    CHECK(bad_expr.exit_code == 1);
    CHECK(contains(bad_expr.err, "offset"));
    auto bad_emit = run_cli("picard solve --f y --emit png", dir);
    CHECK(bad_emit.exit_code == 1);
}

TEST_CASE("picard solve: unbounded slope exits 2") {
    auto dir = scratch_dir("solve_hypothesis");
    auto r = run_cli("picard solve --f \"3*y^(2/3)\" --x0 0 --y0 0 --a 1 --b 1", dir);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "error:"));
}

TEST_CASE("picard solve: --backward runs to the left of x0") {
    auto dir = scratch_dir("solve_backward");
    auto r = run_cli("picard solve --f y --y0 1 --backward --nodes 257 --tol 1e-6 --out \"" +
                         (dir / "run").string() + "\"",
                     dir);
    CHECK(r.exit_code == 0);
    auto csv = slurp(dir / "run" / "picard_iterates.csv");
    // First data row starts at the left endpoint x0 - h < 0.
    auto line_start = csv.find('\n') + 1;
    CHECK(csv[line_start] == '-');
}

TEST_CASE("picard bounds: prints the bound table") {
    auto dir = scratch_dir("bounds");
    auto r = run_cli("picard bounds --f y --y0 1 --terms 5 --out \"" + (dir / "run").string() +
                         "\"",
                     dir);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "M=2.1 L=1.05 h=0.47619"));
    CHECK(contains(r.out, "apriori"));
    CHECK(contains(r.out, "cauchy_tail"));
    CHECK(fs::exists(dir / "run" / "picard_bounds.csv"));
}

TEST_CASE("config file supplies defaults, flags override") {
    auto dir = scratch_dir("config");
    {
        std::ofstream cfg(dir / "run.ini");
        cfg << "[picard.solve]\n"
            << "f=\"y\"\n"
            << "x0=0\n"
            << "y0=1\n"
            << "a=1\n"
            << "b=0.5\n";
    }
    auto from_config = run_cli("--config \"" + (dir / "run.ini").string() +
                                   "\" picard solve --out \"" + (dir / "one").string() + "\"",
                               dir);
    CHECK(from_config.exit_code == 0);
    CHECK(contains(from_config.out, "M=1.575"));
    auto overridden = run_cli("--config \"" + (dir / "run.ini").string() +
                                  "\" picard solve --b 1 --out \"" + (dir / "two").string() + "\"",
                              dir);
    CHECK(overridden.exit_code == 0);
    CHECK(contains(overridden.out, "M=2.1"));
}

TEST_CASE("hg linearize: rotation is rejected with its spectrum reported") {
    auto dir = scratch_dir("linearize_rotation");
    auto r = run_cli("hg linearize --field \"y, -x\"", dir);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.out, "eigenvalues:"));
    CHECK(contains(r.out, "not hyperbolic"));
}

TEST_CASE("hg linearize: saddle is accepted and split") {
    auto dir = scratch_dir("linearize_saddle");
    auto r = run_cli("hg linearize --field \"-x, 2*y\"", dir);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "verdict: hyperbolic"));
    CHECK(contains(r.out, "stable dimension: 1, unstable dimension: 1"));
    CHECK(contains(r.out, "|B| ="));
}

TEST_CASE("hg conjugacy: linear saddle on a coarse grid") {
    auto dir = scratch_dir("conjugacy_linear");
    std::string base = "hg conjugacy --field \"-x, y\" --grid 9 --emit both --probe-t 0.5 --out ";
    auto r1 = run_cli(base + "\"" + (dir / "one").string() + "\"", dir);
    CHECK(r1.exit_code == 0);
    CHECK(contains(r1.out, "a="));
    CHECK(contains(r1.out, "s0="));
    CHECK(contains(r1.out, "converged n="));
    CHECK(contains(r1.out, "probe t=0.5"));
    CHECK(fs::exists(dir / "one" / "conjugacy_h.csv"));
    CHECK(fs::exists(dir / "one" / "conjugacy_gaps.csv"));
    CHECK(fs::exists(dir / "one" / "conjugacy_portraits.svg"));

    auto r2 = run_cli(base + "\"" + (dir / "two").string() + "\"", dir);
    CHECK(r2.exit_code == 0);
    CHECK(slurp(dir / "one" / "conjugacy_h.csv") == slurp(dir / "two" / "conjugacy_h.csv"));
}

TEST_CASE("hg conjugacy: non-hyperbolic field exits 2") {
    auto dir = scratch_dir("conjugacy_rejected");
    auto r = run_cli("hg conjugacy --field \"y, -x\" --grid 9", dir);
    CHECK(r.exit_code == 2);
}
