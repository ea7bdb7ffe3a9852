#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fixpoint/errors.hpp"
#include "fixpoint/hartman.hpp"
#include "fixpoint/io.hpp"
#include "fixpoint/picard.hpp"

namespace {

namespace io = fixpoint::io;
namespace num = fixpoint::num;
namespace picard = fixpoint::picard;
namespace hartman = fixpoint::hartman;

/// Split on commas at parenthesis depth zero, so "pow(x, 2), y" gives two
/// fields. Surrounding whitespace is trimmed.
std::vector<std::string> split_fields(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    for (auto& p : parts) {
        auto b = p.find_first_not_of(" \t");
        auto e = p.find_last_not_of(" \t");
        p = (b == std::string::npos) ? std::string() : p.substr(b, e - b + 1);
    }
    return parts;
}

num::Vec parse_point(const std::string& s, int expected_dim) {
    auto parts = split_fields(s);
    if (static_cast<int>(parts.size()) != expected_dim)
        throw std::invalid_argument("expected " + std::to_string(expected_dim) +
                                    " comma-separated coordinates, got '" + s + "'");
    num::Vec p(expected_dim);
    for (int i = 0; i < expected_dim; ++i) {
        std::size_t used = 0;
        p[i] = std::stod(parts[static_cast<std::size_t>(i)], &used);
        if (used != parts[static_cast<std::size_t>(i)].size())
            throw std::invalid_argument("bad coordinate '" + parts[static_cast<std::size_t>(i)] + "'");
    }
    return p;
}

struct EmitChoice {
    bool csv = true;
    bool svg = false;
};

EmitChoice parse_emit(const std::string& emit) {
    if (emit == "csv") return {true, false};
    if (emit == "svg") return {false, true};
    if (emit == "both") return {true, true};
    throw std::invalid_argument("--emit must be csv, svg, or both");
}

std::string out_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

struct PicardArgs {
    std::string f;
    double x0 = 0.0, y0 = 0.0, a = 1.0, b = 1.0;
    double tol = 1e-8;
    int max_iter = 30;
    int nodes = 1025;
    int samples = 65;
    double cap = 1e6;
    bool backward = false;
    std::string layout = "wide";
    int terms = 20;
    std::string emit = "csv";
    std::string out = ".";
};

void add_rectangle_options(CLI::App* cmd, PicardArgs& args) {
    cmd->add_option("--f", args.f, "right-hand side f(x, y)")->required();
    cmd->add_option("--x0", args.x0, "initial x");
    cmd->add_option("--y0", args.y0, "initial y");
    cmd->add_option("--a", args.a, "rectangle half-width in x");
    cmd->add_option("--b", args.b, "rectangle half-width in y");
    cmd->add_option("--samples", args.samples, "rectangle samples per axis for the sup bounds");
    cmd->add_option("--lipschitz-cap", args.cap, "difference-quotient cap");
    cmd->add_option("--out", args.out, "output directory");
    cmd->add_option("--emit", args.emit, "csv, svg, or both");
}

int run_picard_solve(const PicardArgs& args) {
    auto ivp = picard::Ivp::make(args.f, args.x0, args.y0, args.a, args.b);
    picard::SolveOptions opts;
    opts.tol = args.tol;
    opts.max_iterations = args.max_iter;
    opts.n_nodes = args.nodes;
    opts.samples_per_axis = args.samples;
    opts.lipschitz_cap = args.cap;
    opts.backward = args.backward;
    auto run = picard::solve(ivp, opts);

    std::printf("M=%s L=%s h=%s\n", io::format_short(run.bound_m).c_str(),
                io::format_short(run.lipschitz).c_str(), io::format_short(run.interval).c_str());
    std::printf("%s n=%d h=%s residual=%s\n", run.converged ? "converged" : "not-converged",
                run.iterations, io::format_short(run.interval).c_str(),
                io::format_short(run.residual).c_str());

    auto emit = parse_emit(args.emit);
    if (emit.csv) {
        int n = run.solution.n_nodes();
        if (args.layout == "wide") {
            std::vector<std::string> header{"x"};
            for (std::size_t k = 0; k < run.iterates.size(); ++k)
                header.push_back("phi_" + std::to_string(k));
            std::vector<std::vector<double>> rows;
            for (int i = 0; i < n; ++i) {
                std::vector<double> row{run.solution.node(i)};
                for (const auto& it : run.iterates)
                    row.push_back(it.values[static_cast<std::size_t>(i)]);
                rows.push_back(std::move(row));
            }
            io::write_file_atomic(out_path(args.out, "picard_iterates.csv"),
                                  io::csv_table(header, rows));
        } else if (args.layout == "split") {
            for (std::size_t k = 0; k < run.iterates.size(); ++k) {
                std::vector<std::vector<double>> rows;
                for (int i = 0; i < n; ++i)
                    rows.push_back({run.iterates[k].node(i),
                                    run.iterates[k].values[static_cast<std::size_t>(i)]});
                io::write_file_atomic(out_path(args.out, "picard_iterate_" + std::to_string(k) + ".csv"),
                                      io::csv_table({"x", "phi"}, rows));
            }
        } else {
            throw std::invalid_argument("--iterates must be wide or split");
        }
        std::vector<std::vector<double>> gap_rows;
        for (std::size_t k = 0; k < run.gaps.size(); ++k) {
            int iterate = static_cast<int>(k) + 1;
            gap_rows.push_back({static_cast<double>(iterate), run.gaps[k], run.apriori[k],
                                picard::cauchy_tail_bound(run.bound_m, run.lipschitz,
                                                          run.interval, iterate)});
        }
        io::write_file_atomic(out_path(args.out, "picard_gaps.csv"),
                              io::csv_table({"iteration", "gap", "apriori_bound", "cauchy_tail"},
                                            gap_rows));
    }
    if (emit.svg) {
        io::ChartPanel panel;
        panel.title = "Picard iterates";
        panel.x_label = "x";
        panel.y_label = "y";
        panel.fixed_bounds = true;
        panel.x_min = ivp.x0 - 1.05 * ivp.a;
        panel.x_max = ivp.x0 + 1.05 * ivp.a;
        panel.y_min = ivp.y0 - 1.15 * ivp.b;
        panel.y_max = ivp.y0 + 1.15 * ivp.b;
        panel.clip = false;

        io::ChartSeries rect;
        rect.label = "rectangle";
        rect.color = 7;
        rect.dashed = true;
        rect.points = {{ivp.x0 - ivp.a, ivp.y0 - ivp.b},
                       {ivp.x0 + ivp.a, ivp.y0 - ivp.b},
                       {ivp.x0 + ivp.a, ivp.y0 + ivp.b},
                       {ivp.x0 - ivp.a, ivp.y0 + ivp.b},
                       {ivp.x0 - ivp.a, ivp.y0 - ivp.b}};
        panel.series.push_back(rect);

        for (std::size_t k = 0; k < run.iterates.size(); ++k) {
            io::ChartSeries s;
            bool last = (k + 1 == run.iterates.size());
            if (k < 3 || last)
                s.label = "phi_" + std::to_string(k) + (last ? " (final)" : "");
            s.color = static_cast<int>(k % 6);
            const auto& it = run.iterates[k];
            for (int i = 0; i < it.n_nodes(); ++i)
                s.points.push_back({it.node(i), it.values[static_cast<std::size_t>(i)]});
            panel.series.push_back(std::move(s));
        }
        io::write_file_atomic(out_path(args.out, "picard_iterates.svg"),
                              io::render_chart({panel}));
    }
    return run.converged ? 0 : 3;
}

int run_picard_bounds(const PicardArgs& args) {
    auto ivp = picard::Ivp::make(args.f, args.x0, args.y0, args.a, args.b);
    double m = picard::bound_M(ivp, args.samples);
    double lip = picard::estimate_L(ivp, args.samples, args.cap);
    double h = picard::existence_interval(ivp, m);
    std::printf("M=%s L=%s h=%s\n", io::format_short(m).c_str(), io::format_short(lip).c_str(),
                io::format_short(h).c_str());
    std::printf("%-5s %-14s %-14s\n", "n", "apriori", "cauchy_tail");
    std::vector<std::vector<double>> rows;
    for (int n = 1; n <= args.terms; ++n) {
        double ap = picard::apriori_gap_bound(m, lip, h, n);
        double tail = picard::cauchy_tail_bound(m, lip, h, n);
        std::printf("%-5d %-14s %-14s\n", n, io::format_short(ap).c_str(),
                    io::format_short(tail).c_str());
        rows.push_back({static_cast<double>(n), ap, tail});
    }
    if (parse_emit(args.emit).csv)
        io::write_file_atomic(out_path(args.out, "picard_bounds.csv"),
                              io::csv_table({"n", "apriori_bound", "cauchy_tail"}, rows));
    return 0;
}

struct HgArgs {
    std::string field;
    std::string guess;
    double newton_tol = 1e-12;
    double hyper_tol = 1e-9;
    int grid = 65;
    int max_iter = 200;
    double stop_tol = 1e-4;
    double flow_tol = 1e-10;
    std::optional<double> probe_t;
    std::string emit = "csv";
    std::string out = ".";
};

void print_matrix(const char* name, const num::DenseMatrix& m) {
    std::printf("%s:\n", name);
    for (int i = 0; i < m.rows(); ++i) {
        std::printf(" ");
        for (int j = 0; j < m.cols(); ++j) std::printf(" %s", io::format_short(m(i, j)).c_str());
        std::printf("\n");
    }
}

struct LinearizedField {
    hartman::VectorFieldND field;       // as parsed
    hartman::VectorFieldND recentred;   // fixed point moved to the origin
    num::Vec fixed_point;
    num::DenseMatrix jacobian;
};

LinearizedField linearize(const HgArgs& args) {
    auto field = hartman::VectorFieldND::parse(split_fields(args.field));
    num::Vec guess(field.dim());
    if (!args.guess.empty()) guess = parse_point(args.guess, field.dim());
    auto fp = hartman::find_fixed_point(field, guess, args.newton_tol);
    return {field, field.recentered(fp), fp, field.jacobian_at(fp)};
}

int run_hg_linearize(const HgArgs& args) {
    auto lin = linearize(args);
    std::printf("fixed point: (");
    for (int i = 0; i < lin.fixed_point.size(); ++i)
        std::printf("%s%s", i ? ", " : "", io::format_short(lin.fixed_point[i]).c_str());
    std::printf(")\n");
    print_matrix("jacobian", lin.jacobian);

    auto rep = hartman::check_hyperbolic(lin.jacobian, args.hyper_tol);
    std::printf("eigenvalues:");
    for (const auto& ev : rep.eigenvalues)
        std::printf(" %s%s%si", io::format_short(ev.real()).c_str(), ev.imag() < 0.0 ? "" : "+",
                    io::format_short(ev.imag()).c_str());
    std::printf("\n");
    if (!rep.hyperbolic) {
        std::printf("verdict: not hyperbolic (min |Re lambda| = %s)\n",
                    io::format_short(rep.min_abs_real).c_str());
        throw fixpoint::NonHyperbolicError(
            "an eigenvalue real part is within tolerance of zero (min |Re lambda| = " +
            io::format_short(rep.min_abs_real) + "); no stable/unstable splitting exists");
    }
    std::printf("verdict: hyperbolic (min |Re lambda| = %s)\n",
                io::format_short(rep.min_abs_real).c_str());

    auto split = hartman::spectral_split(lin.jacobian, args.hyper_tol);
    std::printf("stable dimension: %d, unstable dimension: %d\n", split.dim_stable(),
                split.dim_unstable());
    print_matrix("split basis (stable columns first)", split.schur.basis);
    std::printf("|B| = %s, |C^-1| = %s\n", io::format_short(split.b).c_str(),
                io::format_short(split.c).c_str());
    return 0;
}

void emit_conjugacy_svg(const HgArgs& args, const LinearizedField& lin,
                        const hartman::SpectralSplit& split, const hartman::ConjugacyRun& run) {
    const double s0 = run.constants.s0;
    if (lin.recentred.dim() != 2) {
        // Portraits are a planar rendering; other dimensions chart the
        // iteration gaps instead.
        io::ChartPanel panel;
        panel.title = "conjugacy iteration gaps";
        panel.x_label = "iteration";
        panel.y_label = "sup gap";
        io::ChartSeries sp{"psi gaps", {}, 0, false};
        for (std::size_t j = 0; j < run.psi_gaps.size(); ++j)
            sp.points.push_back({static_cast<double>(j + 1), run.psi_gaps[j]});
        io::ChartSeries sf{"phi gaps", {}, 1, false};
        for (std::size_t j = 0; j < run.phi_gaps.size(); ++j)
            sf.points.push_back({static_cast<double>(j + 1), run.phi_gaps[j]});
        if (!sp.points.empty()) panel.series.push_back(sp);
        if (!sf.points.empty()) panel.series.push_back(sf);
        io::write_file_atomic(out_path(args.out, "conjugacy_gaps.svg"),
                              io::render_chart({panel}));
        return;
    }

    io::ChartPanel nonlinear;
    nonlinear.title = "nonlinear flow (shifted to the fixed point)";
    nonlinear.x_label = "u1";
    nonlinear.y_label = "u2";
    nonlinear.fixed_bounds = true;
    nonlinear.x_min = nonlinear.y_min = -2.0 * s0;
    nonlinear.x_max = nonlinear.y_max = 2.0 * s0;

    io::ChartPanel linear = nonlinear;
    linear.title = "linear flow with H-mapped trajectories";
    linear.x_label = "y";
    linear.y_label = "z";

    std::vector<double> times;
    for (int i = -15; i <= 15; ++i) times.push_back(i / 10.0);

    auto rhs = lin.recentred.rhs();
    auto linmap = split.linear_map();
    const int seeds = 10;
    for (int sidx = 0; sidx < seeds; ++sidx) {
        double angle = 2.0 * 3.14159265358979312 * sidx / seeds;
        num::Vec p0{0.45 * s0 * std::cos(angle), 0.45 * s0 * std::sin(angle)};
        num::Vec x0 = split.from_split(p0);

        io::ChartSeries traj{sidx == 0 ? "flow" : "", {}, 0, false};
        io::ChartSeries mapped{sidx == 0 ? "H(flow)" : "", {}, 1, true};
        for (double t : times) {
            num::Vec x;
            try {
                x = num::integrate_flow(rhs, x0, t, args.flow_tol);
            } catch (const fixpoint::ConvergenceError&) {
                continue;
            }
            traj.points.push_back({x[0], x[1]});
            num::Vec hp = run.conjugacy.evaluate(split.to_split(x));
            mapped.points.push_back({hp[0], hp[1]});
        }
        nonlinear.series.push_back(traj);
        linear.series.push_back(mapped);

        io::ChartSeries straight{sidx == 0 ? "linear flow" : "", {}, 2, false};
        num::Vec w0 = run.conjugacy.evaluate(p0);
        for (double t : times) {
            num::DenseMatrix pt = num::matrix_exponential(split.schur.stable_block.scaled(t));
            num::DenseMatrix qt = num::matrix_exponential(split.schur.unstable_block.scaled(t));
            num::Vec w(2);
            int k = split.dim_stable();
            num::Vec wy = pt.apply(w0.slice(0, k));
            num::Vec wz = qt.apply(w0.slice(k, 2 - k));
            w = num::concat(wy, wz);
            straight.points.push_back({w[0], w[1]});
        }
        linear.series.push_back(straight);
    }
    io::write_file_atomic(out_path(args.out, "conjugacy_portraits.svg"),
                          io::render_chart({nonlinear, linear}));
}

int run_hg_conjugacy(const HgArgs& args) {
    auto lin = linearize(args);
    auto split = hartman::spectral_split(lin.jacobian, args.hyper_tol);

    hartman::ConjugacyOptions opts;
    opts.nodes_per_axis = args.grid;
    opts.max_iterations = args.max_iter;
    opts.stop_tol = args.stop_tol;
    opts.flow_tol = args.flow_tol;
    opts.calibration.flow_tol = args.flow_tol;
    auto run = hartman::build_conjugacy(lin.recentred, split, opts);

    const auto& cc = run.constants;
    std::printf("fixed point: (");
    for (int i = 0; i < lin.fixed_point.size(); ++i)
        std::printf("%s%s", i ? ", " : "", io::format_short(lin.fixed_point[i]).c_str());
    std::printf(")\n");
    std::printf("a=%s a_target=%s b=%s c=%s\n", io::format_short(cc.a).c_str(),
                io::format_short(cc.a_target).c_str(), io::format_short(cc.b).c_str(),
                io::format_short(cc.c).c_str());
    std::printf("s0=%s delta=%s r=%s M_H=%s\n", io::format_short(cc.s0).c_str(),
                io::format_short(cc.delta).c_str(), io::format_short(cc.r).c_str(),
                io::format_short(cc.holder_m).c_str());
    std::printf("%s n=%d residual=%s\n", run.converged ? "converged" : "not-converged",
                run.iterations, io::format_short(run.residual).c_str());

    if (args.probe_t) {
        // Diagnostic only: how well the time-t flow matches e^{tA} through H
        // for fractional t (the construction only enforces t = 1).
        double t = *args.probe_t;
        auto pt = num::matrix_exponential(split.schur.stable_block.scaled(t));
        auto qt = num::matrix_exponential(split.schur.unstable_block.scaled(t));
        int n = split.dim();
        int k = split.dim_stable();
        auto rhs = lin.recentred.rhs();
        auto sample = num::BoxGrid::symmetric(n, cc.s0 / 4.0, 9);
        double sup = 0.0;
        for (long flat = 0; flat < sample.total_nodes(); ++flat) {
            num::Vec p = sample.point(flat);
            if (p.norm2() > cc.s0 / 4.0 * (1.0 + 1e-12)) continue;
            num::Vec ft = split.to_split(
                num::integrate_flow(rhs, split.from_split(p), t, args.flow_tol));
            num::Vec lhs = run.conjugacy.evaluate(ft);
            num::Vec hp = run.conjugacy.evaluate(p);
            num::Vec rhs_v = num::concat(pt.apply(hp.slice(0, k)), qt.apply(hp.slice(k, n - k)));
            sup = std::max(sup, (lhs - rhs_v).norm2());
        }
        std::printf("probe t=%s sup|H(flow_t(p)) - e^(tA) H(p)|=%s\n", io::format_short(t).c_str(),
                    io::format_short(sup).c_str());
    }

    auto emit = parse_emit(args.emit);
    if (emit.csv) {
        int n = split.dim();
        std::vector<std::string> header;
        for (int i = 1; i <= n; ++i) header.push_back("p" + std::to_string(i));
        for (int i = 1; i <= n; ++i) header.push_back("h" + std::to_string(i));
        std::vector<std::vector<double>> rows;
        for (long flat = 0; flat < run.conjugacy.grid.total_nodes(); ++flat) {
            num::Vec p = run.conjugacy.grid.point(flat);
            num::Vec h = run.conjugacy.value_at(flat);
            std::vector<double> row;
            for (int i = 0; i < n; ++i) row.push_back(p[i]);
            for (int i = 0; i < n; ++i) row.push_back(h[i]);
            rows.push_back(std::move(row));
        }
        io::write_file_atomic(out_path(args.out, "conjugacy_h.csv"), io::csv_table(header, rows));

        std::vector<std::vector<double>> gap_rows;
        std::size_t longest = std::max(run.psi_gaps.size(), run.phi_gaps.size());
        for (std::size_t j = 0; j < longest; ++j)
            gap_rows.push_back({static_cast<double>(j + 1),
                                j < run.psi_gaps.size() ? run.psi_gaps[j] : 0.0,
                                j < run.phi_gaps.size() ? run.phi_gaps[j] : 0.0});
        io::write_file_atomic(out_path(args.out, "conjugacy_gaps.csv"),
                              io::csv_table({"iteration", "psi_gap", "phi_gap"}, gap_rows));
    }
    if (emit.svg) emit_conjugacy_svg(args, lin, split, run);
    return run.converged ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-point constructions: Picard iteration and discrete linearization"};
    app.set_config("--config", "", "flat key=value config file; flags override values from it");
    app.require_subcommand(1);

    PicardArgs pa;
    auto* picard_cmd = app.add_subcommand("picard", "scalar IVP y' = f(x, y) on a rectangle");
    picard_cmd->require_subcommand(1);
    auto* solve_cmd = picard_cmd->add_subcommand("solve", "run the iteration to convergence");
    add_rectangle_options(solve_cmd, pa);
    solve_cmd->add_option("--tol", pa.tol, "sup-gap stopping tolerance");
    solve_cmd->add_option("--max-iter", pa.max_iter, "iteration budget");
    solve_cmd->add_option("--nodes", pa.nodes, "grid nodes on [x0, x0+h] (odd)");
    solve_cmd->add_flag("--backward", pa.backward, "solve on [x0-h, x0] via the mirrored field");
    solve_cmd->add_option("--iterates", pa.layout, "csv layout: wide (one table) or split (file per iterate)");

    PicardArgs pb;
    auto* bounds_cmd = picard_cmd->add_subcommand("bounds", "print M, L, h and the bound tables");
    add_rectangle_options(bounds_cmd, pb);
    bounds_cmd->add_option("--terms", pb.terms, "how many bound rows to print");

    HgArgs hl;
    auto* hg_cmd = app.add_subcommand("hg", "hyperbolic fixed point analysis");
    hg_cmd->require_subcommand(1);
    auto* lin_cmd = hg_cmd->add_subcommand("linearize", "fixed point, spectrum, splitting");
    lin_cmd->add_option("--field", hl.field, "comma-separated components, variables x1..xn (aliases x, y, z)")->required();
    lin_cmd->add_option("--guess", hl.guess, "Newton starting point, comma-separated");
    lin_cmd->add_option("--tol", hl.newton_tol, "Newton tolerance on |f|");
    lin_cmd->add_option("--hyper-tol", hl.hyper_tol, "hyperbolicity margin on |Re lambda|");

    HgArgs hc;
    auto* conj_cmd = hg_cmd->add_subcommand("conjugacy", "build the discrete conjugacy H");
    conj_cmd->add_option("--field", hc.field, "comma-separated components, variables x1..xn (aliases x, y, z)")->required();
    conj_cmd->add_option("--guess", hc.guess, "Newton starting point, comma-separated");
    conj_cmd->add_option("--tol", hc.newton_tol, "Newton tolerance on |f|");
    conj_cmd->add_option("--hyper-tol", hc.hyper_tol, "hyperbolicity margin on |Re lambda|");
    conj_cmd->add_option("--grid", hc.grid, "nodes per axis of the conjugacy grid");
    conj_cmd->add_option("--max-iter", hc.max_iter, "iteration budget");
    conj_cmd->add_option("--stop-tol", hc.stop_tol, "sup-gap stopping tolerance");
    conj_cmd->add_option("--flow-tol", hc.flow_tol, "time-one flow integration tolerance");
    double probe_t_val = 0.0;
    auto* probe_opt = conj_cmd->add_option("--probe-t", probe_t_val,
                                           "also report the fractional-time diagnostic at this t");
    conj_cmd->add_option("--out", hc.out, "output directory");
    conj_cmd->add_option("--emit", hc.emit, "csv, svg, or both");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (*probe_opt) hc.probe_t = probe_t_val;

    try {
        if (solve_cmd->parsed()) return run_picard_solve(pa);
        if (bounds_cmd->parsed()) return run_picard_bounds(pb);
        if (lin_cmd->parsed()) return run_hg_linearize(hl);
        if (conj_cmd->parsed()) return run_hg_conjugacy(hc);
        std::cerr << "error: no subcommand selected\n";
        return 1;
    } catch (const fixpoint::HypothesisError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const fixpoint::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const fixpoint::expr::ParseError& e) {
        std::cerr << "error: expression parse failed at offset " << e.offset << ": " << e.what()
                  << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
