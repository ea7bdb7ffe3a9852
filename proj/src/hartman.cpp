#include "fixpoint/hartman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fixpoint/errors.hpp"

namespace fixpoint::hartman {

namespace {

std::vector<std::string> base_vars(int n) {
    std::vector<std::string> vars;
    for (int i = 1; i <= n; ++i) vars.push_back("x" + std::to_string(i));
    return vars;
}

std::vector<std::string> alias_vars(int n) {
    static const char* names[3] = {"x", "y", "z"};
    std::vector<std::string> vars;
    for (int i = 0; i < n; ++i) vars.emplace_back(names[i]);
    return vars;
}

std::vector<double> to_std(const num::Vec& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

VectorFieldND VectorFieldND::parse(const std::vector<std::string>& component_sources) {
    int n = static_cast<int>(component_sources.size());
    if (n < 1 || n > 3)
        throw std::invalid_argument("vector field needs 1 to 3 components");
    auto base = base_vars(n);
    auto aliases = alias_vars(n);
    std::vector<std::string> full = base;
    full.insert(full.end(), aliases.begin(), aliases.end());

    VectorFieldND field;
    for (const auto& src : component_sources) {
        auto ast = expr::ExprAst::parse(src, full);
        for (int i = 0; i < n; ++i)
            ast = ast.substitute(aliases[static_cast<std::size_t>(i)],
                                 expr::ExprAst::variable(base[static_cast<std::size_t>(i)], full));
        field.components_.push_back(ast.rebind(base));
    }
    return field;
}

num::Vec VectorFieldND::eval(const num::Vec& p) const {
    if (p.size() != dim()) throw std::invalid_argument("point dimension mismatch");
    num::Vec out(dim());
    std::span<const double> args(p.data(), static_cast<std::size_t>(p.size()));
    for (int i = 0; i < dim(); ++i)
        out[i] = components_[static_cast<std::size_t>(i)].eval(args);
    return out;
}

num::DenseMatrix VectorFieldND::jacobian_at(const num::Vec& p) const {
    int n = dim();
    if (p.size() != n) throw std::invalid_argument("point dimension mismatch");
    auto base = base_vars(n);
    num::DenseMatrix j(n, n);
    std::span<const double> args(p.data(), static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int col = 0; col < n; ++col) {
            bool use_fd = false;
            try {
                auto d = components_[static_cast<std::size_t>(i)].differentiate(base[static_cast<std::size_t>(col)]);
                j(i, col) = d.eval(args);
            } catch (const expr::DerivativeError&) {
                use_fd = true;
            } catch (const expr::EvalDomainError&) {
                use_fd = true;
            }
            if (use_fd) {
                // Richardson-extrapolated central difference.
                double step = 1e-5 * std::max(1.0, std::abs(p[col]));
                auto quotient = [&](double d) {
                    num::Vec hi = p, lo = p;
                    hi[col] += d;
                    lo[col] -= d;
                    std::span<const double> ha(hi.data(), static_cast<std::size_t>(n));
                    std::span<const double> la(lo.data(), static_cast<std::size_t>(n));
                    return (components_[static_cast<std::size_t>(i)].eval(ha) -
                            components_[static_cast<std::size_t>(i)].eval(la)) / (2.0 * d);
                };
                j(i, col) = (4.0 * quotient(step / 2) - quotient(step)) / 3.0;
            }
        }
    }
    return j;
}

VectorFieldND VectorFieldND::recentered(const num::Vec& shift) const {
    int n = dim();
    if (shift.size() != n) throw std::invalid_argument("shift dimension mismatch");
    auto base = base_vars(n);
    VectorFieldND out;
    for (const auto& comp : components_) {
        auto ast = comp;
        for (int i = 0; i < n; ++i) {
            if (shift[i] == 0.0) continue;
            auto& name = base[static_cast<std::size_t>(i)];
            auto replacement = expr::ExprAst::variable(name, comp.variables()) +
                               expr::ExprAst::constant(shift[i], comp.variables());
            ast = ast.substitute(name, replacement);
        }
        out.components_.push_back(ast);
    }
    return out;
}

num::Rhs VectorFieldND::rhs() const {
    return [comps = components_](const num::Vec& p) {
        num::Vec out(static_cast<int>(comps.size()));
        std::span<const double> args(p.data(), static_cast<std::size_t>(p.size()));
        for (std::size_t i = 0; i < comps.size(); ++i)
            out[static_cast<int>(i)] = comps[i].eval(args);
        return out;
    };
}

num::Vec find_fixed_point(const VectorFieldND& field, num::Vec guess, double tol, int max_iter) {
    if (guess.size() != field.dim()) throw std::invalid_argument("guess dimension mismatch");
    num::Vec x = guess;
    for (int it = 0; it <= max_iter; ++it) {
        num::Vec fx = field.eval(x);
        if (fx.norm2() <= tol) return x;
        if (it == max_iter) break;
        auto j = field.jacobian_at(x);
        auto step = j.solve(to_std(fx));
        for (int i = 0; i < x.size(); ++i) x[i] -= step[static_cast<std::size_t>(i)];
    }
    throw ConvergenceError("Newton iteration for the fixed point did not converge");
}

HyperbolicityReport check_hyperbolic(const num::DenseMatrix& jacobian, double tol) {
    HyperbolicityReport rep;
    rep.eigenvalues = num::eigenvalues(jacobian);
    rep.min_abs_real = std::numeric_limits<double>::infinity();
    for (const auto& ev : rep.eigenvalues)
        rep.min_abs_real = std::min(rep.min_abs_real, std::abs(ev.real()));
    rep.hyperbolic = rep.min_abs_real > tol;
    return rep;
}

num::Vec SpectralSplit::to_split(const num::Vec& x) const { return schur.basis_inv.apply(x); }

num::Vec SpectralSplit::from_split(const num::Vec& u) const { return schur.basis.apply(u); }

num::DenseMatrix SpectralSplit::linear_map() const {
    int n = dim();
    int k = dim_stable();
    num::DenseMatrix l(n, n);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) l(i, j) = stable_map(i, j);
    for (int i = 0; i < n - k; ++i)
        for (int j = 0; j < n - k; ++j) l(k + i, k + j) = unstable_map(i, j);
    return l;
}

SpectralSplit spectral_split(const num::DenseMatrix& jacobian, double tol) {
    auto rep = check_hyperbolic(jacobian, tol);
    if (!rep.hyperbolic)
        throw NonHyperbolicError("an eigenvalue real part is within " + std::to_string(tol) +
                                 " of zero; the fixed point is not hyperbolic");
    SpectralSplit s;
    s.schur = num::real_schur_split(jacobian, tol);
    s.stable_map = num::matrix_exponential(s.schur.stable_block);
    s.unstable_map = num::matrix_exponential(s.schur.unstable_block);
    s.stable_map_inv = s.stable_map.empty() ? num::DenseMatrix{} : s.stable_map.inverse();
    s.unstable_map_inv = s.unstable_map.empty() ? num::DenseMatrix{} : s.unstable_map.inverse();
    s.b = num::operator_norm(s.stable_map);
    s.c = num::operator_norm(s.unstable_map_inv);
    if (s.dim_stable() > 0 && s.b >= 1.0)
        throw CalibrationError("time-one stable map does not contract: |B| = " + std::to_string(s.b));
    if (s.dim_unstable() > 0 && s.c >= 1.0)
        throw CalibrationError("time-one unstable map does not expand: |C^-1| = " + std::to_string(s.c));
    return s;
}

num::Vec time_one_map(const VectorFieldND& field, const num::Vec& x, double tol) {
    return num::integrate_flow(field.rhs(), x, 1.0, tol);
}

num::Vec inverse_time_one_map(const VectorFieldND& field, const num::Vec& x, double tol) {
    return num::integrate_flow(field.rhs(), x, -1.0, tol);
}

ErrorFieldValue error_fields(const VectorFieldND& field, const SpectralSplit& split,
                             const num::Vec& p, double flow_tol) {
    int k = split.dim_stable();
    int m = split.dim_unstable();
    num::Vec u1 = split.to_split(time_one_map(field, split.from_split(p), flow_tol));
    ErrorFieldValue ev;
    ev.stable_part = u1.slice(0, k) - split.stable_map.apply(p.slice(0, k));
    ev.unstable_part = u1.slice(k, m) - split.unstable_map.apply(p.slice(k, m));
    return ev;
}

double cutoff_q(double rho, double s0) {
    if (!(s0 > 0)) throw std::invalid_argument("cutoff radius must be positive");
    double half = 0.5 * s0;
    if (rho <= half) return 1.0;
    if (rho >= s0) return 0.0;
    double u = (rho - half) / half;
    return 1.0 - 3.0 * u * u + 2.0 * u * u * u;
}

ErrorFieldValue truncated_error(const VectorFieldND& field, const SpectralSplit& split,
                                const num::Vec& p, double s0, double flow_tol) {
    double rho = p.norm2();
    if (rho >= s0)
        return {num::Vec(split.dim_stable()), num::Vec(split.dim_unstable())};
    double q = cutoff_q(rho, s0);
    auto ev = error_fields(field, split, p, flow_tol);
    ev.stable_part = q * ev.stable_part;
    ev.unstable_part = q * ev.unstable_part;
    return ev;
}

namespace {

/// Sampled sup over the s0-ball of the spectral norms of the error-field
/// Jacobian blocks, by centered differences on an extended grid (the raw
/// error fields are defined wherever the flow is, so boundary neighbors are
/// evaluated directly). Returns +inf when the flow fails somewhere, which
/// calibration treats as "this radius is too large".
double sampled_error_derivative_sup(const VectorFieldND& field, const SpectralSplit& split,
                                    double s0, const CalibrationOptions& options) {
    int n = split.dim();
    int k = split.dim_stable();
    int samples = options.samples_per_axis;
    double h = 2.0 * s0 / (samples - 1);

    // Extended lattice: indices -1 .. samples per axis.
    std::array<int, 3> ext_nodes{};
    for (int ax = 0; ax < n; ++ax) ext_nodes[static_cast<std::size_t>(ax)] = samples + 2;
    long total = 1;
    for (int ax = 0; ax < n; ++ax) total *= ext_nodes[static_cast<std::size_t>(ax)];

    auto point_of = [&](const std::array<int, 3>& idx) {
        num::Vec p(n);
        for (int ax = 0; ax < n; ++ax) p[ax] = -s0 + (idx[static_cast<std::size_t>(ax)] - 1) * h;
        return p;
    };
    auto flat_of = [&](const std::array<int, 3>& idx) {
        long flat = 0;
        for (int ax = n - 1; ax >= 0; --ax)
            flat = flat * ext_nodes[static_cast<std::size_t>(ax)] + idx[static_cast<std::size_t>(ax)];
        return flat;
    };

    std::vector<num::Vec> cache(static_cast<std::size_t>(total));
    for (long flat = 0; flat < total; ++flat) {
        std::array<int, 3> idx{};
        long rem = flat;
        for (int ax = 0; ax < n; ++ax) {
            auto a = static_cast<std::size_t>(ax);
            idx[a] = static_cast<int>(rem % ext_nodes[a]);
            rem /= ext_nodes[a];
        }
        try {
            auto ev = error_fields(field, split, point_of(idx), options.flow_tol);
            cache[static_cast<std::size_t>(flat)] = num::concat(ev.stable_part, ev.unstable_part);
        } catch (const ConvergenceError&) {
            return std::numeric_limits<double>::infinity();
        } catch (const expr::EvalDomainError&) {
            return std::numeric_limits<double>::infinity();
        }
    }

    double sup = 0.0;
    std::array<int, 3> idx{};
    auto visit = [&](auto&& self, int ax) -> void {
        if (ax == n) {
            num::Vec p(n);
            for (int a = 0; a < n; ++a) p[a] = -s0 + (idx[static_cast<std::size_t>(a)] - 1) * h;
            if (p.norm2() > s0 * (1.0 + 1e-12)) return;
            num::DenseMatrix d(n, n);
            for (int col = 0; col < n; ++col) {
                auto up = idx, dn = idx;
                up[static_cast<std::size_t>(col)] += 1;
                dn[static_cast<std::size_t>(col)] -= 1;
                auto& eu = cache[static_cast<std::size_t>(flat_of(up))];
                auto& ed = cache[static_cast<std::size_t>(flat_of(dn))];
                for (int row = 0; row < n; ++row)
                    d(row, col) = (eu[row] - ed[row]) / (2.0 * h);
            }
            double sy = (k > 0) ? num::operator_norm(d.block(0, 0, k, n)) : 0.0;
            double sz = (k < n) ? num::operator_norm(d.block(k, 0, n - k, n)) : 0.0;
            sup = std::max({sup, sy, sz});
            return;
        }
        for (int i = 1; i <= options.samples_per_axis; ++i) {
            idx[static_cast<std::size_t>(ax)] = i;
            self(self, ax + 1);
        }
    };
    visit(visit, 0);
    return sup;
}

}  // namespace

ConjugacyConstants calibrate_cutoff(const VectorFieldND& field, const SpectralSplit& split,
                                    const CalibrationOptions& options) {
    if (options.samples_per_axis < 3)
        throw std::invalid_argument("calibration needs at least 3 samples per axis");
    ConjugacyConstants cc;
    cc.b = split.b;
    cc.c = split.c;
    double expand_margin = cc.c > 0 ? 1.0 / cc.c - 1.0 : std::numeric_limits<double>::infinity();
    cc.a_target = std::min({1.0 - cc.b, expand_margin, 1.0}) / 4.0;

    double s0 = 1.0;
    for (;;) {
        double a = sampled_error_derivative_sup(field, split, s0, options);
        if (a <= cc.a_target) {
            cc.s0 = s0;
            cc.a = a;
            break;
        }
        s0 *= 0.5;
        if (s0 < options.min_s0)
            throw CalibrationError("cutoff radius shrank below " + std::to_string(options.min_s0) +
                                   " without meeting the derivative target");
    }

    double worst = std::max({cc.a, cc.b, cc.c});
    cc.delta = 0.0;
    for (int tenth = 9; tenth >= 1; --tenth) {
        double delta = tenth / 10.0;
        double r = cc.c * std::pow(2.0 * worst, delta);
        if (r < 1.0) {
            cc.delta = delta;
            cc.r = r;
            break;
        }
    }
    if (cc.delta == 0.0)
        throw CalibrationError("no Holder exponent in {0.9, ..., 0.1} yields a contraction factor below 1");
    cc.holder_m = 1.05 * cc.a * cc.c * std::pow(2.0 * cc.s0, 1.0 - cc.delta) / cc.r;
    return cc;
}

namespace {

struct TruncatedMap {
    const VectorFieldND& field;
    const SpectralSplit& split;
    double s0;
    double flow_tol;

    num::Vec forward(const num::Vec& p) const {
        int k = split.dim_stable();
        int m = split.dim_unstable();
        num::Vec lin = num::concat(split.stable_map.apply(p.slice(0, k)),
                                   split.unstable_map.apply(p.slice(k, m)));
        if (p.norm2() >= s0) return lin;
        auto ev = truncated_error(field, split, p, s0, flow_tol);
        return lin + num::concat(ev.stable_part, ev.unstable_part);
    }

    num::Vec inverse(const num::Vec& w) const {
        int k = split.dim_stable();
        int m = split.dim_unstable();
        // Where the preimage lies in the inner half-ball the truncated map is
        // the true flow, so the backward flow gives it exactly.
        if (w.norm2() <= s0) {
            try {
                num::Vec back = split.to_split(
                    inverse_time_one_map(field, split.from_split(w), flow_tol));
                if (back.norm2() <= 0.5 * s0) return back;
            } catch (const ConvergenceError&) {
            } catch (const expr::EvalDomainError&) {
            }
        }
        // Otherwise solve T(p) = w by fixed point: the error terms are small
        // Lipschitz perturbations, so this contracts on the scales we use.
        num::Vec p = num::concat(split.stable_map_inv.apply(w.slice(0, k)),
                                 split.unstable_map_inv.apply(w.slice(k, m)));
        for (int it = 0; it < 200; ++it) {
            auto ev = truncated_error(field, split, p, s0, flow_tol);
            num::Vec next = num::concat(
                split.stable_map_inv.apply(w.slice(0, k) - ev.stable_part),
                split.unstable_map_inv.apply(w.slice(k, m) - ev.unstable_part));
            double step = (next - p).norm2();
            p = next;
            if (step <= 1e-12) return p;
        }
        throw ConvergenceError("inverting the truncated time-one map did not converge");
    }
};

}  // namespace

ConjugacyRun build_conjugacy(const VectorFieldND& field, const SpectralSplit& split,
                             const ConjugacyOptions& options) {
    if (options.nodes_per_axis < 3)
        throw std::invalid_argument("conjugacy grid needs at least 3 nodes per axis");
    if (!(options.stop_tol > 0)) throw std::invalid_argument("stop_tol must be positive");

    ConjugacyRun run;
    CalibrationOptions cal = options.calibration;
    run.constants = calibrate_cutoff(field, split, cal);

    const double s0 = run.constants.s0;
    const int n = split.dim();
    const int k = split.dim_stable();
    const int m = split.dim_unstable();
    const double id_radius = 2.0 * s0;

    auto grid = num::BoxGrid::symmetric(n, s0, options.nodes_per_axis);
    const long total = grid.total_nodes();

    TruncatedMap tmap{field, split, s0, options.flow_tol};

    // Each node's forward and backward image is fixed across iterations, so
    // precompute the images and their interpolation stencils once.
    std::vector<num::Vec> fwd_w(static_cast<std::size_t>(total)), bwd_w(static_cast<std::size_t>(total));
    std::vector<num::InterpStencil> fwd(static_cast<std::size_t>(total)), bwd(static_cast<std::size_t>(total));
    for (long flat = 0; flat < total; ++flat) {
        num::Vec p = grid.point(flat);
        auto i = static_cast<std::size_t>(flat);
        fwd_w[i] = tmap.forward(p);
        fwd[i] = num::make_stencil(grid, fwd_w[i], id_radius);
        bwd_w[i] = tmap.inverse(p);
        bwd[i] = num::make_stencil(grid, bwd_w[i], id_radius);
    }

    auto psi = num::GridMapND::make(grid, m, k, id_radius);
    auto phi = num::GridMapND::make(grid, k, 0, id_radius);
    for (long flat = 0; flat < total; ++flat) {
        num::Vec p = grid.point(flat);
        psi.set_value(flat, p.slice(k, m));
        phi.set_value(flat, p.slice(0, k));
    }
    run.psi_iterates.push_back(psi);
    run.phi_iterates.push_back(phi);

    auto interpolated = [&](const num::GridMapND& map, const num::InterpStencil& st,
                            const num::Vec& w) {
        if (st.identity) return map.identity_slice(w);
        num::Vec out(map.value_dim);
        for (int c = 0; c < st.count; ++c) {
            auto base = static_cast<std::size_t>(st.corners[static_cast<std::size_t>(c)]) *
                        static_cast<std::size_t>(map.value_dim);
            double weight = st.weights[static_cast<std::size_t>(c)];
            for (int i = 0; i < map.value_dim; ++i)
                out[i] += weight * map.values[base + static_cast<std::size_t>(i)];
        }
        return out;
    };

    bool psi_done = (m == 0);
    bool phi_done = (k == 0);
    while (!(psi_done && phi_done) && run.iterations < options.max_iterations) {
        ++run.iterations;
        if (!psi_done) {
            auto next = psi;
            double gap = 0.0;
            for (long flat = 0; flat < total; ++flat) {
                auto i = static_cast<std::size_t>(flat);
                num::Vec v = split.unstable_map_inv.apply(interpolated(psi, fwd[i], fwd_w[i]));
                gap = std::max(gap, (v - psi.value_at(flat)).norm2());
                next.set_value(flat, v);
            }
            run.psi_gaps.push_back(gap);
            run.psi_iterates.push_back(next);
            psi = std::move(next);
            if (gap <= options.stop_tol) psi_done = true;
        }
        if (!phi_done) {
            auto next = phi;
            double gap = 0.0;
            for (long flat = 0; flat < total; ++flat) {
                auto i = static_cast<std::size_t>(flat);
                num::Vec v = split.stable_map.apply(interpolated(phi, bwd[i], bwd_w[i]));
                gap = std::max(gap, (v - phi.value_at(flat)).norm2());
                next.set_value(flat, v);
            }
            run.phi_gaps.push_back(gap);
            run.phi_iterates.push_back(next);
            phi = std::move(next);
            if (gap <= options.stop_tol) phi_done = true;
        }
    }
    run.converged = psi_done && phi_done;

    run.conjugacy = num::GridMapND::make(grid, n, 0, id_radius);
    for (long flat = 0; flat < total; ++flat)
        run.conjugacy.set_value(flat, num::concat(phi.value_at(flat), psi.value_at(flat)));

    run.residual = conjugacy_residual(run.conjugacy, field, split,
                                      options.residual_radius_factor * s0, options.flow_tol);
    return run;
}

double conjugacy_residual(const std::function<num::Vec(const num::Vec&)>& conjugacy,
                          const VectorFieldND& field, const SpectralSplit& split,
                          double region_radius, double flow_tol, int samples_per_axis) {
    if (!(region_radius > 0)) throw std::invalid_argument("region radius must be positive");
    int n = split.dim();
    auto linear = split.linear_map();
    auto sample = num::BoxGrid::symmetric(n, region_radius, samples_per_axis);
    auto f = field.rhs();
    double worst = 0.0;
    for (long flat = 0; flat < sample.total_nodes(); ++flat) {
        num::Vec p = sample.point(flat);
        if (p.norm2() > region_radius * (1.0 + 1e-12)) continue;
        num::Vec tp = split.to_split(num::integrate_flow(f, split.from_split(p), 1.0, flow_tol));
        num::Vec lhs = conjugacy(tp);
        num::Vec rhs = linear.apply(conjugacy(p));
        worst = std::max(worst, (lhs - rhs).norm2());
    }
    return worst;
}

double conjugacy_residual(const num::GridMapND& conjugacy, const VectorFieldND& field,
                          const SpectralSplit& split, double region_radius, double flow_tol,
                          int samples_per_axis) {
    return conjugacy_residual([&conjugacy](const num::Vec& p) { return conjugacy.evaluate(p); },
                              field, split, region_radius, flow_tol, samples_per_axis);
}

HolderCheckReport verify_holder_bound(const ConjugacyRun& run, double slack) {
    HolderCheckReport rep;
    const auto& cc = run.constants;
    const auto& grid = run.conjugacy.grid;
    const int n = grid.dim;
    const int k = run.phi_iterates.empty() ? 0 : run.phi_iterates.front().value_dim;

    auto check_chain = [&](const std::vector<num::GridMapND>& chain, std::vector<bool>& out) {
        for (std::size_t j = 1; j < chain.size(); ++j) {
            double factor = cc.holder_m * std::pow(cc.r, static_cast<double>(j));
            bool ok = true;
            for (long flat = 0; flat < grid.total_nodes() && ok; ++flat) {
                num::Vec p = grid.point(flat);
                double radius = p.slice(0, k).norm2() + p.slice(k, n - k).norm2();
                double bound = factor * std::pow(radius, cc.delta) + slack;
                double diff = (chain[j].value_at(flat) - chain[j - 1].value_at(flat)).norm2();
                if (diff > bound) ok = false;
            }
            out.push_back(ok);
            rep.all_ok = rep.all_ok && ok;
        }
    };
    check_chain(run.psi_iterates, rep.psi_ok);
    check_chain(run.phi_iterates, rep.phi_ok);
    return rep;
}

}  // namespace fixpoint::hartman
