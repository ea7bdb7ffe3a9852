#include "fixpoint/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace fixpoint::num {

namespace {

void validate(const BoxGrid& g) {
    if (g.dim < 1 || g.dim > 3) throw std::invalid_argument("BoxGrid: dimension must be 1..3");
    for (int ax = 0; ax < g.dim; ++ax) {
        auto a = static_cast<std::size_t>(ax);
        if (g.nodes[a] < 2) throw std::invalid_argument("BoxGrid: need at least 2 nodes per axis");
        if (!(g.hi[a] > g.lo[a])) throw std::invalid_argument("BoxGrid: empty axis extent");
    }
}

}  // namespace

BoxGrid BoxGrid::symmetric(int dim, double radius, int nodes_per_axis) {
    if (!(radius > 0)) throw std::invalid_argument("BoxGrid: radius must be positive");
    BoxGrid g;
    g.dim = dim;
    for (int ax = 0; ax < dim; ++ax) {
        auto a = static_cast<std::size_t>(ax);
        g.lo[a] = -radius;
        g.hi[a] = radius;
        g.nodes[a] = nodes_per_axis;
    }
    validate(g);
    return g;
}

long BoxGrid::total_nodes() const {
    long total = 1;
    for (int ax = 0; ax < dim; ++ax) total *= nodes[static_cast<std::size_t>(ax)];
    return total;
}

long BoxGrid::flatten(const std::array<int, 3>& idx) const {
    long flat = 0;
    for (int ax = dim - 1; ax >= 0; --ax)
        flat = flat * nodes[static_cast<std::size_t>(ax)] + idx[static_cast<std::size_t>(ax)];
    return flat;
}

std::array<int, 3> BoxGrid::unflatten(long flat) const {
    std::array<int, 3> idx{};
    for (int ax = 0; ax < dim; ++ax) {
        auto a = static_cast<std::size_t>(ax);
        idx[a] = static_cast<int>(flat % nodes[a]);
        flat /= nodes[a];
    }
    return idx;
}

Vec BoxGrid::point(long flat) const {
    auto idx = unflatten(flat);
    Vec p(dim);
    for (int ax = 0; ax < dim; ++ax) {
        auto a = static_cast<std::size_t>(ax);
        // Snap the last node to hi exactly so box membership tests are stable.
        p[ax] = (idx[a] == nodes[a] - 1) ? hi[a] : lo[a] + idx[a] * spacing(ax);
    }
    return p;
}

bool BoxGrid::contains(const Vec& p) const {
    for (int ax = 0; ax < dim; ++ax) {
        auto a = static_cast<std::size_t>(ax);
        if (p[ax] < lo[a] || p[ax] > hi[a]) return false;
    }
    return true;
}

GridMapND GridMapND::make(BoxGrid grid, int value_dim, int identity_offset,
                          double identity_l1_radius) {
    validate(grid);
    if (value_dim < 0 || identity_offset < 0 || identity_offset + value_dim > grid.dim)
        throw std::invalid_argument("GridMapND: identity slice exceeds point dimension");
    GridMapND m;
    m.grid = grid;
    m.value_dim = value_dim;
    m.identity_offset = identity_offset;
    m.identity_l1_radius = identity_l1_radius;
    m.values.assign(static_cast<std::size_t>(grid.total_nodes()) * value_dim, 0.0);
    return m;
}

Vec GridMapND::value_at(long flat) const {
    Vec v(value_dim);
    auto base = static_cast<std::size_t>(flat) * value_dim;
    for (int i = 0; i < value_dim; ++i) v[i] = values[base + static_cast<std::size_t>(i)];
    return v;
}

void GridMapND::set_value(long flat, const Vec& v) {
    auto base = static_cast<std::size_t>(flat) * value_dim;
    for (int i = 0; i < value_dim; ++i) values[base + static_cast<std::size_t>(i)] = v[i];
}

InterpStencil make_stencil(const BoxGrid& grid, const Vec& p, double identity_l1_radius) {
    InterpStencil st;
    if (p.norm1() >= identity_l1_radius || !grid.contains(p)) {
        st.identity = true;
        return st;
    }

    std::array<int, 3> cell{};
    std::array<double, 3> t{};
    for (int ax = 0; ax < grid.dim; ++ax) {
        auto a = static_cast<std::size_t>(ax);
        double u = (p[ax] - grid.lo[a]) / grid.spacing(ax);
        int c = static_cast<int>(std::floor(u));
        if (c > grid.nodes[a] - 2) c = grid.nodes[a] - 2;
        if (c < 0) c = 0;
        cell[a] = c;
        t[a] = u - c;
    }

    int corners = 1 << grid.dim;
    for (int mask = 0; mask < corners; ++mask) {
        double w = 1.0;
        std::array<int, 3> idx = cell;
        for (int ax = 0; ax < grid.dim; ++ax) {
            auto a = static_cast<std::size_t>(ax);
            if (mask & (1 << ax)) {
                w *= t[a];
                idx[a] += 1;
            } else {
                w *= 1.0 - t[a];
            }
        }
        if (w == 0.0) continue;
        st.corners[static_cast<std::size_t>(st.count)] = grid.flatten(idx);
        st.weights[static_cast<std::size_t>(st.count)] = w;
        ++st.count;
    }
    return st;
}

Vec GridMapND::evaluate(const Vec& p) const {
    if (p.size() != grid.dim) throw std::invalid_argument("GridMapND: point dimension mismatch");
    auto st = make_stencil(grid, p, identity_l1_radius);
    if (st.identity) return identity_slice(p);
    Vec out(value_dim);
    for (int c = 0; c < st.count; ++c) {
        auto base = static_cast<std::size_t>(st.corners[static_cast<std::size_t>(c)]) * value_dim;
        double w = st.weights[static_cast<std::size_t>(c)];
        for (int i = 0; i < value_dim; ++i)
            out[i] += w * values[base + static_cast<std::size_t>(i)];
    }
    return out;
}

}  // namespace fixpoint::num
