#pragma once

#include <array>
#include <limits>
#include <vector>

#include "fixpoint/linalg.hpp"

namespace fixpoint::num {

/// Uniform tensor grid over a box in dimension 1..3.
struct BoxGrid {
    int dim = 1;
    std::array<double, 3> lo{};
    std::array<double, 3> hi{};
    std::array<int, 3> nodes{};

    /// [-radius, radius]^dim with the same odd-friendly node count per axis.
    static BoxGrid symmetric(int dim, double radius, int nodes_per_axis);

    double spacing(int ax) const {
        return (hi[static_cast<std::size_t>(ax)] - lo[static_cast<std::size_t>(ax)]) /
               (nodes[static_cast<std::size_t>(ax)] - 1);
    }
    long total_nodes() const;

    long flatten(const std::array<int, 3>& idx) const;   // axis 0 fastest
    std::array<int, 3> unflatten(long flat) const;
    Vec point(long flat) const;

    bool contains(const Vec& p) const;
};

/// Interpolation plan for one query point: either "use the identity slice"
/// or a convex combination of up to 2^dim grid corners. Cached by iteration
/// loops that evaluate many maps at the same points.
struct InterpStencil {
    bool identity = false;
    int count = 0;
    std::array<long, 8> corners{};
    std::array<double, 8> weights{};
};

InterpStencil make_stencil(const BoxGrid& grid, const Vec& p, double identity_l1_radius);

/// Vector-valued map tabulated on a BoxGrid, evaluated by multilinear
/// interpolation. Queries outside the box, or with l1 norm at or beyond
/// identity_l1_radius, return the identity components
/// p[identity_offset .. identity_offset + value_dim) instead of
/// extrapolating.
struct GridMapND {
    BoxGrid grid;
    int value_dim = 0;
    int identity_offset = 0;
    double identity_l1_radius = std::numeric_limits<double>::infinity();
    std::vector<double> values;  // total_nodes * value_dim, node-major

    static GridMapND make(BoxGrid grid, int value_dim, int identity_offset,
                          double identity_l1_radius = std::numeric_limits<double>::infinity());

    Vec value_at(long flat) const;
    void set_value(long flat, const Vec& v);

    Vec identity_slice(const Vec& p) const { return p.slice(identity_offset, value_dim); }

    Vec evaluate(const Vec& p) const;
};

}  // namespace fixpoint::num
