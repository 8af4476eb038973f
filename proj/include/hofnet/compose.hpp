#pragma once

#include <string>

#include "hofnet/mlp.hpp"
#include "hofnet/pointcloud.hpp"

namespace hofnet {

// A mapping whose k-th self-composition reconstructs the object; the layer
// schedule must share its endpoints (domain == codomain).
struct KMapping {
    FlatParams params;
    int k = 1;
};

void validate(const KMapping& m);

// f applied k times; k = 0 is the identity. No renormalization happens
// between stages, intermediate points may leave the canonical set.
PointCloud power_eval(const FlatParams& params, int k, const PointCloud& x);
PointCloud power_eval(const KMapping& m, const PointCloud& x);

// One of the 2^k stage choices between two parents, e.g. "ABBA". The first
// character is the innermost application (applied to x first).
struct CompositionPlan {
    std::vector<bool> pick_b;

    std::size_t k() const { return pick_b.size(); }
    static CompositionPlan parse(const std::string& text);
    std::string str() const;
};

PointCloud compose_interpolate(const FlatParams& a, const FlatParams& b,
                               const CompositionPlan& plan, const PointCloud& x);

// Elementwise midpoint of two parameter vectors over one shared schedule.
FlatParams param_interpolate(const FlatParams& a, const FlatParams& b);

// Mean squared displacement of the batch under f.
double reg_distance_traveled(const FlatParams& params, const PointCloud& xs);

// Mean squared gap between f(x) and x's Euclidean projection onto `target`.
double reg_projection(const FlatParams& params, const PointCloud& xs,
                      const PointCloud& target);

} // namespace hofnet
