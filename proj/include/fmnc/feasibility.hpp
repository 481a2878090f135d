#pragma once

#include <span>
#include <vector>

#include "fmnc/space.hpp"

namespace fmnc {

/// Result of the convex-combination feasibility problem: does q lie in the
/// convex hull of the generators? Solved as a phase-1 simplex on
/// [G^T; 1^T] w = [q; 1], w >= 0. When feasible the weights are a verifiable
/// witness; `residual` is the recomputed max |q - sum w_i g_i| component.
struct ConvexMembership {
    bool inside = false;
    std::vector<double> weights;
    double residual = 0.0;
};

ConvexMembership convex_membership(std::span<const Vector> generators, const Vector& q,
                                   double tol = 1e-9);

} // namespace fmnc
