#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "fmnc/metric.hpp"
#include "fmnc/space.hpp"

namespace fmnc {

inline constexpr std::size_t kDefaultHullBudget = 200000;

/// Nonnegative weights summing to 1 (renormalized on construction; rejects
/// negative entries and near-zero sums).
struct BarycentricWeights {
    std::vector<double> t;
    static BarycentricWeights of(std::vector<double> raw);
};

/// t*x + (1-t)*y, the two-point convex structure.
Vector w_combine(const Vector& x, const Vector& y, double t);

/// t1*x + t2*y + t3*z, the three-point structure.
Vector k_combine(const Vector& x, const Vector& y, const Vector& z,
                 const BarycentricWeights& w);

/// General combination over any generator list.
Vector bary_combine(std::span<const Vector> points, const BarycentricWeights& w);

/// Residual of the Takahashi inequality
/// d(u, W(x,y,t)) - [t*d(u,x) + (1-t)*d(u,y)]; <= 0 means satisfied.
double check_tcs(const FNormMetric& metric, const Vector& u, const Vector& x,
                 const Vector& y, double t);

/// Three-point analogue with barycentric weights.
double check_tmcs(const FNormMetric& metric, const Vector& u, const Vector& x,
                  const Vector& y, const Vector& z, const BarycentricWeights& w);

/// Barycentric grid over the generators: all sums (k_i / resolution) * x_i
/// with nonnegative integer k_i summing to resolution. Vertices come first.
/// Rejects grids larger than `budget` (C(n + r - 1, r) points).
struct HullSample {
    PointCloud cloud;
    std::vector<std::vector<int>> compositions; // per point, length n
    int resolution = 1;
};
HullSample hull_sample_full(const PointCloud& generators, int resolution,
                            std::size_t budget = kDefaultHullBudget);
PointCloud hull_sample(const PointCloud& generators, int resolution,
                       std::size_t budget = kDefaultHullBudget);

/// Number of grid points C(n + r - 1, r) as a double (for budget checks).
double hull_grid_size(int generator_count, int resolution);

/// Additive bound on the distance from any true hull point to the sampled
/// grid: diameter * n / resolution.
double hull_grid_gap(const FNormMetric& metric, const PointCloud& generators, int resolution);

/// Stability of the open r-neighborhood of a convex grid C: samples pairs
/// from C_r, combines them, and measures the distance back to C (min over the
/// grid and over the combination of the perturbed grid points, which is in
/// the convex set by W-convexity). Violation = distance - r.
struct StabilityReport {
    double max_violation = 0.0;
    double r = 0.0;
    double tolerance = 0.0;
    long samples = 0;
    double grid_gap = 0.0;
    bool pass = false;
    std::optional<Vector> witness;
};
StabilityReport check_stability(const FNormMetric& metric, const HullSample& c, double r,
                                int samples, double tol, Rng& rng,
                                double perturb_frac = 0.7);

/// Property (P) residuals for both readings of the right-hand side:
///   printed       t*d(x1,y1) + (1-t)*d(x2,y2)
///   conventional  t*d(x1,x2) + (1-t)*d(y1,y2)
struct PropertyPReport {
    double printed_margin = 0.0;
    double conventional_margin = 0.0;
    long samples = 0;
};
using PropertyPTuple = std::tuple<Vector, Vector, Vector, Vector, double>; // x1, y1, x2, y2, t
PropertyPReport check_property_p(const FNormMetric& metric,
                                 std::span<const PropertyPTuple> tuples);

/// Property (Q) surrogate at truncation: for every eps the hull grid of F at
/// a resolution making the grid an eps/2-net of the true hull admits a finite
/// eps-net. Net sizes are recorded.
struct PropertyQReport {
    struct Entry {
        double eps = 0.0;
        int resolution = 0;
        std::size_t grid_points = 0;
        std::size_t net_size = 0;
        double grid_gap = 0.0;
        bool complete = false;
    };
    std::vector<Entry> entries;
    bool pass = false;
};
PropertyQReport check_property_q(const FNormMetric& metric, const PointCloud& finite_set,
                                 std::span<const double> eps_list,
                                 std::size_t budget = kDefaultHullBudget);

} // namespace fmnc
