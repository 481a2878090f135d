#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fmnc/metric.hpp"
#include "fmnc/space.hpp"

namespace fmnc {

double distance_to_cloud(const FNormMetric& metric, const Vector& x, const PointCloud& cloud);

/// An eps-net with a verifiable covering proof. Centers may lie anywhere in
/// the ambient space (they are not required to be points of the covered set);
/// `assignments[i]` maps covered point i to a center index and the distance.
struct NetCertificate {
    double eps = 0.0;
    PointCloud centers;
    struct Assignment {
        int center = -1;
        double distance = 0.0;
    };
    std::vector<Assignment> assignments;
    bool complete = false;
};

/// Farthest-point greedy cover of M at radius eps, centers drawn from
/// `candidates` (default: M itself). Deterministic given point order: the
/// first target is M[0], ties break toward the lowest index. Empty clouds
/// yield an empty, vacuously complete certificate.
NetCertificate greedy_net(const FNormMetric& metric, const PointCloud& m, double eps);
NetCertificate greedy_net(const FNormMetric& metric, const PointCloud& m, double eps,
                          const PointCloud& candidates);

/// Recomputes every assigned distance; true iff the certificate is sound.
bool verify_net(const FNormMetric& metric, const PointCloud& m, const NetCertificate& cert);

/// Greedy maximal 2*eps-separated subset of M (scan in index order). Its size
/// lower-bounds every eps-net of M, so k witnesses above the allowed net size
/// certify that M cannot be covered at eps within that budget.
struct PackingWitness {
    double eps = 0.0;
    std::vector<int> indices;
};
PackingWitness packing_lower(const FNormMetric& metric, const PointCloud& m, double eps);
bool verify_packing(const FNormMetric& metric, const PointCloud& m, const PackingWitness& w);

inline constexpr std::size_t kUnlimitedNetBudget = std::numeric_limits<std::size_t>::max();

/// Two-sided covering estimate on an eps grid. `upper` is the least grid eps
/// whose greedy net fits the allowed net size; `lower` is the largest grid
/// eps whose packing witness exceeds it (0 when none does). For finite clouds
/// with an unlimited budget the upper bound collapses to the grid floor;
/// a finite budget is the desk-scale surrogate for "finite net".
struct AlphaBounds {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    bool upper_attained = false;
    std::vector<double> eps_grid;
    std::size_t net_budget = kUnlimitedNetBudget;
    struct ProfileEntry {
        double eps = 0.0;
        std::size_t net_size = 0;
        std::size_t packing_count = 0;
    };
    std::vector<ProfileEntry> profile;
    std::optional<NetCertificate> upper_witness;
    std::optional<PackingWitness> lower_witness;
};
AlphaBounds alpha_bounds(const FNormMetric& metric, const PointCloud& m,
                         std::vector<double> eps_grid,
                         std::size_t net_budget = kUnlimitedNetBudget);

/// Transfers an eta-net of M to a net of the sampled convex hull of M:
/// cover the hull grid of the net centers by a greedy eps-net K; every
/// resolution-r hull point of M aggregates (exactly, same resolution) to a
/// hull point of the centers within eta, so K covers the hull sample of M at
/// eta + eps. `grid_gap` bounds the extra slack for the continuum hull.
struct NetTransfer {
    NetCertificate certificate; // covers co_sample at eta + eps (+ float slack)
    PointCloud co_sample;
    double eta = 0.0;
    double eps = 0.0;
    double grid_gap = 0.0;     // diameter * n / resolution for the center hull
    double hinge_max = 0.0;    // max over grid points of d(x, aggregated z)
    int resolution = 1;
};
NetTransfer net_transfer_co(const FNormMetric& metric, const PointCloud& m,
                            const NetCertificate& net_for_m, double eps, int resolution,
                            std::size_t hull_budget);

/// Bound-level checks of the standard Hausdorff-MNC calculus on derived
/// clouds: monotonicity, closure no-op, translation invariance, homogeneity,
/// the finite/precompact branch, Minkowski-sum subadditivity, unions, and the
/// finite-dimensional unit-ball branch.
struct MncPropertyItem {
    std::string item;      // "i".."viii"
    std::string statement;
    double violation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};
std::vector<MncPropertyItem> check_mnc_properties(const FNormMetric& metric,
                                                  const std::vector<PointCloud>& clouds,
                                                  const std::vector<double>& eps_grid,
                                                  std::size_t net_budget, Rng& rng);

/// A verified decreasing sequence of clouds: every point of members[i+1] lies
/// within nest_tolerance of members[i]. Finite grids are their own closures,
/// recorded by the flag.
struct DecreasingFamily {
    std::vector<PointCloud> members;
    double nest_tolerance = 0.0;
    bool closed = true;
};
DecreasingFamily make_decreasing_family(const FNormMetric& metric,
                                        std::vector<PointCloud> members, double nest_tol);

/// Searches the smallest member for a point within eps of every member.
/// Failure is reported, never silently ignored.
struct IntersectionProbe {
    bool found = false;
    Vector point;
    double max_distance = 0.0;
    std::vector<double> distances; // one per member, for the returned point
};
IntersectionProbe nested_intersection_probe(const FNormMetric& metric,
                                            const DecreasingFamily& family, double eps);

} // namespace fmnc
