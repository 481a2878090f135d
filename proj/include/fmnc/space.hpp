#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fmnc/rng.hpp"

namespace fmnc {

enum class SpaceKind { CGrid, SeqProduct, LpGrid };

std::string to_string(SpaceKind kind);
SpaceKind space_kind_from_string(const std::string& name);

/// A truncated model of a metrizable vector space: `dim` coordinates and a
/// family of `m` seminorms.
///
///   c-grid       p_k(x) = max |x_i| over the first ceil(k*dim/m) coordinates
///                (nested discretized sup norms).
///   seq-product  p_k(x) = sum |x_i| over block k (block partition of 1..dim).
///   lp-grid      q(x)   = sum |x_i|^p * step, 0 < p <= 1. For p < 1 this is
///                subadditive but not homogeneous; the model is flagged
///                non-locally-convex and excluded from gauge constructions.
struct SpaceModel {
    SpaceKind kind = SpaceKind::CGrid;
    int dim = 1;
    int seminorm_count = 1; // m
    double step = 1.0;      // c-grid, lp-grid
    double exponent = 1.0;  // lp-grid p
    std::vector<int> blocks; // seq-product, size m, sums to dim

    bool locally_convex() const {
        return !(kind == SpaceKind::LpGrid && exponent < 1.0);
    }

    /// c-grid: number of leading coordinates seen by seminorm k (1-based).
    int prefix_len(int k) const;
    /// seq-product: [first, last) coordinate range of block k (1-based).
    std::pair<int, int> block_range(int k) const;

    bool operator==(const SpaceModel& other) const = default;
};

using SpacePtr = std::shared_ptr<const SpaceModel>;

SpacePtr make_space_cgrid(int dim, int m, double step);
SpacePtr make_space_seq_product(int dim, std::vector<int> blocks);
SpacePtr make_space_lp_grid(int dim, double p, double step);

/// p_k(x) for 1 <= k <= m. Throws on index or size mismatch.
double seminorm_eval(const SpaceModel& space, int k, std::span<const double> x);

/// A point of a SpaceModel. Coordinates are finite; arithmetic is only
/// defined between vectors of the same space.
struct Vector {
    SpacePtr space;
    std::vector<double> coords;

    Vector() = default;
    Vector(SpacePtr s, std::vector<double> c);
};

bool same_space(const SpacePtr& a, const SpacePtr& b);
void require_same_space(const Vector& a, const Vector& b);

Vector zero_vector(const SpacePtr& space);
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b); // a - b
Vector scale(double lambda, const Vector& x);
double seminorm_eval(const Vector& x, int k);

/// A finite sampled set, the universal set currency. All points share one
/// space; empty clouds are allowed and must be handled by consumers.
struct PointCloud {
    SpacePtr space;
    std::vector<Vector> points;
    std::string label;

    PointCloud() = default;
    explicit PointCloud(SpacePtr s, std::string lbl = "") : space(std::move(s)), label(std::move(lbl)) {}

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    void push_back(Vector v);
};

PointCloud translate_cloud(const PointCloud& m, const Vector& z);
PointCloud scale_cloud(double lambda, const PointCloud& m);
PointCloud minkowski_sum(const PointCloud& a, const PointCloud& b);
PointCloud union_cloud(const PointCloud& a, const PointCloud& b);
Vector barycenter(const PointCloud& m);

/// Seeded samples on the dyadic lattice (see Rng::dyadic); amp bounds each
/// coordinate.
Vector sample_vector(const SpacePtr& space, Rng& rng, double amp);
PointCloud sample_cloud(const SpacePtr& space, Rng& rng, int n, double amp,
                        std::string label = "");

} // namespace fmnc
