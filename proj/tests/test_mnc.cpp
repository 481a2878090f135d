#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fmnc/convexity.hpp"
#include "fmnc/mnc.hpp"

using namespace fmnc;

namespace {

const SpacePtr line = make_space_cgrid(1, 1, 1.0);
const SpacePtr space3 = make_space_cgrid(3, 3, 0.25);

FNormMetric gauge_metric(const SpacePtr& s) {
    return build_fnorm(s, MetricMode::Gauge, std::vector<double>(s->seminorm_count, 1.0));
}

PointCloud line_cloud(std::initializer_list<double> xs) {
    PointCloud m(line, "line");
    for (double x : xs) m.points.emplace_back(line, std::vector<double>{x});
    return m;
}

// Brute-force oracle: smallest number of candidate centers covering m at eps,
// by exhaustive subset search in increasing size.
std::size_t brute_min_net_size(const FNormMetric& metric, const PointCloud& m,
                               const PointCloud& candidates, double eps) {
    if (m.empty()) return 0;
    const std::size_t n = candidates.size();
    REQUIRE(n <= 20);
    for (std::size_t size = 1; size <= n; ++size) {
        std::vector<bool> pick(n, false);
        std::fill(pick.end() - static_cast<std::ptrdiff_t>(size), pick.end(), true);
        do {
            bool covered_all = true;
            for (const Vector& p : m.points) {
                bool covered = false;
                for (std::size_t c = 0; c < n && !covered; ++c)
                    if (pick[c] && metric_eval(metric, p, candidates.points[c]) <= eps)
                        covered = true;
                if (!covered) {
                    covered_all = false;
                    break;
                }
            }
            if (covered_all) return size;
        } while (std::next_permutation(pick.begin(), pick.end()));
    }
    return n + 1; // unreachable for candidates over m itself
}

// Brute-force oracle: the largest 2*eps-separated subset.
std::size_t brute_max_packing(const FNormMetric& metric, const PointCloud& m, double eps) {
    const std::size_t n = m.size();
    REQUIRE(n <= 20);
    std::size_t best = 0;
    for (std::size_t mask = 1; mask < (1ull << n); ++mask) {
        std::vector<std::size_t> chosen;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ull << i)) chosen.push_back(i);
        bool ok = true;
        for (std::size_t a = 0; a < chosen.size() && ok; ++a)
            for (std::size_t b = a + 1; b < chosen.size() && ok; ++b)
                if (metric_eval(metric, m.points[chosen[a]], m.points[chosen[b]]) <= 2.0 * eps)
                    ok = false;
        if (ok) best = std::max(best, chosen.size());
    }
    return best;
}

} // namespace

TEST_CASE("greedy net: pinned behavior and soundness") {
    const FNormMetric metric = gauge_metric(line);

    const PointCloud single = line_cloud({0.5});
    const NetCertificate lone = greedy_net(metric, single, 0.1);
    CHECK(lone.complete);
    CHECK(lone.centers.size() == 1);
    CHECK(lone.centers.points[0].coords[0] == 0.5);

    // scan order 0, 1, 2 picks {0, 2}; the optimum is one center at 1
    const PointCloud three = line_cloud({0.0, 1.0, 2.0});
    const NetCertificate net = greedy_net(metric, three, 1.01);
    CHECK(net.complete);
    REQUIRE(net.centers.size() == 2);
    CHECK(net.centers.points[0].coords[0] == 0.0);
    CHECK(net.centers.points[1].coords[0] == 2.0);
    CHECK(verify_net(metric, three, net));
    CHECK(brute_min_net_size(metric, three, three, 1.01) == 1);

    // a ball grid with its center first is covered by the center alone
    PointCloud ball = line_cloud({0.0, -1.0, -0.5, 0.5, 1.0});
    const NetCertificate centered = greedy_net(metric, ball, 1.0);
    CHECK(centered.centers.size() == 1);
    CHECK(centered.centers.points[0].coords[0] == 0.0);

    // empty cloud: vacuously complete
    const PointCloud empty(line, "empty");
    const NetCertificate nothing = greedy_net(metric, empty, 0.5);
    CHECK(nothing.complete);
    CHECK(nothing.centers.empty());

    CHECK_THROWS_AS(greedy_net(metric, three, 0.0), std::invalid_argument);

    // candidate centers outside the covered set ("in E, not in M")
    const PointCloud candidates = line_cloud({1.0, 7.0});
    const NetCertificate external = greedy_net(metric, three, 1.01, candidates);
    CHECK(external.complete);
    CHECK(external.centers.size() == 1);
    CHECK(external.centers.points[0].coords[0] == 1.0);
    CHECK(verify_net(metric, three, external));

    // and incompleteness is reported when no candidate can help
    const PointCloud hopeless = line_cloud({7.0});
    const NetCertificate failed = greedy_net(metric, three, 0.25, hopeless);
    CHECK_FALSE(failed.complete);
}

TEST_CASE("packing witnesses: pinned counts, maximality, duality") {
    const FNormMetric metric = gauge_metric(line);

    CHECK(packing_lower(metric, line_cloud({0.0, 5.0}), 1.0).indices.size() == 2);
    CHECK(packing_lower(metric, line_cloud({0.25}), 1.0).indices.size() == 1);

    const PointCloud four = line_cloud({0.0, 1.0, 2.0, 3.0});
    const PackingWitness pack = packing_lower(metric, four, 0.4);
    CHECK(pack.indices.size() == 4); // pairwise gaps 1.0 > 0.8
    CHECK(verify_packing(metric, four, pack));
    CHECK(brute_max_packing(metric, four, 0.4) == 4);

    // duality: every complete eps-net is at least as large as any packing
    Rng rng(19);
    const FNormMetric metric3 = gauge_metric(space3);
    for (int trial = 0; trial < 30; ++trial) {
        const PointCloud cloud = sample_cloud(space3, rng, 12, 1.0);
        for (double eps : {0.6, 0.3, 0.15}) {
            const NetCertificate net = greedy_net(metric3, cloud, eps);
            const PackingWitness p = packing_lower(metric3, cloud, eps);
            CHECK(verify_packing(metric3, cloud, p));
            CHECK(net.centers.size() >= p.indices.size());
            CHECK(brute_min_net_size(metric3, cloud, cloud, eps) >= p.indices.size());
        }
    }
}

TEST_CASE("alpha bounds: grid semantics, budget semantics, invariances") {
    const FNormMetric metric = gauge_metric(line);
    const PointCloud m = line_cloud({0.0, 0.25, 0.5, 0.75, 1.0});

    // unlimited budget: finite clouds cover at the grid floor
    const std::vector<double> grid{1.0, 0.5, 0.25, 0.125, 0.0625};
    const AlphaBounds free = alpha_bounds(metric, m, grid);
    CHECK(free.upper_attained);
    CHECK(free.upper == 0.0625);
    CHECK(free.lower == 0.0);

    // budget 2: the five points cannot be covered by two balls below 0.25
    const AlphaBounds tight = alpha_bounds(metric, m, grid, 2);
    CHECK(tight.upper_attained);
    CHECK(tight.upper == 0.5);
    CHECK(tight.lower == 0.125); // three points pairwise > 0.25 apart exist
    CHECK(tight.lower <= tight.upper);
    REQUIRE(tight.upper_witness.has_value());
    CHECK(verify_net(metric, m, *tight.upper_witness));
    REQUIRE(tight.lower_witness.has_value());
    CHECK(verify_packing(metric, m, *tight.lower_witness));

    CHECK_THROWS_AS(alpha_bounds(metric, m, std::vector<double>{0.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(alpha_bounds(metric, m, std::vector<double>{}), std::invalid_argument);

    // translation and scaling equivariance, exact on lattice data
    Rng rng(29);
    const FNormMetric metric3 = gauge_metric(space3);
    for (int trial = 0; trial < 20; ++trial) {
        const PointCloud cloud = sample_cloud(space3, rng, 20, 1.0);
        const std::vector<double> grid3{1.0, 0.8, 0.6, 0.4, 0.2, 0.1};
        const AlphaBounds base = alpha_bounds(metric3, cloud, grid3, 4);
        const AlphaBounds shifted = alpha_bounds(
            metric3, translate_cloud(cloud, sample_vector(space3, rng, 1.0)), grid3, 4);
        CHECK(shifted.upper == base.upper);
        CHECK(shifted.lower == base.lower);
        std::vector<double> doubled;
        for (double e : grid3) doubled.push_back(2.0 * e);
        const AlphaBounds scaled = alpha_bounds(metric3, scale_cloud(2.0, cloud), doubled, 4);
        CHECK(scaled.upper == 2.0 * base.upper);
        CHECK(scaled.lower == 2.0 * base.lower);
    }
}

TEST_CASE("net transfer to the sampled hull") {
    const FNormMetric metric = gauge_metric(line);

    // pinned: the segment {0, 2} with the trivial 0-net transfers to a 0.5-net
    const PointCloud segment = line_cloud({0.0, 2.0});
    const NetCertificate trivial = greedy_net(metric, segment, 1e-9);
    CHECK(trivial.complete);
    CHECK(trivial.eps == 1e-9);
    const NetTransfer transfer = net_transfer_co(metric, segment, trivial, 0.5, 16, 100000);
    CHECK(transfer.certificate.complete);
    CHECK(transfer.co_sample.size() == 17);
    CHECK(transfer.hinge_max <= 1e-9);
    for (const auto& a : transfer.certificate.assignments)
        CHECK(a.distance <= 0.5 + 1e-9);
    // the explicit cover {0.5, 1.5} is itself a valid 0.5-net of the grid
    const PointCloud explicit_net = line_cloud({0.5, 1.5});
    for (const Vector& p : transfer.co_sample.points)
        CHECK(distance_to_cloud(metric, p, explicit_net) <= 0.5 + 1e-12);

    // an already-convex grid: co(M) = M on the grid, certificate covers M
    const PointCloud convex = line_cloud({0.0, 0.5, 1.0, 1.5, 2.0});
    const NetCertificate eta_net = greedy_net(metric, convex, 0.5);
    const NetTransfer self_transfer = net_transfer_co(metric, convex, eta_net, 0.25, 4, 100000);
    CHECK(self_transfer.certificate.complete);

    // random three-dimensional clouds: certificate completeness at eta + eps,
    // hinge inequality at eta, and inclusion direction for the lower bound
    const FNormMetric metric3 = gauge_metric(space3);
    Rng rng(37);
    const std::vector<double> grid3{1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
    for (int trial = 0; trial < 10; ++trial) {
        const PointCloud cloud = sample_cloud(space3, rng, 10, 1.0);
        const AlphaBounds bounds = alpha_bounds(metric3, cloud, grid3, 5);
        REQUIRE(bounds.upper_attained);
        const double eta = bounds.upper;
        const NetTransfer t = net_transfer_co(metric3, cloud, *bounds.upper_witness, 0.1, 4, 200000);
        CHECK(t.certificate.complete);
        CHECK(t.hinge_max <= eta + 1e-9);
        CHECK(verify_net(metric3, t.co_sample, t.certificate));

        const AlphaBounds co_bounds = alpha_bounds(metric3, t.co_sample, grid3, 5);
        CHECK(bounds.lower <= co_bounds.lower); // inclusion, vertices-first packing
        const double co_upper = co_bounds.upper_attained
                                    ? std::min(co_bounds.upper, t.certificate.eps)
                                    : t.certificate.eps;
        CHECK(co_upper <= eta + 0.1 + t.grid_gap + 1e-9);

        // brute-force direction checks on the small cloud
        const std::size_t min_net = brute_min_net_size(metric3, cloud, cloud, eta);
        const PackingWitness pack = packing_lower(metric3, cloud, eta);
        CHECK(pack.indices.size() <= min_net);
        CHECK(min_net <= bounds.upper_witness->centers.size());
    }

    CHECK_THROWS_AS(net_transfer_co(metric, segment, NetCertificate{}, 0.1, 4, 1000),
                    std::invalid_argument);
}

TEST_CASE("proposition properties at bound level") {
    const FNormMetric metric = gauge_metric(space3);
    Rng rng(43);
    std::vector<PointCloud> clouds;
    for (int i = 0; i < 8; ++i) clouds.push_back(sample_cloud(space3, rng, 16, 1.0));
    std::vector<double> grid;
    for (int k = 0; 1.0 - 0.05 * k > 0.05 - 1e-9; ++k) grid.push_back(1.0 - 0.05 * k);

    const auto items = check_mnc_properties(metric, clouds, grid, 6, rng);
    REQUIRE(items.size() == 8);
    for (const auto& item : items) {
        CAPTURE(item.item);
        CAPTURE(item.statement);
        CAPTURE(item.violation);
        CHECK(item.pass);
    }
}

TEST_CASE("decreasing families and the intersection probe") {
    const FNormMetric metric = gauge_metric(line);

    std::vector<PointCloud> segments;
    for (int n = 1; n <= 5; ++n) {
        PointCloud m(line, "segment");
        for (int j = 0; j <= 8; ++j)
            m.points.emplace_back(line, std::vector<double>{static_cast<double>(j) / (8.0 * n)});
        segments.push_back(std::move(m));
    }
    // the sampled grids of nested segments interleave; the pointwise nesting
    // tolerance is the coarsest grid spacing
    const DecreasingFamily family = make_decreasing_family(metric, segments, 0.125);
    const IntersectionProbe probe = nested_intersection_probe(metric, family, 1e-3);
    CHECK(probe.found);
    CHECK(probe.max_distance <= 1e-3);
    CHECK(std::abs(probe.point.coords[0]) <= 1e-9); // the common point is 0

    // nesting violations are rejected, not ignored
    std::vector<PointCloud> broken;
    broken.push_back(line_cloud({0.0, 1.0}));
    broken.push_back(line_cloud({5.0}));
    CHECK_THROWS_AS(make_decreasing_family(metric, broken, 1e-9), std::invalid_argument);

    // shifted boxes with a common corner
    const FNormMetric metric3 = gauge_metric(space3);
    Vector corner = zero_vector(space3);
    corner.coords[0] = 0.5;
    std::vector<PointCloud> boxes;
    for (int n = 1; n <= 4; ++n) {
        PointCloud m(space3, "box");
        const double side = 1.0 / static_cast<double>(n);
        for (int mask = 0; mask < 8; ++mask) {
            Vector v = corner;
            for (int i = 0; i < 3; ++i)
                if (mask & (1 << i)) v.coords[static_cast<std::size_t>(i)] += side;
            m.points.push_back(std::move(v));
        }
        boxes.push_back(std::move(m));
    }
    const DecreasingFamily boxfam = make_decreasing_family(metric3, boxes, 0.75);
    const IntersectionProbe box_probe = nested_intersection_probe(metric3, boxfam, 1e-3);
    CHECK(box_probe.found);
    for (std::size_t i = 0; i < box_probe.point.coords.size(); ++i)
        CHECK(std::abs(box_probe.point.coords[i] - corner.coords[i]) <= 1e-9);
}
