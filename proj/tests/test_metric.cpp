#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "fmnc/metric.hpp"
#include "fmnc/space.hpp"

using namespace fmnc;

namespace {

// Independent oracle: the least p_H with gauge(x) <= 2^n0 * p_H, by exhaustive
// enumeration of every nonempty H inside {1..depth}.
double enumerate_pseudonorm(const FNormMetric& f, const Vector& x, double cap) {
    const double g = gauge_eval(f, x);
    if (g == 0.0) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    const unsigned long long subsets = 1ull << f.depth;
    for (unsigned long long mask = 1; mask < subsets; ++mask) {
        double p_h = 0.0;
        for (int n = 1; n <= f.depth; ++n)
            if (mask & (1ull << (n - 1))) p_h += std::ldexp(1.0, -n);
        if (g <= std::ldexp(p_h, f.n0) && p_h < best) best = p_h;
    }
    return std::isfinite(best) ? best : cap;
}

FNormMetric unit_box_metric(const SpacePtr& space, MetricMode mode, int n0 = 0, int depth = 8,
                            std::optional<double> cap = std::nullopt) {
    return build_fnorm(space, mode, std::vector<double>(space->seminorm_count, 1.0), n0, depth, cap);
}

} // namespace

TEST_CASE("build_fnorm validates preconditions") {
    const SpacePtr cg = make_space_cgrid(4, 2, 0.25);
    const SpacePtr lp = make_space_lp_grid(4, 0.5, 1.0);
    CHECK_NOTHROW(unit_box_metric(cg, MetricMode::Gauge));
    CHECK_THROWS_AS(unit_box_metric(lp, MetricMode::Gauge), std::invalid_argument);
    CHECK_THROWS_AS(unit_box_metric(lp, MetricMode::Dyadic), std::invalid_argument);
    CHECK_THROWS_AS(build_fnorm(cg, MetricMode::Gauge, {1.0}), std::invalid_argument); // caps size
    CHECK_THROWS_AS(build_fnorm(cg, MetricMode::Gauge, {1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(build_fnorm(cg, MetricMode::Dyadic, {1.0, 1.0}, 3, 3), std::invalid_argument);
    CHECK(build_fnorm(cg, MetricMode::Dyadic, {1.0, 1.0}, 0, 8).cap_value == 1.0);
    CHECK(build_fnorm(cg, MetricMode::Dyadic, {1.0, 1.0}, 0, 4, 2.0).cap_value == 2.0);
}

TEST_CASE("standard metric pinned values") {
    // one-seminorm line: p(x) = |x|
    const SpacePtr line = make_space_cgrid(1, 1, 1.0);
    const Vector zero(line, {0.0});
    const Vector one(line, {1.0});
    const Vector two(line, {2.0});
    CHECK(standard_metric(line, zero, zero) == 0.0);
    CHECK(standard_metric(line, zero, one) == 0.25); // 0.5 * (1/2)

    // the baseline breaks the scaling inequality: d(0, 1) > 0.5 * d(0, 2)
    const double lhs = standard_metric(line, zero, one);
    const double rhs = 0.5 * standard_metric(line, zero, two);
    CHECK(lhs == 0.25);
    CHECK(rhs == doctest::Approx(0.5 * (0.5 * 2.0 / 3.0)));
    CHECK(lhs > rhs);

    CHECK_THROWS_AS(standard_metric(make_space_lp_grid(2, 0.5, 1.0), zero, zero),
                    std::invalid_argument);
}

TEST_CASE("gauge metric on the unit box") {
    const SpacePtr plane = make_space_cgrid(2, 2, 0.5);
    const FNormMetric f = unit_box_metric(plane, MetricMode::Gauge);
    const Vector a(plane, {0.0, 0.0});
    const Vector b(plane, {0.3, 0.0});
    CHECK(metric_eval(f, a, b) == 0.3);
    CHECK(fnorm_eval(f, zero_vector(plane)) == 0.0);

    // exact positive homogeneity for every lambda >= 0, not only the
    // inequality direction
    Rng rng(5);
    for (int i = 0; i < 300; ++i) {
        const Vector x = sample_vector(plane, rng, 1.0);
        const Vector y = sample_vector(plane, rng, 1.0);
        for (double lambda : {rng.unit(), 1.0, 2.0, rng.range(1.0, 8.0), 0.0}) {
            const double lhs = metric_eval(f, scale(lambda, x), scale(lambda, y));
            CHECK(std::abs(lhs - lambda * metric_eval(f, x, y)) <= 1e-12);
        }
    }
}

TEST_CASE("dyadic pseudonorm: pinned example and cross-checked enumeration") {
    const SpacePtr plane = make_space_cgrid(2, 2, 0.5);
    const FNormMetric f4 = unit_box_metric(plane, MetricMode::Dyadic, 0, 4, 2.0);

    // gauge 0.3 quantizes up to 5/16 = 1/4 + 1/16
    const Vector x(plane, {0.3, 0.0});
    CHECK(fnorm_eval(f4, x) == 0.3125);
    CHECK(metric_eval(f4, Vector(plane, {0.0, 0.0}), x) == 0.3125);

    // far point: exhaustive H search fails, cap value returned
    const Vector far(plane, {5.0, 0.0});
    CHECK(fnorm_eval(f4, far) == 2.0);
    CHECK(fnorm_capped(f4, far));
    CHECK(enumerate_pseudonorm(f4, far, f4.cap_value) == 2.0);

    // |0| = 0 by convention, not the smallest p_H
    CHECK(fnorm_eval(f4, zero_vector(plane)) == 0.0);

    // value set: all 15 subsets of {1..4} and the cap
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const Vector v = sample_vector(plane, rng, 2.0);
        const double value = fnorm_eval(f4, v);
        if (value == f4.cap_value || value == 0.0) continue;
        const double cells = std::ldexp(value, 4);
        CHECK(cells == std::round(cells));
        CHECK(value <= max_dyadic_value(4));
    }

    // exact agreement with the enumeration oracle at depth 8 and 12
    for (int depth : {8, 12}) {
        const FNormMetric f = unit_box_metric(plane, MetricMode::Dyadic, 0, depth);
        Rng sample_rng(900 + depth);
        for (int i = 0; i < 100; ++i) {
            const Vector v = sample_vector(plane, sample_rng, 0.7);
            CHECK(fnorm_eval(f, v) == enumerate_pseudonorm(f, v, f.cap_value));
        }
    }

    // n0 shifts the base neighborhood: V_{n0} = U
    const FNormMetric shifted = unit_box_metric(plane, MetricMode::Dyadic, 1, 8);
    const Vector w(plane, {0.5, 0.0});
    // gauge 0.5 scaled by 2^-1 quantizes to 1/4
    CHECK(fnorm_eval(shifted, w) == 0.25);
    CHECK(fnorm_eval(shifted, w) == enumerate_pseudonorm(shifted, w, shifted.cap_value));
}

TEST_CASE("dyadic pseudonorm sandwich on the validity region") {
    const SpacePtr plane = make_space_cgrid(2, 2, 0.5);
    const FNormMetric f = unit_box_metric(plane, MetricMode::Dyadic, 0, 8);
    Rng rng(23);
    const double quantum = std::ldexp(1.0, -8);
    for (int i = 0; i < 500; ++i) {
        const Vector v = sample_vector(plane, rng, 0.49);
        const double t = gauge_eval(f, v);
        if (t > max_dyadic_value(8)) continue;
        const double value = fnorm_eval(f, v);
        CHECK(value >= t);
        CHECK(value <= t + quantum);
    }
}

TEST_CASE("V_H membership: scalar route equals the decomposition oracle") {
    const SpacePtr plane = make_space_cgrid(2, 2, 0.5);
    const FNormMetric f = unit_box_metric(plane, MetricMode::Gauge, 0, 8);

    // pinned: H = {1, 2} has p_H = 0.75
    const std::vector<int> h{1, 2};
    CHECK(member_vh(f, h, Vector(plane, {0.5, 0.0})));
    CHECK_FALSE(member_vh(f, h, Vector(plane, {0.8, 0.0})));
    CHECK(member_vh(f, h, zero_vector(plane)));

    const VhDecomposition in = decompose_in_vh(f, h, Vector(plane, {0.5, 0.0}));
    CHECK(in.feasible);
    CHECK(in.parts.size() == 2);
    CHECK(in.reconstruction_error == 0.0);
    CHECK(in.part_margin <= 1e-12);
    const VhDecomposition out = decompose_in_vh(f, h, Vector(plane, {0.8, 0.0}));
    CHECK_FALSE(out.feasible);

    CHECK_THROWS_AS(member_vh(f, std::vector<int>{}, zero_vector(plane)), std::invalid_argument);
    CHECK_THROWS_AS(member_vh(f, std::vector<int>{9}, zero_vector(plane)), std::out_of_range);
    CHECK_THROWS_AS(member_vh(f, std::vector<int>{1, 1}, zero_vector(plane)), std::invalid_argument);

    // randomized agreement, including nonuniform caps and n0 = 1
    const FNormMetric skew =
        build_fnorm(plane, MetricMode::Gauge, {1.0, 0.5}, 1, 10);
    Rng rng(31);
    for (int i = 0; i < 400; ++i) {
        std::vector<int> hh;
        for (int n = 1; n <= 10; ++n)
            if (rng.unit() < 0.4) hh.push_back(n);
        if (hh.empty()) hh.push_back(1 + static_cast<int>(rng.below(10)));
        const Vector v = sample_vector(plane, rng, 1.5);
        const VhDecomposition dec = decompose_in_vh(skew, hh, v);
        CHECK(member_vh(skew, hh, v) == dec.feasible);
        if (dec.feasible) {
            CHECK(dec.reconstruction_error <= 1e-12);
            CHECK(dec.part_margin <= 1e-12);
            Vector total = zero_vector(plane);
            for (const Vector& part : dec.parts) total = add(total, part);
            for (std::size_t c = 0; c < total.coords.size(); ++c)
                CHECK(std::abs(total.coords[c] - v.coords[c]) <= 1e-12);
        }
    }
}

TEST_CASE("scaling audit: exact in gauge mode, quantized in dyadic mode") {
    const SpacePtr plane = make_space_cgrid(2, 2, 0.5);
    Rng rng(41);
    std::vector<std::pair<Vector, Vector>> interior;
    for (int i = 0; i < 400; ++i)
        interior.emplace_back(sample_vector(plane, rng, 0.45), sample_vector(plane, rng, 0.45));
    const std::vector<double> lambdas{0.0, 0.0625, 0.125, 0.25, 0.5, 0.3, 0.9, 1.0};

    const ScalingAudit gauge =
        audit_scaling(unit_box_metric(plane, MetricMode::Gauge), interior, lambdas);
    CHECK(gauge.margin_interior <= 1e-12);
    CHECK(gauge.capped_count == 0);

    const FNormMetric dyadic = unit_box_metric(plane, MetricMode::Dyadic, 0, 8);
    const ScalingAudit quantized = audit_scaling(dyadic, interior, lambdas);
    CHECK(quantized.margin_interior_dyadic <= std::ldexp(1.0, -8));
    // generic lambdas stay within the quantum too (modulo rounding noise)
    CHECK(quantized.margin_interior <= std::ldexp(1.0, -8) + 1e-15);

    // capped region: margins are recorded, not asserted away
    std::vector<std::pair<Vector, Vector>> capped;
    capped.emplace_back(zero_vector(plane), Vector(plane, {3.0, 0.0}));
    const ScalingAudit far = audit_scaling(dyadic, capped, std::vector<double>{0.5});
    CHECK(far.capped_count == 1);
    CHECK(far.margin_capped > 0.0); // cap - 0.5 * cap
    CHECK(far.worst_capped.has_value());

    // the baseline violates the inequality on interior points
    const ScalingAudit standard =
        audit_scaling(unit_box_metric(plane, MetricMode::Standard), interior, lambdas);
    CHECK(standard.margin_interior > 1e-6);
}

TEST_CASE("additive shift audit holds in every mode") {
    const SpacePtr plane = make_space_cgrid(2, 2, 0.5);
    Rng rng(53);
    std::vector<std::array<Vector, 4>> quads;
    for (int i = 0; i < 1000; ++i)
        quads.push_back({sample_vector(plane, rng, 1.0), sample_vector(plane, rng, 1.0),
                         sample_vector(plane, rng, 1.0), sample_vector(plane, rng, 1.0)});
    // degenerate quadruple reduces to translation invariance
    quads.push_back({quads[0][0], quads[0][1], quads[0][0], quads[0][3]});

    for (MetricMode mode : {MetricMode::Standard, MetricMode::Gauge, MetricMode::Dyadic}) {
        const AdditiveAudit audit = audit_additive(unit_box_metric(plane, mode), quads);
        CAPTURE(to_string(mode));
        CHECK(audit.margin <= 1e-12);
    }

    // a cap above sup p_H genuinely breaks subadditivity; the default must not
    const FNormMetric wide = unit_box_metric(plane, MetricMode::Dyadic, 0, 8, 2.0);
    std::vector<std::array<Vector, 4>> probe{{zero_vector(plane), zero_vector(plane),
                                              Vector(plane, {0.6, 0.0}), Vector(plane, {0.6, 0.0})}};
    CHECK(audit_additive(wide, probe).margin > 0.5);
}

TEST_CASE("metric axioms audit") {
    const SpacePtr sp = make_space_seq_product(6, {2, 2, 2});
    Rng rng(67);
    std::vector<std::array<Vector, 3>> triples;
    for (int i = 0; i < 500; ++i)
        triples.push_back({sample_vector(sp, rng, 1.0), sample_vector(sp, rng, 1.0),
                           sample_vector(sp, rng, 1.0)});
    for (MetricMode mode : {MetricMode::Standard, MetricMode::Gauge, MetricMode::Dyadic}) {
        const AxiomAudit audit = audit_metric_axioms(unit_box_metric(sp, mode), triples);
        CAPTURE(to_string(mode));
        CHECK(audit.symmetry_margin <= 1e-12);
        CHECK(audit.identity_margin <= 1e-12);
        CHECK(audit.triangle_margin <= 1e-12);
        CHECK(audit.translation_margin <= 1e-12);
    }
}

TEST_CASE("lp counterexample") {
    const SpacePtr lp = make_space_lp_grid(4, 0.5, 1.0);
    const Vector x = zero_vector(lp);
    Vector y = zero_vector(lp);
    y.coords[0] = 1.0; // indicator step, d(x, y) = 1

    const LpScalingResult r = lp_counterexample(0.5, 0.25, x, y);
    CHECK(r.base == 1.0);
    CHECK(r.lhs == 0.5);
    CHECK(r.rhs_strong == 0.25);
    CHECK(r.violated);

    const LpScalingResult unit = lp_counterexample(0.5, 1.0, x, y);
    CHECK(unit.lhs == unit.rhs_strong);
    CHECK_FALSE(unit.violated);

    const SpacePtr banach = make_space_lp_grid(4, 1.0, 1.0);
    const Vector bx = zero_vector(banach);
    Vector by = zero_vector(banach);
    by.coords[0] = 1.0;
    const LpScalingResult boundary = lp_counterexample(1.0, 0.5, bx, by);
    CHECK(boundary.lhs == boundary.rhs_strong);
    CHECK_FALSE(boundary.violated);

    CHECK_THROWS_AS(lp_counterexample(1.5, 0.5, bx, by), std::invalid_argument);
    CHECK_THROWS_AS(lp_counterexample(0.5, 0.5, bx, by), std::invalid_argument); // p mismatch

    // exact power scaling for general step vectors
    Rng rng(71);
    for (int i = 0; i < 200; ++i) {
        Vector u = zero_vector(lp);
        for (double& c : u.coords) c = rng.unit() < 0.5 ? 0.0 : 1.0;
        if (seminorm_eval(u, 1) == 0.0) u.coords[0] = 1.0;
        const double lambda = 0.1 + 0.8 * rng.unit();
        const LpScalingResult rr = lp_counterexample(0.5, lambda, x, u);
        CHECK(std::abs(rr.lhs - std::pow(lambda, 0.5) * rr.base) <= 1e-12);
        CHECK(rr.violated);
    }
}
