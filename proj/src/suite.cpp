#include "fmnc/suite.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "fmnc/convexity.hpp"
#include "fmnc/json_io.hpp"
#include "fmnc/mnc.hpp"

namespace fmnc {

std::vector<SpacePtr> shipped_models() {
    return {
        make_space_cgrid(2, 2, 0.5),
        make_space_cgrid(8, 4, 0.25),
        make_space_cgrid(16, 4, 0.0625),
        make_space_cgrid(32, 8, 0.03125),
        make_space_seq_product(6, {2, 2, 2}),
        make_space_seq_product(12, {3, 3, 3, 3}),
    };
}

SpacePtr shipped_lp_space() { return make_space_lp_grid(4, 0.5, 1.0); }

FNormMetric shipped_metric(const SpacePtr& space, MetricMode mode) {
    std::vector<double> caps(static_cast<std::size_t>(space->seminorm_count), 1.0);
    return build_fnorm(space, mode, std::move(caps), 0, 8);
}

double gauge_amp_factor(const SpaceModel& space) {
    if (space.kind == SpaceKind::SeqProduct) {
        int largest = 1;
        for (int b : space.blocks) largest = std::max(largest, b);
        return static_cast<double>(largest);
    }
    return 1.0;
}

SpacePtr darbo_space() { return make_space_cgrid(16, 4, 0.0625); }

OperatorSpec darbo_operator(const SpacePtr& space) {
    Vector shift(space, std::vector<double>(static_cast<std::size_t>(space->dim), 0.2));
    return make_contraction_plus_smoothing(space, 0.5, std::move(shift), 0.2, 0.12);
}

PointCloud darbo_start_cloud(const OperatorSpec& op) {
    // cross-polytope around a warm start; its hull is an explicit l1 ball, so
    // invariance of the contraction is verifiable by convex membership
    const Vector center = plain_iteration(op, zero_vector(op.space), 50);
    const double radius = 0.75;
    PointCloud m0(op.space, "M0");
    m0.points.push_back(center);
    for (int i = 0; i < op.space->dim; ++i) {
        for (double sign : {1.0, -1.0}) {
            Vector v = center;
            v.coords[static_cast<std::size_t>(i)] += sign * radius;
            m0.points.push_back(std::move(v));
        }
    }
    return m0;
}

DarboOptions darbo_options() {
    DarboOptions opt;
    opt.tol = 1e-6;
    opt.max_iter = 60;
    opt.resolution = 2;
    opt.hull_budget = 200000;
    opt.cloud_budget = 64;
    opt.net_budget = 8;
    opt.transfer_eps_factor = 0.05;
    opt.invariance_tol = 1e-7;
    for (int k = 0; k <= 26; ++k) opt.eps_grid.push_back(1.5 * std::ldexp(1.0, -k));
    return opt;
}

std::vector<std::string> suite_names() {
    return {"metric", "convexity", "mnc", "hull-invariance", "fixedpoint", "counterexample", "all"};
}

bool is_suite_name(const std::string& name) {
    const auto names = suite_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

namespace {

// ---- seeded sample builders -------------------------------------------------

std::vector<std::array<Vector, 4>> sample_quadruples(const SpacePtr& s, Rng& rng, int n,
                                                     double amp) {
    std::vector<std::array<Vector, 4>> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out.push_back({sample_vector(s, rng, amp), sample_vector(s, rng, amp),
                       sample_vector(s, rng, amp), sample_vector(s, rng, amp)});
    return out;
}

std::vector<std::array<Vector, 3>> sample_triples(const SpacePtr& s, Rng& rng, int n, double amp) {
    std::vector<std::array<Vector, 3>> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out.push_back(
            {sample_vector(s, rng, amp), sample_vector(s, rng, amp), sample_vector(s, rng, amp)});
    return out;
}

std::vector<std::pair<Vector, Vector>> sample_pairs(const SpacePtr& s, Rng& rng, int n,
                                                    double amp) {
    std::vector<std::pair<Vector, Vector>> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out.emplace_back(sample_vector(s, rng, amp), sample_vector(s, rng, amp));
    return out;
}

double excess(double margin, double tolerance) { return margin - tolerance; }

// ---- metric suite ------------------------------------------------------------

void metric_checks(SuiteReport& report, const std::vector<SpacePtr>& models, Rng& rng,
                   int samples) {
    const std::vector<double> lambdas_dyadic{0.5, 0.25, 0.125, 0.0625};
    const std::vector<double> lambdas_mixed{0.0, 0.0625, 0.125, 0.3, 0.5, 0.7, 0.9, 1.0};

    double additive_margin = -1.0;
    double axiom_margin = -1.0;
    double gauge_scaling_margin = -1.0;
    double dyadic_scaling_margin = -1.0;
    double standard_scaling_margin = -1.0;
    double capped_scaling_margin = -1.0;
    double sandwich_excess = -1.0;
    double value_set_excess = -1.0;
    double member_disagreements = 0.0;

    for (const SpacePtr& space : models) {
        const double interior_amp = 0.45 / gauge_amp_factor(*space);
        for (MetricMode mode : {MetricMode::Standard, MetricMode::Gauge, MetricMode::Dyadic}) {
            const FNormMetric metric = shipped_metric(space, mode);

            const auto quads = sample_quadruples(space, rng, samples, 1.0);
            const AdditiveAudit additive = audit_additive(metric, quads);
            additive_margin = std::max(additive_margin, additive.margin);

            const auto triples = sample_triples(space, rng, samples, 1.0);
            const AxiomAudit axioms = audit_metric_axioms(metric, triples);
            axiom_margin = std::max({axiom_margin, axioms.symmetry_margin, axioms.identity_margin,
                                     axioms.triangle_margin, axioms.translation_margin});

            const auto interior = sample_pairs(space, rng, samples, interior_amp);
            const auto far = sample_pairs(space, rng, samples / 4, 4.0);
            const ScalingAudit scaling_in = audit_scaling(metric, interior, lambdas_mixed);
            const ScalingAudit scaling_far = audit_scaling(metric, far, lambdas_dyadic);
            if (mode == MetricMode::Gauge) {
                gauge_scaling_margin = std::max({gauge_scaling_margin, scaling_in.margin_interior,
                                                 scaling_far.margin_interior});
            } else if (mode == MetricMode::Dyadic) {
                dyadic_scaling_margin =
                    std::max(dyadic_scaling_margin, scaling_in.margin_interior_dyadic);
                capped_scaling_margin =
                    std::max({capped_scaling_margin, scaling_in.margin_capped,
                              scaling_far.margin_capped});
            } else {
                standard_scaling_margin =
                    std::max(standard_scaling_margin, scaling_in.margin_interior);
            }

            if (mode == MetricMode::Dyadic) {
                // pseudonorm sandwich and value-set membership on the interior
                const double quantum = std::ldexp(1.0, -metric.depth);
                for (const auto& [x, y] : interior) {
                    const Vector z = sub(y, x);
                    const double t = gauge_eval(metric, z); // n0 = 0
                    const double value = fnorm_eval(metric, z);
                    if (t <= max_dyadic_value(metric.depth)) {
                        sandwich_excess =
                            std::max({sandwich_excess, t - value, value - (t + quantum)});
                        const double cells = std::ldexp(value, metric.depth);
                        value_set_excess =
                            std::max(value_set_excess, std::abs(cells - std::round(cells)));
                    }
                }
                // scalar membership vs the box decomposition oracle
                if (space->kind == SpaceKind::CGrid) {
                    for (int trial = 0; trial < 64; ++trial) {
                        std::vector<int> h;
                        for (int n = 1; n <= metric.depth; ++n)
                            if (rng.unit() < 0.5) h.push_back(n);
                        if (h.empty()) h.push_back(1 + static_cast<int>(rng.below(8)));
                        const Vector x = sample_vector(space, rng, 1.0);
                        const bool scalar = member_vh(metric, h, x);
                        const VhDecomposition dec = decompose_in_vh(metric, h, x);
                        if (scalar != dec.feasible) member_disagreements += 1.0;
                        if (dec.feasible && dec.part_margin > 1e-12) member_disagreements += 1.0;
                    }
                }
            }
        }
    }

    report.checks.push_back(assert_check(
        "metric.shift_additivity", additive_margin, 1e-12,
        json{{"modes", {"standard", "gauge", "dyadic"}}, {"samples_per_case", samples}}));
    report.checks.push_back(assert_check("metric.axioms", axiom_margin, 1e-12,
                                         json{{"samples_per_case", samples}}));

    const double scaling_excess =
        std::max(excess(gauge_scaling_margin, 1e-12),
                 excess(dyadic_scaling_margin, std::ldexp(1.0, -8)));
    report.checks.push_back(assert_check(
        "metric.scaling_inequality", scaling_excess, 0.0,
        json{{"gauge_margin", gauge_scaling_margin},
             {"gauge_tolerance", 1e-12},
             {"dyadic_interior_margin", dyadic_scaling_margin},
             {"dyadic_tolerance", std::ldexp(1.0, -8)},
             {"standard_margin_reported", standard_scaling_margin},
             {"capped_margin_reported", capped_scaling_margin}}));

    const double pseudo_excess = std::max({sandwich_excess, value_set_excess - 1e-9,
                                           member_disagreements});
    report.checks.push_back(assert_check(
        "metric.dyadic_pseudonorm", pseudo_excess, 0.0,
        json{{"sandwich_excess", sandwich_excess},
             {"value_set_excess", value_set_excess},
             {"membership_disagreements", member_disagreements}}));
}

// ---- counterexample suite -----------------------------------------------------

void counterexample_checks(SuiteReport& report) {
    const SpacePtr base = shipped_lp_space();
    double eval_margin = -1.0;
    double flag_errors = 0.0;
    json matrix = json::array();
    for (double p : {0.25, 0.5, 0.75}) {
        const SpacePtr space = make_space_lp_grid(base->dim, p, base->step);
        const Vector x = zero_vector(space);
        Vector y = zero_vector(space);
        y.coords[0] = 1.0; // indicator step: d(x, y) = 1 * step
        for (double lambda : {0.1, 0.25, 0.5, 0.9}) {
            const LpScalingResult r = lp_counterexample(p, lambda, x, y);
            eval_margin = std::max(eval_margin,
                                   std::abs(r.lhs - std::pow(lambda, p) * r.base));
            if (!r.violated) flag_errors += 1.0;
            if (!(std::pow(lambda, p) - lambda > 0.0)) flag_errors += 1.0;
            matrix.push_back(json{{"p", p},
                                  {"lambda", lambda},
                                  {"lhs", r.lhs},
                                  {"rhs_strong", r.rhs_strong},
                                  {"violated", r.violated}});
        }
        // identity scaling: no violation
        const LpScalingResult unit = lp_counterexample(p, 1.0, x, y);
        if (unit.violated) flag_errors += 1.0;
    }
    {
        // p = 1 boundary: equality with the weak inequality
        const SpacePtr space = make_space_lp_grid(base->dim, 1.0, base->step);
        const Vector x = zero_vector(space);
        Vector y = zero_vector(space);
        y.coords[0] = 1.0;
        const LpScalingResult r = lp_counterexample(1.0, 0.5, x, y);
        eval_margin = std::max(eval_margin, std::abs(r.lhs - r.rhs_strong));
        if (r.violated) flag_errors += 1.0;
    }
    report.checks.push_back(assert_check(
        "counterexample.lp_scaling", std::max(excess(eval_margin, 1e-12), flag_errors), 0.0,
        json{{"eval_margin", eval_margin}, {"flag_errors", flag_errors}, {"matrix", matrix}}));
}

// ---- convexity suite -----------------------------------------------------------

void convexity_checks(SuiteReport& report, const std::vector<SpacePtr>& models, Rng& rng,
                      int samples, std::size_t hull_budget) {
    double tcs_margin = -1.0;
    double tmcs_margin = -1.0;
    double p_conventional = -1.0;
    double p_printed = -1.0;

    for (const SpacePtr& space : models) {
        const FNormMetric metric = shipped_metric(space, MetricMode::Gauge);
        for (int i = 0; i < samples; ++i) {
            const Vector u = sample_vector(space, rng, 1.0);
            const Vector x = sample_vector(space, rng, 1.0);
            const Vector y = sample_vector(space, rng, 1.0);
            const Vector z = sample_vector(space, rng, 1.0);
            const double t = rng.unit();
            tcs_margin = std::max(tcs_margin, check_tcs(metric, u, x, y, t));
            const double a = rng.unit(), b = rng.unit() * (1.0 - a);
            const auto w = BarycentricWeights::of({a, b, 1.0 - a - b});
            tmcs_margin = std::max(tmcs_margin, check_tmcs(metric, u, x, y, z, w));
        }
        std::vector<PropertyPTuple> tuples;
        tuples.reserve(static_cast<std::size_t>(samples));
        for (int i = 0; i < samples; ++i)
            tuples.emplace_back(sample_vector(space, rng, 1.0), sample_vector(space, rng, 1.0),
                                sample_vector(space, rng, 1.0), sample_vector(space, rng, 1.0),
                                rng.unit());
        const PropertyPReport pr = check_property_p(metric, tuples);
        p_conventional = std::max(p_conventional, pr.conventional_margin);
        p_printed = std::max(p_printed, pr.printed_margin);
    }

    report.checks.push_back(
        assert_check("convexity.takahashi", tcs_margin, 1e-9, json{{"samples", samples}}));
    report.checks.push_back(
        assert_check("convexity.talman", tmcs_margin, 1e-9, json{{"samples", samples}}));
    report.checks.push_back(assert_check(
        "convexity.property_p", p_conventional, 1e-9,
        json{{"printed_pairing_margin_reported", p_printed}, {"samples", samples}}));

    // stability on explicit convex grids in the plane model
    const SpacePtr plane = models.front();
    const FNormMetric metric = shipped_metric(plane, MetricMode::Gauge);
    double stability_margin = -1.0;
    json stability_detail = json::array();
    for (double r : {0.05, 0.1, 0.5}) {
        PointCloud segment(plane, "segment");
        segment.points.emplace_back(plane, std::vector<double>(static_cast<std::size_t>(plane->dim), 0.0));
        {
            std::vector<double> c(static_cast<std::size_t>(plane->dim), 0.0);
            c[0] = 1.0;
            segment.points.emplace_back(plane, std::move(c));
        }
        PointCloud triangle = segment;
        triangle.label = "triangle";
        {
            std::vector<double> c(static_cast<std::size_t>(plane->dim), 0.0);
            c[static_cast<std::size_t>(plane->dim > 1 ? 1 : 0)] = 1.0;
            triangle.points.emplace_back(plane, std::move(c));
        }
        for (const PointCloud& gens : {segment, triangle}) {
            const double diam = 1.0;
            const double n = static_cast<double>(gens.size());
            const int resolution =
                std::max(4, static_cast<int>(std::ceil(diam * n / (0.25 * r))));
            const HullSample grid = hull_sample_full(gens, resolution, hull_budget);
            const StabilityReport sr = check_stability(metric, grid, r, samples / 2, 1e-9, rng);
            stability_margin = std::max(stability_margin, sr.max_violation);
            stability_detail.push_back(json{{"r", r},
                                            {"set", gens.label},
                                            {"max_violation", sr.max_violation},
                                            {"grid_gap", sr.grid_gap}});
        }
    }
    report.checks.push_back(
        assert_check("convexity.stability", stability_margin, 1e-9, stability_detail));

    // property (Q): finite eps-nets of hulls of finite sets
    double q_failures = 0.0;
    json q_detail = json::array();
    {
        PointCloud two(plane, "pair");
        two.points.emplace_back(plane, std::vector<double>(static_cast<std::size_t>(plane->dim), 0.0));
        {
            std::vector<double> c(static_cast<std::size_t>(plane->dim), 0.0);
            c[0] = 2.0;
            two.points.emplace_back(plane, std::move(c));
        }
        const std::vector<double> eps_list{0.5, 0.25};
        const PropertyQReport qr = check_property_q(metric, two, eps_list, hull_budget);
        if (!qr.pass) q_failures += 1.0;
        for (const auto& e : qr.entries)
            q_detail.push_back(json{{"set", "pair"},
                                    {"eps", e.eps},
                                    {"net_size", e.net_size},
                                    {"grid_points", e.grid_points}});
        PointCloud three = sample_cloud(plane, rng, 3, 1.0, "triple");
        const std::vector<double> eps3{0.25};
        const PropertyQReport qr3 = check_property_q(metric, three, eps3, hull_budget);
        if (!qr3.pass) q_failures += 1.0;
        for (const auto& e : qr3.entries)
            q_detail.push_back(json{{"set", "triple"},
                                    {"eps", e.eps},
                                    {"net_size", e.net_size},
                                    {"grid_points", e.grid_points}});
    }
    report.checks.push_back(assert_check("convexity.property_q", q_failures, 0.0, q_detail));
}

// ---- mnc suite -------------------------------------------------------------------

std::vector<double> arithmetic_grid(double hi, double lo, double step) {
    std::vector<double> grid;
    // index-based so grid values carry one rounding each, not an accumulated
    // drift that lands comparisons on the wrong side of exact distances
    for (int k = 0; hi - step * k > lo - step / 2; ++k) grid.push_back(hi - step * k);
    return grid;
}

void mnc_checks(SuiteReport& report, Rng& rng, int cloud_count) {
    const SpacePtr space = make_space_cgrid(3, 3, 0.25);
    const FNormMetric metric = shipped_metric(space, MetricMode::Gauge);
    const std::vector<double> eps_grid = arithmetic_grid(1.0, 0.05, 0.05);

    // certificate soundness and packing/covering duality
    double soundness_failures = 0.0;
    for (int i = 0; i < cloud_count; ++i) {
        const PointCloud cloud = sample_cloud(space, rng, 12 + static_cast<int>(rng.below(12)), 1.0);
        for (double eps : {0.8, 0.4, 0.2}) {
            const NetCertificate net = greedy_net(metric, cloud, eps);
            if (!net.complete || !verify_net(metric, cloud, net)) soundness_failures += 1.0;
            const PackingWitness pack = packing_lower(metric, cloud, eps);
            if (!verify_packing(metric, cloud, pack)) soundness_failures += 1.0;
            if (net.centers.size() < pack.indices.size()) soundness_failures += 1.0;
        }
    }
    report.checks.push_back(assert_check("mnc.net_bounds", soundness_failures, 0.0,
                                         json{{"clouds", cloud_count}}));

    // proposition properties at bound level
    std::vector<PointCloud> clouds;
    for (int i = 0; i < cloud_count; ++i)
        clouds.push_back(sample_cloud(space, rng, 16 + static_cast<int>(rng.below(9)), 1.0));
    const auto items = check_mnc_properties(metric, clouds, eps_grid, 8, rng);
    double prop_excess = -1.0;
    json item_detail = json::array();
    for (const auto& item : items) {
        prop_excess = std::max(prop_excess, item.violation - item.tolerance);
        item_detail.push_back(json{{"item", item.item},
                                   {"violation", item.violation},
                                   {"tolerance", item.tolerance},
                                   {"pass", item.pass}});
    }

    // item (ix): nested intersection probes on three shipped families
    double probe_margin = -1.0;
    {
        auto ball_family = [&](const Vector& center) {
            std::vector<PointCloud> members;
            for (int n = 1; n <= 4; ++n) {
                PointCloud m(space, "ball-1/" + std::to_string(n));
                m.points.push_back(center);
                for (int i = 0; i < space->dim; ++i)
                    for (double sign : {1.0, -1.0}) {
                        Vector v = center;
                        v.coords[static_cast<std::size_t>(i)] += sign / static_cast<double>(n);
                        m.points.push_back(std::move(v));
                    }
                members.push_back(std::move(m));
            }
            return members;
        };
        const DecreasingFamily balls =
            make_decreasing_family(metric, ball_family(zero_vector(space)), 1.0);
        probe_margin = std::max(probe_margin,
                                nested_intersection_probe(metric, balls, 1e-3).max_distance);

        std::vector<PointCloud> segments;
        for (int n = 1; n <= 4; ++n) {
            PointCloud m(space, "segment-1/" + std::to_string(n));
            for (int j = 0; j <= 4; ++j) {
                Vector v = zero_vector(space);
                v.coords[0] = static_cast<double>(j) / (4.0 * n);
                m.points.push_back(std::move(v));
            }
            segments.push_back(std::move(m));
        }
        const DecreasingFamily segs = make_decreasing_family(metric, std::move(segments), 1.0);
        probe_margin =
            std::max(probe_margin, nested_intersection_probe(metric, segs, 1e-3).max_distance);

        Vector corner = zero_vector(space);
        corner.coords[0] = 0.5;
        std::vector<PointCloud> boxes;
        for (int n = 1; n <= 4; ++n) {
            PointCloud m(space, "box-1/" + std::to_string(n));
            const double side = 1.0 / static_cast<double>(n);
            for (int mask = 0; mask < 8; ++mask) {
                Vector v = corner;
                for (int i = 0; i < 3; ++i)
                    if (mask & (1 << i)) v.coords[static_cast<std::size_t>(i)] += side;
                m.points.push_back(std::move(v));
            }
            boxes.push_back(std::move(m));
        }
        const DecreasingFamily boxfam = make_decreasing_family(metric, std::move(boxes), 1.0);
        probe_margin =
            std::max(probe_margin, nested_intersection_probe(metric, boxfam, 1e-3).max_distance);
    }

    report.checks.push_back(assert_check(
        "mnc.proposition_properties", std::max(prop_excess, excess(probe_margin, 1e-3)), 0.0,
        json{{"items", item_detail}, {"intersection_probe_distance", probe_margin}}));
}

// ---- hull-invariance suite ------------------------------------------------------------

void transfer_checks(SuiteReport& report, Rng& rng, int cloud_count, std::size_t hull_budget) {
    const SpacePtr space = make_space_cgrid(3, 3, 0.25);
    const FNormMetric metric = shipped_metric(space, MetricMode::Gauge);
    const std::vector<double> eps_grid = arithmetic_grid(1.0, 0.05, 0.05);
    const std::size_t budget = 6;
    const double eps = 0.1;
    const int resolution = 4;

    double cert_excess = -1.0;
    double hinge_excess = -1.0;
    double lower_excess = -1.0;
    double upper_excess = -1.0;
    for (int i = 0; i < cloud_count; ++i) {
        const PointCloud cloud = sample_cloud(space, rng, 8 + static_cast<int>(rng.below(5)), 1.0);
        const AlphaBounds bounds = alpha_bounds(metric, cloud, eps_grid, budget);
        if (!bounds.upper_attained) continue;
        const double eta = bounds.upper;
        const NetTransfer transfer =
            net_transfer_co(metric, cloud, *bounds.upper_witness, eps, resolution, hull_budget);
        if (!transfer.certificate.complete) cert_excess = std::max(cert_excess, 1.0);
        for (const auto& a : transfer.certificate.assignments)
            cert_excess = std::max(cert_excess, a.distance - (eta + eps + 1e-9));
        hinge_excess = std::max(hinge_excess, transfer.hinge_max - (eta + 1e-9));

        const AlphaBounds co_bounds =
            alpha_bounds(metric, transfer.co_sample, eps_grid, budget);
        lower_excess = std::max(lower_excess, bounds.lower - co_bounds.lower);
        const double co_upper = co_bounds.upper_attained
                                    ? std::min(co_bounds.upper, transfer.certificate.eps)
                                    : transfer.certificate.eps;
        upper_excess = std::max(upper_excess, co_upper - (eta + eps + transfer.grid_gap));
    }
    report.checks.push_back(assert_check(
        "mnc.convex_hull_invariance",
        std::max({cert_excess, hinge_excess, lower_excess, upper_excess}), 0.0,
        json{{"certificate_excess", cert_excess},
             {"hinge_excess", hinge_excess},
             {"lower_bound_excess", lower_excess},
             {"upper_bound_excess", upper_excess},
             {"eps", eps},
             {"resolution", resolution}}));
}

// ---- fixedpoint suite -----------------------------------------------------------------

void fixedpoint_checks(SuiteReport& report, std::size_t hull_budget) {
    const SpacePtr plane = make_space_cgrid(2, 2, 0.5);
    const FNormMetric metric = shipped_metric(plane, MetricMode::Gauge);
    const std::size_t budget = 3;
    std::vector<double> eps_grid = arithmetic_grid(1.0, 0.01, 0.005);

    // trials: dyadic rectangle lattices; the flat shape keeps the
    // covering/packing slack ratio below 2 at this budget
    std::vector<PointCloud> trials;
    for (int t = 0; t < 3; ++t) {
        PointCloud lattice(plane, "lattice-" + std::to_string(t));
        for (int a = 0; a <= 16; ++a)
            for (int b = 0; b <= 2; ++b) {
                Vector v = zero_vector(plane);
                v.coords[0] = a / 16.0 + 0.25 * t;
                v.coords[1] = b / 8.0;
                lattice.points.push_back(std::move(v));
            }
        trials.push_back(std::move(lattice));
    }

    const OperatorSpec half = make_affine_contraction(plane, 0.5, zero_vector(plane));
    const OperatorSpec identity = make_affine_contraction(plane, 1.0, zero_vector(plane));
    Vector c = zero_vector(plane);
    c.coords[0] = 0.59375; // dyadic shift keeps lattice arithmetic exact
    const OperatorSpec translation = make_affine_contraction(plane, 1.0, c);
    const OperatorSpec constant = make_affine_contraction(plane, 0.0, c);

    const UpperCharEstimate est_half = estimate_upper_char(half, metric, trials, eps_grid, budget);
    const UpperCharEstimate est_const =
        estimate_upper_char(constant, metric, trials, eps_grid, budget);
    const UpperCharEstimate est_id =
        estimate_upper_char(identity, metric, trials, eps_grid, budget);

    double char_excess = -1.0;
    char_excess = std::max(char_excess, std::abs(est_half.gamma_hat - 0.5) - est_half.max_slack);
    char_excess = std::max(char_excess, est_const.gamma_hat - 0.2);
    char_excess = std::max(char_excess, 1.0 - est_id.gamma_hat - 1e-12);
    report.checks.push_back(assert_check(
        "fixedpoint.upper_characteristic", char_excess, 0.0,
        json{{"gamma_half", est_half.gamma_hat},
             {"slack_half", est_half.max_slack},
             {"gamma_constant", est_const.gamma_hat},
             {"gamma_identity", est_id.gamma_hat}}));

    double sadovskii_errors = 0.0;
    json verdicts = json::array();
    const auto classify = [&](const OperatorSpec& op, CondensingVerdict expected,
                              const std::string& name) {
        const SadovskiiReport sr = sadovskii_check(op, metric, trials, eps_grid, budget);
        for (const auto& trial : sr.trials) {
            if (trial.skipped) continue;
            if (expected == CondensingVerdict::Condensing && trial.slack_ratio >= 2.0) continue;
            if (trial.verdict != expected) sadovskii_errors += 1.0;
            verdicts.push_back(json{{"operator", name},
                                    {"verdict", to_string(trial.verdict)},
                                    {"slack_ratio", trial.slack_ratio}});
        }
    };
    classify(half, CondensingVerdict::Condensing, "0.5*id");
    classify(identity, CondensingVerdict::NotCondensing, "id");
    classify(translation, CondensingVerdict::NotCondensing, "translation");
    report.checks.push_back(
        assert_check("fixedpoint.sadovskii_condensing", sadovskii_errors, 0.0, verdicts));

    // Darbo-type iteration: low-dimensional affine case with the known fixed
    // point, then the smoothing operator at dim 16
    double darbo_excess = -1.0;
    json darbo_detail = json::object();
    {
        const SpacePtr s4 = make_space_cgrid(4, 2, 0.25);
        const FNormMetric m4 = shipped_metric(s4, MetricMode::Gauge);
        Vector shift(s4, std::vector<double>(4, 0.25));
        const OperatorSpec op = make_affine_contraction(s4, 0.5, shift);
        PointCloud box(s4, "box");
        for (int mask = 0; mask < 16; ++mask) {
            Vector v = zero_vector(s4);
            for (int i = 0; i < 4; ++i) v.coords[static_cast<std::size_t>(i)] = (mask & (1 << i)) ? 1.0 : 0.0;
            box.points.push_back(std::move(v));
        }
        DarboOptions opt = darbo_options();
        opt.hull_budget = hull_budget;
        const DarboTrace trace = darbo_solve(op, m4, box, opt);
        const Vector expected = Vector(s4, std::vector<double>(4, 0.5)); // 2 * shift
        darbo_excess = std::max(darbo_excess, trace.residual - opt.tol);
        darbo_excess =
            std::max(darbo_excess, metric_eval(m4, trace.x_star, expected) - 1e-5);
        darbo_detail["affine_residual"] = trace.residual;
    }
    {
        const SpacePtr s16 = darbo_space();
        const FNormMetric m16 = shipped_metric(s16, MetricMode::Gauge);
        const OperatorSpec op = darbo_operator(s16);
        const PointCloud m0 = darbo_start_cloud(op);
        DarboOptions opt = darbo_options();
        opt.hull_budget = hull_budget;
        const DarboTrace trace = darbo_solve(op, m16, m0, opt);
        darbo_excess = std::max(darbo_excess, trace.residual - opt.tol);
        double ratio_excess = -1.0;
        for (std::size_t i = 1; i < trace.iterations.size(); ++i) {
            const auto& prev = trace.iterations[i - 1];
            const auto& cur = trace.iterations[i];
            ratio_excess = std::max(
                ratio_excess, cur.alpha_upper - (0.55 * prev.alpha_upper + cur.grid_gap));
        }
        darbo_excess = std::max(darbo_excess, ratio_excess);
        const Vector oracle = plain_iteration(op, zero_vector(s16), 1000);
        const double oracle_gap = metric_eval(m16, trace.x_star, oracle);
        darbo_excess = std::max(darbo_excess, oracle_gap - 1e-5);
        darbo_detail["smoothing_residual"] = trace.residual;
        darbo_detail["alpha_ratio_excess"] = ratio_excess;
        darbo_detail["oracle_gap"] = oracle_gap;
        darbo_detail["iterations"] = trace.iterations.size();
        darbo_detail["lipschitz_bound"] = lipschitz_bound(op);
    }
    report.checks.push_back(
        assert_check("fixedpoint.darbo_iteration", darbo_excess, 0.0, darbo_detail));
}

std::vector<SpacePtr> resolve_models(const SuiteConfig& config) {
    if (config.models_dir.empty()) return shipped_models();
    namespace fs = std::filesystem;
    std::vector<SpacePtr> models;
    std::error_code ec;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(config.models_dir, ec))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    if (ec) throw ConfigError("cannot read models directory: " + config.models_dir);
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        try {
            const SpacePtr s = space_from_json(load_json_file(path.string()));
            if (s->locally_convex()) models.push_back(s);
        } catch (const std::exception& e) {
            throw ConfigError("invalid space descriptor " + path.string() + ": " + e.what());
        }
    }
    if (models.empty())
        throw ConfigError("no locally convex space descriptors found in " + config.models_dir);
    return models;
}

} // namespace

SuiteReport run_suite(const std::string& name, const SuiteConfig& config) {
    if (!is_suite_name(name)) throw ConfigError("unknown suite: " + name);
    SuiteReport report;
    report.suite = name;
    report.seed = config.seed;
    report.budget = config.hull_budget;
    const std::vector<SpacePtr> models = resolve_models(config);

    Rng rng(config.seed);
    const int samples = 1000;
    if (name == "metric" || name == "all") metric_checks(report, models, rng, samples);
    if (name == "counterexample" || name == "all") counterexample_checks(report);
    if (name == "convexity" || name == "all")
        convexity_checks(report, models, rng, samples, config.hull_budget);
    if (name == "mnc" || name == "all") mnc_checks(report, rng, 12);
    if (name == "hull-invariance" || name == "all")
        transfer_checks(report, rng, 12, config.hull_budget);
    if (name == "fixedpoint" || name == "all")
        fixedpoint_checks(report, config.hull_budget);
    return report;
}

} // namespace fmnc
