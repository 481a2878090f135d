// Acceptance gate: every criterion below runs at its pinned tolerance and
// prints one PASS/FAIL line. The binary exits nonzero if any criterion fails.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "fmnc/convexity.hpp"
#include "fmnc/feasibility.hpp"
#include "fmnc/fixedpoint.hpp"
#include "fmnc/json_io.hpp"
#include "fmnc/mnc.hpp"
#include "fmnc/suite.hpp"

using namespace fmnc;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void criterion(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %2d %-34s %s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

FNormMetric gauge_of(const SpacePtr& s) { return shipped_metric(s, MetricMode::Gauge); }

std::vector<double> arithmetic_grid(double hi, double lo, double step) {
    std::vector<double> grid;
    for (int k = 0; hi - step * k > lo - step / 2; ++k) grid.push_back(hi - step * k);
    return grid;
}

// --- criterion 1: additive shift inequality ---------------------------------

void criterion_additive() {
    Timer timer;
    Rng rng(101);
    double margin = -1.0;
    for (const SpacePtr& space : shipped_models()) {
        for (MetricMode mode : {MetricMode::Standard, MetricMode::Gauge, MetricMode::Dyadic}) {
            const FNormMetric metric = shipped_metric(space, mode);
            std::vector<std::array<Vector, 4>> quads;
            quads.reserve(1000);
            for (int i = 0; i < 1000; ++i)
                quads.push_back({sample_vector(space, rng, 1.0), sample_vector(space, rng, 1.0),
                                 sample_vector(space, rng, 1.0), sample_vector(space, rng, 1.0)});
            margin = std::max(margin, audit_additive(metric, quads).margin);
        }
    }
    const double elapsed = timer.seconds();
    criterion(1, "additive shift inequality", margin <= 1e-12 && elapsed < 5.0,
              "margin=" + fmt(margin) + " tol=1e-12 elapsed=" + fmt(elapsed) + "s");
}

// --- criterion 2: scaling inequality ------------------------------------------

void criterion_scaling() {
    Timer timer;
    Rng rng(202);
    const std::vector<double> mixed{0.0, 0.0625, 0.125, 0.25, 0.3, 0.5, 0.7, 0.9, 1.0};
    const std::vector<double> dyadic_lambdas{0.5, 0.25, 0.125, 0.0625}; // 2^-k, k <= 4
    double gauge_margin = -1.0;
    double dyadic_margin = -1.0;
    double capped_margin = -std::numeric_limits<double>::infinity();
    const double valid = max_dyadic_value(8); // 1 - 2^-8
    for (const SpacePtr& space : shipped_models()) {
        const double amp = 0.45 / gauge_amp_factor(*space);
        std::vector<std::pair<Vector, Vector>> interior, far;
        for (int i = 0; i < 1000; ++i)
            interior.emplace_back(sample_vector(space, rng, amp), sample_vector(space, rng, amp));
        for (int i = 0; i < 250; ++i)
            far.emplace_back(sample_vector(space, rng, 4.0), sample_vector(space, rng, 4.0));

        const FNormMetric gauge = gauge_of(space);
        gauge_margin = std::max(gauge_margin,
                                audit_scaling(gauge, interior, mixed).margin_interior);

        const FNormMetric dyadic = shipped_metric(space, MetricMode::Dyadic);
        std::vector<std::pair<Vector, Vector>> validated;
        for (const auto& pair : interior)
            if (gauge_eval(dyadic, sub(pair.second, pair.first)) <= valid)
                validated.push_back(pair);
        const ScalingAudit in = audit_scaling(dyadic, validated, dyadic_lambdas);
        dyadic_margin = std::max(dyadic_margin, in.margin_interior_dyadic);
        const ScalingAudit out = audit_scaling(dyadic, far, dyadic_lambdas);
        capped_margin = std::max(capped_margin, out.margin_capped); // reported, not asserted
    }
    const double elapsed = timer.seconds();
    criterion(2, "scaling inequality",
              gauge_margin <= 1e-12 && dyadic_margin <= std::ldexp(1.0, -8) && elapsed < 10.0,
              "gauge=" + fmt(gauge_margin) + " dyadic=" + fmt(dyadic_margin) +
                  " (tol=2^-8) cap-region=" + fmt(capped_margin) +
                  " [reported] elapsed=" + fmt(elapsed) + "s");
}

// --- criterion 3: pseudonorm sandwich + exhaustive enumeration ------------------

void criterion_sandwich() {
    Timer timer;
    Rng rng(303);
    bool sandwich_ok = true;
    double worst_gap = 0.0;
    const SpacePtr plane = shipped_models()[0];
    {
        const FNormMetric f = shipped_metric(plane, MetricMode::Dyadic); // depth 8
        const double quantum = std::ldexp(1.0, -8);
        for (int i = 0; i < 1000; ++i) {
            const Vector v = sample_vector(plane, rng, 0.49);
            const double t = gauge_eval(f, v);
            if (t > max_dyadic_value(8)) continue;
            const double value = fnorm_eval(f, v);
            if (!(value >= t && value <= t + quantum)) sandwich_ok = false;
            worst_gap = std::max(worst_gap, value - t);
        }
    }
    // exhaustive cross-check at depth 16 on 100 points: exact agreement
    bool enumeration_ok = true;
    {
        const FNormMetric f = build_fnorm(plane, MetricMode::Dyadic, {1.0, 1.0}, 0, 16);
        std::vector<double> p_h(1u << 16, 0.0);
        for (unsigned mask = 1; mask < (1u << 16); ++mask)
            p_h[mask] = p_h[mask & (mask - 1)] + std::ldexp(1.0, -(std::countr_zero(mask) + 1));
        for (int i = 0; i < 100; ++i) {
            const Vector v = sample_vector(plane, rng, 0.6);
            const double g = gauge_eval(f, v);
            double best = std::numeric_limits<double>::infinity();
            for (unsigned mask = 1; mask < (1u << 16); ++mask)
                if (g <= p_h[mask] && p_h[mask] < best) best = p_h[mask];
            const double expect = g == 0.0 ? 0.0
                                  : std::isfinite(best) ? best
                                                        : f.cap_value;
            if (fnorm_eval(f, v) != expect) enumeration_ok = false;
        }
    }
    criterion(3, "dyadic pseudonorm sandwich", sandwich_ok && enumeration_ok,
              "max value-gauge gap=" + fmt(worst_gap) + " (quantum 2^-8), depth-16 enumeration " +
                  (enumeration_ok ? "agrees exactly" : "DISAGREES") +
                  " elapsed=" + fmt(timer.seconds()) + "s");
}

// --- criterion 4: lp scaling reversal ---------------------------------------------

void criterion_lp() {
    Rng rng(404);
    double eval_margin = 0.0;
    bool flags_ok = true;
    for (double p : {0.25, 0.5, 0.75}) {
        const SpacePtr space = make_space_lp_grid(6, p, 0.5);
        for (double lambda : {0.1, 0.25, 0.5, 0.9}) {
            for (int trial = 0; trial < 50; ++trial) {
                Vector x = zero_vector(space), y = zero_vector(space);
                for (double& c : y.coords) c = rng.unit() < 0.5 ? 0.0 : 1.0; // step function
                if (lp_metric(x, y) == 0.0) y.coords[0] = 1.0;
                const LpScalingResult r = lp_counterexample(p, lambda, x, y);
                eval_margin = std::max(eval_margin,
                                       std::abs(r.lhs - std::pow(lambda, p) * r.base));
                if (!r.violated) flags_ok = false;
                if (!(std::pow(lambda, p) - lambda > 0.0)) flags_ok = false;
            }
        }
    }
    // p = 1 boundary: equality, weak inequality only
    bool boundary_ok = true;
    {
        const SpacePtr space = make_space_lp_grid(6, 1.0, 0.5);
        Vector x = zero_vector(space), y = zero_vector(space);
        y.coords[0] = 1.0;
        for (double lambda : {0.1, 0.25, 0.5, 0.9}) {
            const LpScalingResult r = lp_counterexample(1.0, lambda, x, y);
            if (r.violated || std::abs(r.lhs - r.rhs_strong) > 1e-12) boundary_ok = false;
        }
    }
    criterion(4, "lp-grid scaling reversal", eval_margin <= 1e-12 && flags_ok && boundary_ok,
              "|d(Lx,Ly) - L^p d| <= " + fmt(eval_margin) +
                  ", reversal holds on the (p,lambda) matrix, p=1 gives equality");
}

// --- criterion 5: convex structures ------------------------------------------------

void criterion_convexity() {
    Timer timer;
    Rng rng(505);
    const SpacePtr plane = shipped_models()[0];
    const FNormMetric metric = gauge_of(plane);

    double tcs = -1.0, tmcs = -1.0, prop_p = -1.0;
    for (int i = 0; i < 1000; ++i) {
        const Vector u = sample_vector(plane, rng, 1.0);
        const Vector x = sample_vector(plane, rng, 1.0);
        const Vector y = sample_vector(plane, rng, 1.0);
        const Vector z = sample_vector(plane, rng, 1.0);
        tcs = std::max(tcs, check_tcs(metric, u, x, y, rng.unit()));
        const double a = rng.unit(), b = rng.unit() * (1.0 - a);
        tmcs = std::max(tmcs, check_tmcs(metric, u, x, y, z,
                                         BarycentricWeights::of({a, b, 1.0 - a - b})));
    }
    std::vector<PropertyPTuple> tuples;
    for (int i = 0; i < 1000; ++i)
        tuples.emplace_back(sample_vector(plane, rng, 1.0), sample_vector(plane, rng, 1.0),
                            sample_vector(plane, rng, 1.0), sample_vector(plane, rng, 1.0),
                            rng.unit());
    const PropertyPReport pr = check_property_p(metric, tuples);
    prop_p = pr.conventional_margin;

    double stability = -1.0;
    PointCloud segment(plane, "segment");
    segment.points.emplace_back(plane, std::vector<double>{0.0, 0.0});
    segment.points.emplace_back(plane, std::vector<double>{1.0, 0.0});
    for (double r : {0.05, 0.1, 0.5}) {
        const int resolution = std::max(4, static_cast<int>(std::ceil(2.0 / (0.25 * r))));
        const HullSample grid = hull_sample_full(segment, resolution, 200000);
        stability =
            std::max(stability, check_stability(metric, grid, r, 1000, 1e-9, rng).max_violation);
    }

    const bool pass = tcs <= 1e-9 && tmcs <= 1e-9 && prop_p <= 1e-9 && stability <= 1e-9;
    criterion(5, "TCS/TmCS/(P)/stability", pass,
              "tcs=" + fmt(tcs) + " tmcs=" + fmt(tmcs) + " P-conv=" + fmt(prop_p) +
                  " (printed=" + fmt(pr.printed_margin) + " reported) stability=" +
                  fmt(stability) + " elapsed=" + fmt(timer.seconds()) + "s");
}

// --- criterion 6: hull invariance at bound level -------------------------------------

std::size_t brute_min_net(const FNormMetric& metric, const PointCloud& m, double eps) {
    const std::size_t n = m.size();
    for (std::size_t size = 1; size <= n; ++size) {
        std::vector<bool> pick(n, false);
        std::fill(pick.end() - static_cast<std::ptrdiff_t>(size), pick.end(), true);
        do {
            bool all = true;
            for (const Vector& p : m.points) {
                bool covered = false;
                for (std::size_t c = 0; c < n && !covered; ++c)
                    if (pick[c] && metric_eval(metric, p, m.points[c]) <= eps) covered = true;
                if (!covered) {
                    all = false;
                    break;
                }
            }
            if (all) return size;
        } while (std::next_permutation(pick.begin(), pick.end()));
    }
    return n;
}

void criterion_hull_invariance() {
    Timer timer;
    Rng rng(606);
    // grid top = the amp-1 diameter bound, so a one-center net always exists
    const std::vector<double> grid = arithmetic_grid(2.0, 0.05, 0.05);
    const double eps = 0.1;
    bool pass = true;
    std::string why;
    int transfers = 0, brute_checked = 0;
    for (int i = 0; i < 50 && pass; ++i) {
        const SpacePtr space = (i % 2 == 0) ? make_space_cgrid(3, 3, 0.25)
                                            : make_space_cgrid(6, 3, 0.25);
        const FNormMetric metric = gauge_of(space);
        const int points = 8 + static_cast<int>(rng.below(33)); // up to 40
        const PointCloud cloud = sample_cloud(space, rng, points, 1.0);
        const AlphaBounds bounds = alpha_bounds(metric, cloud, grid, 6);
        if (!bounds.upper_attained) { why = "no budgeted net for a trial cloud"; pass = false; break; }
        const double eta = bounds.upper;
        const int resolution = points <= 12 ? 4 : 2;
        const NetTransfer t =
            net_transfer_co(metric, cloud, *bounds.upper_witness, eps, resolution, 500000);
        ++transfers;
        if (!t.certificate.complete) { why = "transfer certificate incomplete"; pass = false; }
        if (t.hinge_max > eta + 1e-9) { why = "hinge inequality violated"; pass = false; }
        const AlphaBounds co = alpha_bounds(metric, t.co_sample, grid, 6);
        if (bounds.lower > co.lower) { why = "lower bound not monotone under the hull"; pass = false; }
        const double co_upper =
            co.upper_attained ? std::min(co.upper, t.certificate.eps) : t.certificate.eps;
        if (co_upper > eta + eps + t.grid_gap + 1e-9) { why = "upper bound transfer failed"; pass = false; }

        if (points <= 12) {
            ++brute_checked;
            for (double e : {grid[4], eta}) {
                const std::size_t min_net = brute_min_net(metric, cloud, e);
                const PackingWitness pack = packing_lower(metric, cloud, e);
                const NetCertificate greedy = greedy_net(metric, cloud, e);
                if (pack.indices.size() > min_net || min_net > greedy.centers.size()) {
                    why = "bound directions contradict the brute-force net size";
                    pass = false;
                }
            }
        }
    }
    const double elapsed = timer.seconds();
    criterion(6, "hull invariance (net transfer)", pass && elapsed < 60.0,
              (pass ? "50 clouds, " + std::to_string(brute_checked) +
                          " brute-force confirmations"
                    : why) +
                  " elapsed=" + fmt(elapsed) + "s");
}

// --- criterion 7: covering-bound calculus -------------------------------------------

void criterion_properties() {
    Timer timer;
    Rng rng(707);
    const std::vector<double> grid = arithmetic_grid(1.0, 0.05, 0.05);
    bool pass = true;
    std::string detail;
    {
        const SpacePtr space = make_space_cgrid(3, 3, 0.25);
        const FNormMetric metric = gauge_of(space);
        std::vector<PointCloud> clouds;
        for (int i = 0; i < 50; ++i)
            clouds.push_back(sample_cloud(space, rng, 14 + static_cast<int>(rng.below(11)), 1.0));
        for (const MncPropertyItem& item : check_mnc_properties(metric, clouds, grid, 8, rng)) {
            if (!item.pass) {
                pass = false;
                detail += " item(" + item.item + ") violation=" + fmt(item.violation);
            }
        }
    }
    // item (ix): nested probes on the three shipped families
    double probe = -1.0;
    {
        const SpacePtr space = make_space_cgrid(3, 3, 0.25);
        const FNormMetric metric = gauge_of(space);
        auto run_probe = [&](std::vector<PointCloud> members, double nest_tol) {
            const DecreasingFamily family =
                make_decreasing_family(metric, std::move(members), nest_tol);
            probe = std::max(probe, nested_intersection_probe(metric, family, 1e-3).max_distance);
        };
        std::vector<PointCloud> balls, segments, boxes;
        for (int n = 1; n <= 5; ++n) {
            PointCloud ball(space, "ball");
            ball.points.push_back(zero_vector(space));
            for (int i = 0; i < 3; ++i)
                for (double sign : {1.0, -1.0}) {
                    Vector v = zero_vector(space);
                    v.coords[static_cast<std::size_t>(i)] = sign / n;
                    ball.points.push_back(std::move(v));
                }
            balls.push_back(std::move(ball));

            PointCloud seg(space, "segment");
            for (int j = 0; j <= 8; ++j) {
                Vector v = zero_vector(space);
                v.coords[0] = static_cast<double>(j) / (8.0 * n);
                seg.points.push_back(std::move(v));
            }
            segments.push_back(std::move(seg));

            PointCloud box(space, "box");
            for (int mask = 0; mask < 8; ++mask) {
                Vector v = zero_vector(space);
                v.coords[0] = 0.5;
                for (int i = 0; i < 3; ++i)
                    if (mask & (1 << i)) v.coords[static_cast<std::size_t>(i)] += 1.0 / n;
                box.points.push_back(std::move(v));
            }
            boxes.push_back(std::move(box));
        }
        run_probe(std::move(balls), 0.75);
        run_probe(std::move(segments), 0.125);
        run_probe(std::move(boxes), 0.75);
    }
    if (probe > 1e-3) pass = false;
    criterion(7, "covering-bound calculus (i..ix)", pass,
              (detail.empty() ? "items i-viii pass at 2x grid step, probe distance=" + fmt(probe)
                              : detail) +
                  " elapsed=" + fmt(timer.seconds()) + "s");
}

// --- criterion 8: condensing iteration ------------------------------------------------

void criterion_darbo() {
    Timer timer;
    const SpacePtr space = darbo_space();
    const FNormMetric metric = gauge_of(space);
    const OperatorSpec op = darbo_operator(space);
    const PointCloud m0 = darbo_start_cloud(op);
    const DarboOptions opt = darbo_options(); // tol 1e-6, max_iter 60

    const DarboTrace trace = darbo_solve(op, metric, m0, opt);
    double ratio_excess = -1.0;
    for (std::size_t i = 1; i < trace.iterations.size(); ++i)
        ratio_excess = std::max(ratio_excess,
                                trace.iterations[i].alpha_upper -
                                    (0.55 * trace.iterations[i - 1].alpha_upper +
                                     trace.iterations[i].grid_gap));
    const Vector oracle = plain_iteration(op, zero_vector(space), 1000);
    const double oracle_gap = metric_eval(metric, trace.x_star, oracle);
    const double elapsed = timer.seconds();
    const bool pass = trace.converged && trace.residual < 1e-6 && ratio_excess <= 0.0 &&
                      oracle_gap <= 1e-5 && elapsed < 30.0;
    criterion(8, "condensing fixed-point iteration", pass,
              "residual=" + fmt(trace.residual) + " alpha-ratio-excess=" + fmt(ratio_excess) +
                  " oracle-gap=" + fmt(oracle_gap) + " iters=" +
                  std::to_string(trace.iterations.size()) + " elapsed=" + fmt(elapsed) + "s");
}

// --- criterion 9: upper characteristic + condensing verdicts ----------------------------

void criterion_upper_char() {
    const SpacePtr plane = shipped_models()[0];
    const FNormMetric metric = gauge_of(plane);
    const std::size_t budget = 3;
    std::vector<double> grid;
    for (int k = 0; 1.0 - 0.005 * k > 0.01 - 1e-12; ++k) grid.push_back(1.0 - 0.005 * k);

    std::vector<PointCloud> trials;
    for (int t = 0; t < 3; ++t) {
        PointCloud lattice(plane, "lattice");
        for (int a = 0; a <= 16; ++a)
            for (int b = 0; b <= 2; ++b)
                lattice.points.emplace_back(
                    plane, std::vector<double>{a / 16.0 + 0.25 * t, b / 8.0});
        trials.push_back(std::move(lattice));
    }

    const OperatorSpec half = make_affine_contraction(plane, 0.5, zero_vector(plane));
    const OperatorSpec identity = make_affine_contraction(plane, 1.0, zero_vector(plane));
    const OperatorSpec translation =
        make_affine_contraction(plane, 1.0, Vector(plane, {0.59375, 0.0}));

    const UpperCharEstimate est = estimate_upper_char(half, metric, trials, grid, budget);
    const bool gamma_ok = est.gamma_hat >= 0.5 - est.max_slack &&
                          est.gamma_hat <= 0.5 + est.max_slack;

    bool verdicts_ok = true;
    for (const auto& t : sadovskii_check(half, metric, trials, grid, budget).trials)
        if (!t.skipped && t.slack_ratio < 2.0 && t.verdict != CondensingVerdict::Condensing)
            verdicts_ok = false;
    for (const auto& t : sadovskii_check(identity, metric, trials, grid, budget).trials)
        if (!t.skipped && t.verdict != CondensingVerdict::NotCondensing) verdicts_ok = false;
    for (const auto& t : sadovskii_check(translation, metric, trials, grid, budget).trials)
        if (!t.skipped && t.verdict != CondensingVerdict::NotCondensing) verdicts_ok = false;

    criterion(9, "upper characteristic + verdicts", gamma_ok && verdicts_ok,
              "gamma=" + fmt(est.gamma_hat) + " in [0.5-s, 0.5+s], s=" + fmt(est.max_slack) +
                  "; verdicts {0.5id: condensing, id: not, shift: not}");
}

// --- criterion 10: determinism -----------------------------------------------------------

void criterion_determinism() {
    Timer timer;
    SuiteConfig config;
    config.seed = 42;
    const std::string first = canonical_json(suite_report_to_json(run_suite("all", config)));
    const double one_run = timer.seconds();
    const std::string second = canonical_json(suite_report_to_json(run_suite("all", config)));
    const bool identical = first == second;
    const bool passed = first.find("\"verdict\":\"pass\"") != std::string::npos;
    criterion(10, "suite determinism", identical && passed && one_run < 180.0,
              std::string(identical ? "byte-identical reports" : "REPORTS DIFFER") +
                  ", suite verdict " + (passed ? "pass" : "fail") + ", one run " +
                  fmt(one_run) + "s (< 180s)");
}

} // namespace

int main() {
    std::printf("acceptance: %zu shipped models, seed-fixed sampling\n",
                shipped_models().size());
    criterion_additive();
    criterion_scaling();
    criterion_sandwich();
    criterion_lp();
    criterion_convexity();
    criterion_hull_invariance();
    criterion_properties();
    criterion_darbo();
    criterion_upper_char();
    criterion_determinism();
    if (g_failures > 0) {
        std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("acceptance: all criteria passed\n");
    return 0;
}
