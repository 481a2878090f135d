#include "fmnc/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fmnc/convexity.hpp"
#include "fmnc/json_io.hpp"
#include "fmnc/suite.hpp"

namespace fmnc {

namespace {

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw ConfigError("expected a comma-separated list of numbers: " + csv);
    return out;
}

std::vector<int> parse_ints(const std::string& csv) {
    std::vector<int> out;
    for (double v : parse_doubles(csv)) out.push_back(static_cast<int>(v));
    return out;
}

void emit(const json& j, const std::string& out_path, const std::string& format,
          const SuiteReport* report) {
    std::string text;
    if (format == "csv") {
        if (!report) throw ConfigError("csv output is only available for suite reports");
        text = suite_report_to_csv(*report);
    } else {
        text = canonical_json(j);
    }
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

// margins over empty sample regions are -inf; JSON reports carry null there
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

std::size_t env_budget(std::size_t flag_value) {
    if (const char* env = std::getenv("FMNC_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return flag_value;
}

struct GlobalOpts {
    std::uint64_t seed = 42;
    std::size_t budget = kDefaultHullBudget;
    std::string out;
    std::string format = "json";
};

FNormMetric metric_from_flags(const SpacePtr& space, const std::string& mode,
                              const std::string& caps_csv, int n0, int depth, double cap_value) {
    std::vector<double> caps;
    if (caps_csv.empty())
        caps.assign(static_cast<std::size_t>(space->seminorm_count), 1.0);
    else
        caps = parse_doubles(caps_csv);
    return build_fnorm(space, metric_mode_from_string(mode), std::move(caps), n0, depth,
                       cap_value > 0.0 ? std::optional<double>(cap_value) : std::nullopt);
}

int run(int argc, const char* const* argv) {
    CLI::App app{"desk-scale toolkit for translation-invariant metrics, epsilon-net "
                 "covering bounds, and condensing fixed-point iteration"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--seed", g.seed, "sampling seed");
    app.add_option("--budget", g.budget, "combinatorial budget for hull grids");
    app.add_option("--out", g.out, "output file (stdout when omitted)");
    app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    // ---- space ---------------------------------------------------------
    auto* space_cmd = app.add_subcommand("space", "build and sample space descriptors");
    auto* space_make = space_cmd->add_subcommand("make", "validate and write a descriptor");
    std::string sm_kind = "c-grid", sm_blocks, sm_out;
    int sm_dim = 8, sm_m = 4;
    double sm_step = 0.25, sm_p = 0.5;
    space_make->add_option("--kind", sm_kind, "c-grid, seq-product, or lp-grid");
    space_make->add_option("--dim", sm_dim, "truncation dimension");
    space_make->add_option("--m", sm_m, "seminorm count");
    space_make->add_option("--step", sm_step, "grid step (c-grid, lp-grid)");
    space_make->add_option("--p", sm_p, "exponent (lp-grid)");
    space_make->add_option("--blocks", sm_blocks, "comma-separated block sizes (seq-product)");

    auto* space_sample = space_cmd->add_subcommand("sample", "sample a point cloud");
    std::string ss_space, ss_label = "cloud";
    int ss_n = 20;
    double ss_amp = 1.0;
    space_sample->add_option("--space", ss_space, "space descriptor file")->required();
    space_sample->add_option("--n", ss_n, "number of points");
    space_sample->add_option("--amp", ss_amp, "coordinate amplitude")->check(CLI::PositiveNumber);
    space_sample->add_option("--label", ss_label, "cloud label");

    // ---- metric --------------------------------------------------------
    auto* metric_cmd = app.add_subcommand("metric", "metric evaluation and audits");
    auto* metric_eval_cmd = metric_cmd->add_subcommand("eval", "evaluate d(x, y)");
    std::string me_space, me_mode = "gauge", me_x, me_y, me_caps;
    int me_n0 = 0, me_depth = 8;
    double me_cap = -1.0;
    metric_eval_cmd->add_option("--space", me_space)->required();
    metric_eval_cmd->add_option("--mode", me_mode, "standard, gauge, or dyadic");
    metric_eval_cmd->add_option("--x", me_x, "comma-separated coordinates")->required();
    metric_eval_cmd->add_option("--y", me_y, "comma-separated coordinates")->required();
    metric_eval_cmd->add_option("--caps", me_caps, "comma-separated caps (default all 1)");
    metric_eval_cmd->add_option("--n0", me_n0);
    metric_eval_cmd->add_option("--depth", me_depth);
    metric_eval_cmd->add_option("--cap-value", me_cap, "value outside the dyadic range");

    auto* metric_audit = metric_cmd->add_subcommand("audit", "scaling/additivity/axiom audits");
    std::string ma_space, ma_mode = "gauge", ma_caps;
    int ma_samples = 1000, ma_n0 = 0, ma_depth = 8;
    double ma_cap = -1.0;
    metric_audit->add_option("--space", ma_space)->required();
    metric_audit->add_option("--mode", ma_mode);
    metric_audit->add_option("--samples", ma_samples);
    metric_audit->add_option("--caps", ma_caps);
    metric_audit->add_option("--n0", ma_n0);
    metric_audit->add_option("--depth", ma_depth);
    metric_audit->add_option("--cap-value", ma_cap);

    // ---- convexity ------------------------------------------------------
    auto* conv_cmd = app.add_subcommand("convexity", "convex structure checks");
    auto* conv_check = conv_cmd->add_subcommand("check", "run one predicate family");
    std::string cc_which = "tcs", cc_space;
    int cc_samples = 1000;
    double cc_r = 0.1;
    conv_check->add_option("--which", cc_which, "tcs, tmcs, stability, P, or Q")
        ->check(CLI::IsMember({"tcs", "tmcs", "stability", "P", "Q"}));
    conv_check->add_option("--space", cc_space)->required();
    conv_check->add_option("--samples", cc_samples);
    conv_check->add_option("--r", cc_r, "neighborhood radius (stability)");

    // ---- alpha ----------------------------------------------------------
    auto* alpha_cmd = app.add_subcommand("alpha", "covering/packing bounds");
    auto* alpha_bounds_cmd = alpha_cmd->add_subcommand("bounds", "two-sided bounds for a cloud");
    std::string ab_cloud, ab_space, ab_grid = "1,0.5,0.25";
    std::size_t ab_budget = kUnlimitedNetBudget;
    alpha_bounds_cmd->add_option("--cloud", ab_cloud)->required();
    alpha_bounds_cmd->add_option("--space", ab_space, "optional cross-check descriptor");
    alpha_bounds_cmd->add_option("--eps-grid", ab_grid, "strictly decreasing comma list");
    alpha_bounds_cmd->add_option("--net-budget", ab_budget, "allowed net size");

    auto* alpha_transfer = alpha_cmd->add_subcommand("co-transfer", "net transfer to the hull");
    std::string at_cloud;
    double at_eta = 0.3, at_eps = 0.1;
    int at_resolution = 8;
    alpha_transfer->add_option("--cloud", at_cloud)->required();
    alpha_transfer->add_option("--eta", at_eta, "net radius for the cloud");
    alpha_transfer->add_option("--eps", at_eps, "extra radius for the hull cover");
    alpha_transfer->add_option("--resolution", at_resolution);

    // ---- fixpoint ---------------------------------------------------------
    auto* fix_cmd = app.add_subcommand("fixpoint", "condensing fixed-point tools");
    auto* fix_darbo = fix_cmd->add_subcommand("darbo", "iterate and certify a residual");
    std::string fd_op, fd_m0, fd_space, fd_grid = "";
    double fd_tol = 1e-6;
    int fd_max_iter = 60, fd_resolution = 2;
    fix_darbo->add_option("--op", fd_op, "operator JSON")->required();
    fix_darbo->add_option("--m0", fd_m0, "start cloud JSON")->required();
    fix_darbo->add_option("--space", fd_space, "optional cross-check descriptor");
    fix_darbo->add_option("--tol", fd_tol);
    fix_darbo->add_option("--max-iter", fd_max_iter);
    fix_darbo->add_option("--resolution", fd_resolution);
    fix_darbo->add_option("--eps-grid", fd_grid, "alpha grid (default geometric from the diameter)");

    auto* fix_sad = fix_cmd->add_subcommand("sadovskii", "interval condensing verdicts");
    std::string fs_op, fs_grid = "";
    std::vector<std::string> fs_trials;
    std::size_t fs_budget = 8;
    fix_sad->add_option("--op", fs_op)->required();
    fix_sad->add_option("--trials", fs_trials, "trial cloud JSON files")->required();
    fix_sad->add_option("--eps-grid", fs_grid);
    fix_sad->add_option("--net-budget", fs_budget);

    // ---- counterexample -----------------------------------------------------
    auto* counter = app.add_subcommand("counterexample", "lp-grid scaling reversal");
    double ce_p = 0.5, ce_lambda = 0.25, ce_step = 1.0;
    int ce_dim = 4;
    counter->add_option("--p", ce_p);
    counter->add_option("--lambda", ce_lambda);
    counter->add_option("--dim", ce_dim);
    counter->add_option("--step", ce_step);

    // ---- suite ---------------------------------------------------------------
    auto* suite_cmd = app.add_subcommand("suite", "run a named check suite");
    std::string su_name = "all", su_models;
    suite_cmd->add_option("name", su_name, "metric, convexity, mnc, hull-invariance, "
                                           "fixedpoint, counterexample, or all");
    suite_cmd->add_option("--models", su_models, "directory of space descriptors");

    // global flags may follow a subcommand: let unmatched arguments rise
    std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
        a->fallthrough();
        for (CLI::App* sub : a->get_subcommands([](CLI::App*) { return true; }))
            enable_fallthrough(sub);
    };
    enable_fallthrough(&app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2; // malformed invocation
    }
    g.budget = env_budget(g.budget);

    if (space_make->parsed()) {
        SpacePtr space;
        const SpaceKind kind = space_kind_from_string(sm_kind);
        if (kind == SpaceKind::CGrid) space = make_space_cgrid(sm_dim, sm_m, sm_step);
        else if (kind == SpaceKind::SeqProduct) space = make_space_seq_product(sm_dim, parse_ints(sm_blocks));
        else space = make_space_lp_grid(sm_dim, sm_p, sm_step);
        emit(space_to_json(*space), g.out, "json", nullptr);
        return 0;
    }
    if (space_sample->parsed()) {
        const SpacePtr space = space_from_json(load_json_file(ss_space));
        Rng rng(g.seed);
        emit(cloud_to_json(sample_cloud(space, rng, ss_n, ss_amp, ss_label)), g.out, "json", nullptr);
        return 0;
    }
    if (metric_eval_cmd->parsed()) {
        const SpacePtr space = space_from_json(load_json_file(me_space));
        const FNormMetric metric = metric_from_flags(space, me_mode, me_caps, me_n0, me_depth, me_cap);
        const Vector x(space, parse_doubles(me_x));
        const Vector y(space, parse_doubles(me_y));
        emit(json{{"mode", me_mode}, {"distance", metric_eval(metric, x, y)}}, g.out, "json", nullptr);
        return 0;
    }
    if (metric_audit->parsed()) {
        const SpacePtr space = space_from_json(load_json_file(ma_space));
        const FNormMetric metric = metric_from_flags(space, ma_mode, ma_caps, ma_n0, ma_depth, ma_cap);
        Rng rng(g.seed);
        const double amp = 0.45 / gauge_amp_factor(*space);
        std::vector<std::pair<Vector, Vector>> pairs;
        std::vector<std::array<Vector, 4>> quads;
        std::vector<std::array<Vector, 3>> triples;
        for (int i = 0; i < ma_samples; ++i) {
            pairs.emplace_back(sample_vector(space, rng, amp), sample_vector(space, rng, amp));
            quads.push_back({sample_vector(space, rng, 1.0), sample_vector(space, rng, 1.0),
                             sample_vector(space, rng, 1.0), sample_vector(space, rng, 1.0)});
            triples.push_back({sample_vector(space, rng, 1.0), sample_vector(space, rng, 1.0),
                               sample_vector(space, rng, 1.0)});
        }
        const std::vector<double> lambdas{0.0, 0.0625, 0.125, 0.25, 0.5, 0.7, 1.0};
        const ScalingAudit scaling = audit_scaling(metric, pairs, lambdas);
        const AdditiveAudit additive = audit_additive(metric, quads);
        const AxiomAudit axioms = audit_metric_axioms(metric, triples);
        emit(json{{"mode", ma_mode},
                  {"seed", g.seed},
                  {"samples", ma_samples},
                  {"depth", ma_depth},
                  {"n0", ma_n0},
                  {"margins",
                   json{{"scaling", finite_or_null(scaling.margin_interior)},
                        {"scaling_dyadic_lambda", finite_or_null(scaling.margin_interior_dyadic)},
                        {"additive", finite_or_null(additive.margin)},
                        {"triangle", finite_or_null(axioms.triangle_margin)},
                        {"symmetry", axioms.symmetry_margin},
                        {"identity", axioms.identity_margin},
                        {"translation", axioms.translation_margin}}},
                  {"region_breakdown",
                   json{{"interior_count", scaling.interior_count},
                        {"capped_count", scaling.capped_count},
                        {"capped_margin", finite_or_null(scaling.margin_capped)}}}},
             g.out, "json", nullptr);
        return 0;
    }
    if (conv_check->parsed()) {
        const SpacePtr space = space_from_json(load_json_file(cc_space));
        const FNormMetric metric = metric_from_flags(space, "gauge", "", 0, 8, -1.0);
        Rng rng(g.seed);
        json result{{"which", cc_which}, {"seed", g.seed}, {"samples", cc_samples}};
        if (cc_which == "tcs" || cc_which == "tmcs") {
            double margin = -1.0;
            for (int i = 0; i < cc_samples; ++i) {
                const Vector u = sample_vector(space, rng, 1.0);
                const Vector x = sample_vector(space, rng, 1.0);
                const Vector y = sample_vector(space, rng, 1.0);
                if (cc_which == "tcs") {
                    margin = std::max(margin, check_tcs(metric, u, x, y, rng.unit()));
                } else {
                    const Vector z = sample_vector(space, rng, 1.0);
                    const double a = rng.unit(), b = rng.unit() * (1.0 - a);
                    margin = std::max(margin, check_tmcs(metric, u, x, y, z,
                                                         BarycentricWeights::of({a, b, 1.0 - a - b})));
                }
            }
            result["margin"] = margin;
        } else if (cc_which == "P") {
            std::vector<PropertyPTuple> tuples;
            for (int i = 0; i < cc_samples; ++i)
                tuples.emplace_back(sample_vector(space, rng, 1.0), sample_vector(space, rng, 1.0),
                                    sample_vector(space, rng, 1.0), sample_vector(space, rng, 1.0),
                                    rng.unit());
            const PropertyPReport pr = check_property_p(metric, tuples);
            result["conventional_margin"] = pr.conventional_margin;
            result["printed_margin"] = pr.printed_margin;
        } else if (cc_which == "stability") {
            PointCloud gens = sample_cloud(space, rng, 3, 1.0, "generators");
            const int resolution = std::max(4, static_cast<int>(std::ceil(3.0 * 2.0 / (0.25 * cc_r))));
            const HullSample grid = hull_sample_full(gens, resolution, g.budget);
            const StabilityReport sr = check_stability(metric, grid, cc_r, cc_samples, 1e-9, rng);
            result["max_violation"] = sr.max_violation;
            result["grid_gap"] = sr.grid_gap;
            result["r"] = cc_r;
        } else { // Q
            PointCloud f = sample_cloud(space, rng, 3, 1.0, "F");
            const std::vector<double> eps_list{0.5, 0.25};
            const PropertyQReport qr = check_property_q(metric, f, eps_list, g.budget);
            json entries = json::array();
            for (const auto& e : qr.entries)
                entries.push_back(json{{"eps", e.eps},
                                       {"net_size", e.net_size},
                                       {"grid_points", e.grid_points},
                                       {"grid_gap", e.grid_gap}});
            result["entries"] = entries;
            result["pass"] = qr.pass;
        }
        emit(result, g.out, "json", nullptr);
        return 0;
    }
    if (alpha_bounds_cmd->parsed()) {
        const PointCloud cloud = cloud_from_json(load_json_file(ab_cloud));
        if (!ab_space.empty()) {
            const SpacePtr space = space_from_json(load_json_file(ab_space));
            if (!same_space(space, cloud.space))
                throw ConfigError("cloud space does not match --space descriptor");
        }
        const FNormMetric metric = metric_from_flags(cloud.space, "gauge", "", 0, 8, -1.0);
        const AlphaBounds bounds =
            alpha_bounds(metric, cloud, parse_doubles(ab_grid), ab_budget);
        emit(alpha_bounds_to_json(bounds), g.out, "json", nullptr);
        return 0;
    }
    if (alpha_transfer->parsed()) {
        const PointCloud cloud = cloud_from_json(load_json_file(at_cloud));
        const FNormMetric metric = metric_from_flags(cloud.space, "gauge", "", 0, 8, -1.0);
        const NetCertificate net = greedy_net(metric, cloud, at_eta);
        if (!net.complete) throw ConfigError("no complete net at the requested eta");
        const NetTransfer transfer =
            net_transfer_co(metric, cloud, net, at_eps, at_resolution, g.budget);
        emit(json{{"eta", transfer.eta},
                  {"eps", transfer.eps},
                  {"resolution", transfer.resolution},
                  {"grid_gap", transfer.grid_gap},
                  {"hinge_max", transfer.hinge_max},
                  {"co_sample_size", transfer.co_sample.size()},
                  {"certificate", net_certificate_to_json(transfer.certificate)}},
             g.out, "json", nullptr);
        return 0;
    }
    if (fix_darbo->parsed()) {
        const PointCloud m0 = cloud_from_json(load_json_file(fd_m0));
        if (!fd_space.empty()) {
            const SpacePtr space = space_from_json(load_json_file(fd_space));
            if (!same_space(space, m0.space))
                throw ConfigError("start cloud space does not match --space descriptor");
        }
        const OperatorSpec op = operator_from_json(load_json_file(fd_op), m0.space);
        const FNormMetric metric = metric_from_flags(m0.space, "gauge", "", 0, 8, -1.0);
        DarboOptions opt = darbo_options();
        opt.tol = fd_tol;
        opt.max_iter = fd_max_iter;
        opt.resolution = fd_resolution;
        opt.hull_budget = g.budget;
        if (!fd_grid.empty()) {
            opt.eps_grid = parse_doubles(fd_grid);
        } else {
            double diam = 0.0;
            for (std::size_t i = 0; i < m0.size(); ++i)
                for (std::size_t j = i + 1; j < m0.size(); ++j)
                    diam = std::max(diam, metric_eval(metric, m0.points[i], m0.points[j]));
            opt.eps_grid.clear();
            for (int k = 0; k <= 26; ++k)
                opt.eps_grid.push_back(std::max(diam, fd_tol) * std::ldexp(1.0, -k));
        }
        const DarboTrace trace = darbo_solve(op, metric, m0, opt);
        emit(darbo_trace_to_json(trace), g.out, "json", nullptr);
        return 0;
    }
    if (fix_sad->parsed()) {
        std::vector<PointCloud> trials;
        for (const std::string& path : fs_trials)
            trials.push_back(cloud_from_json(load_json_file(path)));
        if (trials.empty()) throw ConfigError("sadovskii needs at least one trial cloud");
        const OperatorSpec op = operator_from_json(load_json_file(fs_op), trials.front().space);
        const FNormMetric metric = metric_from_flags(trials.front().space, "gauge", "", 0, 8, -1.0);
        std::vector<double> grid =
            fs_grid.empty() ? std::vector<double>{1.0, 0.5, 0.25, 0.125, 0.0625}
                            : parse_doubles(fs_grid);
        const SadovskiiReport sr = sadovskii_check(op, metric, trials, grid, fs_budget);
        json out = json::array();
        for (const auto& t : sr.trials)
            out.push_back(json{{"verdict", t.skipped ? "skipped" : to_string(t.verdict)},
                               {"lower_source", t.lower_source},
                               {"upper_source", t.upper_source},
                               {"lower_image", t.lower_image},
                               {"upper_image", t.upper_image},
                               {"slack_ratio", t.slack_ratio}});
        emit(json{{"trials", out}}, g.out, "json", nullptr);
        return 0;
    }
    if (counter->parsed()) {
        const SpacePtr space = make_space_lp_grid(ce_dim, ce_p, ce_step);
        const Vector x = zero_vector(space);
        Vector y = zero_vector(space);
        y.coords[0] = 1.0;
        const LpScalingResult r = lp_counterexample(ce_p, ce_lambda, x, y);
        emit(json{{"p", r.p},
                  {"lambda", r.lambda},
                  {"d_xy", r.base},
                  {"lhs", r.lhs},
                  {"rhs_strong", r.rhs_strong},
                  {"violated", r.violated}},
             g.out, "json", nullptr);
        return 0;
    }
    if (suite_cmd->parsed()) {
        SuiteConfig config;
        config.seed = g.seed;
        config.hull_budget = g.budget;
        config.models_dir = su_models;
        const SuiteReport report = run_suite(su_name, config);
        emit(suite_report_to_json(report), g.out, g.format, &report);
        if (!report.all_passed()) {
            const CheckResult* failure = report.first_failure();
            std::cerr << "[FAIL] " << failure->id << " margin=" << failure->margin
                      << " tolerance=" << failure->tolerance << "\n"
                      << "witness: " << failure->details.dump() << "\n";
            return 1;
        }
        return 0;
    }
    throw ConfigError("no subcommand given");
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace fmnc
