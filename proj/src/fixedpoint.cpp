#include "fmnc/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fmnc/convexity.hpp"
#include "fmnc/feasibility.hpp"

namespace fmnc {

std::string to_string(OperatorKind kind) {
    switch (kind) {
    case OperatorKind::AffineContraction: return "affine-contraction";
    case OperatorKind::ContractionPlusSmoothing: return "contraction-plus-smoothing";
    case OperatorKind::CustomTable: return "custom-table";
    }
    throw std::logic_error("unknown operator kind");
}

OperatorKind operator_kind_from_string(const std::string& name) {
    if (name == "affine-contraction") return OperatorKind::AffineContraction;
    if (name == "contraction-plus-smoothing") return OperatorKind::ContractionPlusSmoothing;
    if (name == "custom-table") return OperatorKind::CustomTable;
    throw std::invalid_argument("unknown operator kind: " + name);
}

OperatorSpec make_affine_contraction(SpacePtr space, double lambda, Vector shift) {
    if (!(lambda >= 0.0) || lambda > 1.0)
        throw std::invalid_argument("contraction factor must be in [0, 1]");
    if (!same_space(space, shift.space)) throw std::invalid_argument("space mismatch");
    OperatorSpec op;
    op.kind = OperatorKind::AffineContraction;
    op.space = std::move(space);
    op.lambda = lambda;
    op.shift = std::move(shift);
    return op;
}

OperatorSpec make_contraction_plus_smoothing(SpacePtr space, double lambda, Vector shift,
                                             double kernel_width, double strength) {
    if (!(lambda >= 0.0) || lambda > 1.0)
        throw std::invalid_argument("contraction factor must be in [0, 1]");
    if (!(kernel_width > 0.0)) throw std::invalid_argument("kernel width must be positive");
    if (!(strength >= 0.0)) throw std::invalid_argument("strength must be nonnegative");
    if (!same_space(space, shift.space)) throw std::invalid_argument("space mismatch");
    OperatorSpec op;
    op.kind = OperatorKind::ContractionPlusSmoothing;
    op.space = std::move(space);
    op.lambda = lambda;
    op.shift = std::move(shift);
    op.kernel_width = kernel_width;
    op.strength = strength;
    return op;
}

OperatorSpec make_custom_table(SpacePtr space, std::vector<std::pair<Vector, Vector>> table) {
    for (const auto& [in, out] : table) {
        if (!same_space(space, in.space) || !same_space(space, out.space))
            throw std::invalid_argument("space mismatch");
    }
    OperatorSpec op;
    op.kind = OperatorKind::CustomTable;
    op.space = std::move(space);
    op.table = std::move(table);
    return op;
}

namespace {

double kernel_entry(const SpaceModel& space, double width, int i, int j) {
    const double u = static_cast<double>(i - j) * space.step / width;
    return std::exp(-u * u) * space.step;
}

Vector smoothing_apply(const OperatorSpec& op, const Vector& x) {
    const int dim = op.space->dim;
    std::vector<double> out(static_cast<std::size_t>(dim), 0.0);
    for (int i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (int j = 0; j < dim; ++j)
            acc += kernel_entry(*op.space, op.kernel_width, i, j) *
                   x.coords[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = op.strength * acc;
    }
    return Vector(op.space, std::move(out));
}

} // namespace

Vector apply_operator(const OperatorSpec& op, const Vector& x) {
    if (!same_space(op.space, x.space)) throw std::invalid_argument("space mismatch");
    switch (op.kind) {
    case OperatorKind::AffineContraction:
        return add(scale(op.lambda, x), op.shift);
    case OperatorKind::ContractionPlusSmoothing:
        return add(add(scale(op.lambda, x), smoothing_apply(op, x)), op.shift);
    case OperatorKind::CustomTable: {
        for (const auto& [in, out] : op.table) {
            bool match = true;
            for (std::size_t i = 0; i < in.coords.size(); ++i)
                if (std::abs(in.coords[i] - x.coords[i]) > 1e-12) {
                    match = false;
                    break;
                }
            if (match) return out;
        }
        throw std::invalid_argument("point not found in operator table");
    }
    }
    throw std::logic_error("unknown operator kind");
}

PointCloud apply_operator(const OperatorSpec& op, const PointCloud& m) {
    PointCloud out(m.space, "F(" + m.label + ")");
    out.points.reserve(m.size());
    for (const Vector& p : m.points) out.points.push_back(apply_operator(op, p));
    return out;
}

double smoothing_gain(const OperatorSpec& op) {
    if (op.kind != OperatorKind::ContractionPlusSmoothing) return 0.0;
    double worst = 0.0;
    for (int i = 0; i < op.space->dim; ++i) {
        double row = 0.0;
        for (int j = 0; j < op.space->dim; ++j)
            row += kernel_entry(*op.space, op.kernel_width, i, j);
        worst = std::max(worst, row);
    }
    return op.strength * worst;
}

double lipschitz_bound(const OperatorSpec& op) {
    if (op.kind == OperatorKind::CustomTable)
        throw std::invalid_argument("no closed-form Lipschitz bound for table operators");
    return op.lambda + smoothing_gain(op);
}

UpperCharEstimate estimate_upper_char(const OperatorSpec& op, const FNormMetric& metric,
                                      const std::vector<PointCloud>& trial_sets,
                                      const std::vector<double>& eps_grid,
                                      std::size_t net_budget) {
    UpperCharEstimate est;
    est.gamma_hat = 0.0;
    est.max_slack = 0.0;
    for (std::size_t i = 0; i < trial_sets.size(); ++i) {
        UpperCharEstimate::Trial trial;
        const AlphaBounds source = alpha_bounds(metric, trial_sets[i], eps_grid, net_budget);
        trial.lower_source = source.lower;
        trial.upper_source = source.upper_attained ? source.upper : -1.0;
        if (source.lower <= 0.0) {
            trial.skipped = true;
            trial.note = "trial lower bound is zero at the grid resolution";
            est.trials.push_back(trial);
            continue;
        }
        const AlphaBounds image =
            alpha_bounds(metric, apply_operator(op, trial_sets[i]), eps_grid, net_budget);
        if (!image.upper_attained) {
            trial.skipped = true;
            trial.note = "image admits no net within the budget on this grid";
            est.trials.push_back(trial);
            continue;
        }
        trial.upper_image = image.upper;
        trial.ratio = image.upper / source.lower;
        if (trial.ratio > est.gamma_hat) {
            est.gamma_hat = trial.ratio;
            est.witness = static_cast<int>(i);
        }
        if (source.upper_attained)
            est.max_slack = std::max(est.max_slack, source.upper / source.lower - 1.0);
        est.trials.push_back(trial);
    }
    return est;
}

std::string to_string(CondensingVerdict v) {
    switch (v) {
    case CondensingVerdict::Condensing: return "condensing";
    case CondensingVerdict::NotCondensing: return "not-condensing";
    case CondensingVerdict::Inconclusive: return "inconclusive";
    }
    throw std::logic_error("unknown verdict");
}

SadovskiiReport sadovskii_check(const OperatorSpec& op, const FNormMetric& metric,
                                const std::vector<PointCloud>& trial_sets,
                                const std::vector<double>& eps_grid, std::size_t net_budget) {
    SadovskiiReport report;
    for (const PointCloud& m : trial_sets) {
        SadovskiiReport::Trial trial;
        const AlphaBounds source = alpha_bounds(metric, m, eps_grid, net_budget);
        const AlphaBounds image = alpha_bounds(metric, apply_operator(op, m), eps_grid, net_budget);
        trial.lower_source = source.lower;
        trial.upper_source = source.upper_attained ? source.upper : -1.0;
        trial.lower_image = image.lower;
        trial.upper_image = image.upper_attained ? image.upper : -1.0;
        if (source.lower <= 0.0 || !source.upper_attained || !image.upper_attained) {
            trial.skipped = true;
            report.trials.push_back(trial);
            continue;
        }
        trial.slack_ratio = source.upper / source.lower;
        if (image.upper < source.lower) {
            trial.verdict = CondensingVerdict::Condensing;
        } else if (image.lower >= source.lower && image.upper >= source.upper) {
            trial.verdict = CondensingVerdict::NotCondensing;
        } else {
            trial.verdict = CondensingVerdict::Inconclusive;
        }
        report.trials.push_back(trial);
    }
    return report;
}

namespace {

struct Thinned {
    PointCloud cloud;
    double radius = 0.0; // covering radius of the kept points over the input
};

Thinned farthest_point_thin(const FNormMetric& metric, const PointCloud& m, std::size_t target) {
    Thinned out;
    out.cloud = PointCloud(m.space, m.label + ":thin");
    if (m.size() <= target || m.empty()) {
        out.cloud.points = m.points;
        return out;
    }
    std::vector<double> dist(m.size(), std::numeric_limits<double>::infinity());
    std::size_t next = 0; // start from the first point for determinism
    for (std::size_t k = 0; k < target; ++k) {
        out.cloud.points.push_back(m.points[next]);
        for (std::size_t i = 0; i < m.size(); ++i)
            dist[i] = std::min(dist[i], metric_eval(metric, m.points[i], out.cloud.points.back()));
        next = 0;
        for (std::size_t i = 1; i < m.size(); ++i)
            if (dist[i] > dist[next]) next = i;
    }
    out.radius = dist[next];
    return out;
}

double cloud_diameter(const FNormMetric& metric, const PointCloud& m) {
    double diam = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            diam = std::max(diam, metric_eval(metric, m.points[i], m.points[j]));
    return diam;
}

// Complete net over m built on explicitly given centers.
NetCertificate assign_to_centers(const FNormMetric& metric, const PointCloud& m,
                                 PointCloud centers) {
    NetCertificate cert;
    cert.centers = std::move(centers);
    cert.assignments.assign(m.size(), {});
    double radius = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < cert.centers.size(); ++c) {
            const double d = metric_eval(metric, m.points[i], cert.centers.points[c]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        cert.assignments[i] = {best, best_d};
        radius = std::max(radius, best_d);
    }
    cert.eps = radius;
    cert.complete = true;
    return cert;
}

} // namespace

Vector plain_iteration(const OperatorSpec& op, Vector x, int steps) {
    for (int i = 0; i < steps; ++i) x = apply_operator(op, x);
    return x;
}

DarboTrace darbo_solve(const OperatorSpec& op, const FNormMetric& metric, const PointCloud& m0,
                       const DarboOptions& options) {
    if (metric.mode != MetricMode::Gauge)
        throw std::invalid_argument("darbo_solve requires the gauge metric");
    if (!same_space(op.space, m0.space)) throw std::invalid_argument("space mismatch");
    if (m0.empty()) throw std::invalid_argument("M0 must be nonempty");
    if (options.eps_grid.empty()) throw std::invalid_argument("options need an eps grid");

    DarboTrace trace;

    // invariance of the sample: F(M0) must stay in co(M0)
    {
        const PointCloud image = apply_operator(op, m0);
        trace.invariance_margin = 0.0;
        for (const Vector& q : image.points) {
            const ConvexMembership member =
                convex_membership(m0.points, q, options.invariance_tol);
            const double margin =
                member.inside ? member.residual : distance_to_cloud(metric, q, m0);
            trace.invariance_margin = std::max(trace.invariance_margin, margin);
            if (!member.inside)
                throw std::runtime_error("invariance check failed: F(M0) leaves co(M0) by " +
                                         std::to_string(margin));
        }
        trace.invariance_ok = true;
    }

    PointCloud current = m0;
    current.label = "M0";

    // initial certificate: the budgeted greedy net, or a single-center cover
    const AlphaBounds b0 = alpha_bounds(metric, current, options.eps_grid, options.net_budget);
    NetCertificate cert;
    if (b0.upper_attained) {
        cert = *b0.upper_witness;
    } else {
        PointCloud single(current.space, "net");
        single.points.push_back(current.points[0]);
        cert = assign_to_centers(metric, current, std::move(single));
    }
    {
        DarboTrace::Iteration it;
        it.n = 0;
        it.cloud_size = current.size();
        it.alpha_lower = b0.lower;
        it.alpha_upper_greedy = b0.upper_attained ? b0.upper : cert.eps;
        it.alpha_upper_transfer = cert.eps;
        it.alpha_upper = std::min(it.alpha_upper_greedy, it.alpha_upper_transfer);
        it.diameter = cloud_diameter(metric, current);
        trace.iterations.push_back(it);
    }

    // center count the hull budget can absorb at this resolution
    const std::size_t center_cap = [&] {
        std::size_t k = std::max<std::size_t>(2 * options.net_budget, 16);
        while (k > 1 && hull_grid_size(static_cast<int>(k), options.resolution) >
                            static_cast<double>(options.hull_budget))
            --k;
        return k;
    }();
    if (cert.centers.size() > center_cap) {
        const Thinned thin_centers = farthest_point_thin(metric, cert.centers, center_cap);
        cert = assign_to_centers(metric, current, thin_centers.cloud);
    }

    for (int n = 1; n <= options.max_iter; ++n) {
        if (trace.iterations.back().diameter < options.tol) break;

        const PointCloud image = apply_operator(op, current);
        const HullSample hull = hull_sample_full(image, options.resolution, options.hull_budget);
        const Thinned thin = farthest_point_thin(metric, hull.cloud, options.cloud_budget);

        // transferred upper bound: map the previous centers through F, hull
        // them at the same resolution, and cover that small grid tightly; a
        // hull point of the image aggregates into that grid within Lip * eps_n.
        double extra = options.transfer_eps_factor * std::max(cert.eps, options.tol);
        const PointCloud mapped_centers = apply_operator(op, cert.centers);
        const HullSample mapped_hull =
            hull_sample_full(mapped_centers, options.resolution, options.hull_budget);
        NetCertificate k_net = greedy_net(metric, mapped_hull.cloud, extra);
        while (k_net.centers.size() > center_cap) {
            // widen the net radius until the transferred net stays hull-safe;
            // the widening is recorded in grid_gap below
            extra *= 2.0;
            k_net = greedy_net(metric, mapped_hull.cloud, extra);
        }
        NetCertificate transfer_cert = assign_to_centers(metric, thin.cloud, k_net.centers);

        const AlphaBounds bn = alpha_bounds(metric, thin.cloud, options.eps_grid, options.net_budget);

        DarboTrace::Iteration it;
        it.n = n;
        it.cloud_size = thin.cloud.size();
        it.alpha_lower = bn.lower;
        it.alpha_upper_transfer = transfer_cert.eps;
        it.alpha_upper_greedy = bn.upper_attained ? bn.upper : transfer_cert.eps;
        it.alpha_upper = std::min(it.alpha_upper_greedy, it.alpha_upper_transfer);
        it.thin_radius = thin.radius;
        it.grid_gap = extra + thin.radius;
        it.diameter = cloud_diameter(metric, image);

        // nesting: each new point should stay in co(M_n) (exact membership
        // when the simplex finds a witness; cloud distance as the fallback
        // over-estimate)
        double nest = 0.0;
        for (const Vector& q : thin.cloud.points) {
            const ConvexMembership member = convex_membership(current.points, q, 1e-9);
            if (!member.inside)
                nest = std::max(nest, distance_to_cloud(metric, q, current));
        }
        it.nesting_violation = nest;
        trace.iterations.push_back(it);

        // adopt the smaller certificate for the next transfer step, keeping
        // its center count hull-safe (re-measured radius stays honest)
        if (bn.upper_attained && bn.upper <= transfer_cert.eps)
            cert = *bn.upper_witness;
        else
            cert = std::move(transfer_cert);
        if (cert.centers.size() > center_cap) {
            const Thinned thin_centers = farthest_point_thin(metric, cert.centers, center_cap);
            cert = assign_to_centers(metric, thin.cloud, thin_centers.cloud);
        }
        current = thin.cloud;
        current.label = "M" + std::to_string(n);
    }

    // extraction: plain iteration from the barycenter of the final cloud
    Vector x = barycenter(current);
    trace.converged = false;
    const int plain_cap = std::max(options.max_iter, 1000);
    for (int s = 0; s < plain_cap; ++s) {
        const Vector fx = apply_operator(op, x);
        const double r = metric_eval(metric, x, fx);
        if (r < options.tol) {
            trace.converged = true;
            trace.plain_steps = s;
            break;
        }
        x = fx;
        trace.plain_steps = s + 1;
    }
    trace.x_star = x;
    trace.residual = metric_eval(metric, x, apply_operator(op, x)); // recomputed at emit
    return trace;
}

} // namespace fmnc
