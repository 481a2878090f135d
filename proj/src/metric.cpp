#include "fmnc/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fmnc {

std::string to_string(MetricMode mode) {
    switch (mode) {
    case MetricMode::Standard: return "standard";
    case MetricMode::Gauge: return "gauge";
    case MetricMode::Dyadic: return "dyadic";
    }
    throw std::logic_error("unknown metric mode");
}

MetricMode metric_mode_from_string(const std::string& name) {
    if (name == "standard") return MetricMode::Standard;
    if (name == "gauge") return MetricMode::Gauge;
    if (name == "dyadic") return MetricMode::Dyadic;
    throw std::invalid_argument("unknown metric mode: " + name);
}

double max_dyadic_value(int depth) {
    return 1.0 - std::ldexp(1.0, -depth);
}

FNormMetric build_fnorm(SpacePtr space, MetricMode mode, std::vector<double> caps,
                        int n0, int depth, std::optional<double> cap_value) {
    if (!space) throw std::invalid_argument("build_fnorm requires a space");
    if (!space->locally_convex())
        throw std::invalid_argument("metrics over a seminorm family require a locally convex "
                                    "space (lp-grid with p < 1 has no convex neighborhood base; "
                                    "use lp_metric there)");
    if (static_cast<int>(caps.size()) != space->seminorm_count)
        throw std::invalid_argument("caps size must equal the seminorm count");
    for (double c : caps)
        if (!(c > 0.0)) throw std::invalid_argument("caps must be positive");
    if (n0 < 0) throw std::invalid_argument("n0 must be nonnegative");
    if (depth < n0 + 1) throw std::invalid_argument("depth must be at least n0 + 1");
    if (depth > 40) throw std::invalid_argument("depth above 40 exceeds exact dyadic range");
    FNormMetric f;
    f.mode = mode;
    f.space = std::move(space);
    f.caps = std::move(caps);
    f.n0 = n0;
    f.depth = depth;
    f.cap_value = cap_value.value_or(default_cap_value());
    if (!(f.cap_value > 0.0)) throw std::invalid_argument("cap_value must be positive");
    return f;
}

double gauge_eval(const FNormMetric& fnorm, const Vector& x) {
    if (!same_space(fnorm.space, x.space)) throw std::invalid_argument("space mismatch");
    double best = 0.0;
    for (int k = 1; k <= fnorm.space->seminorm_count; ++k)
        best = std::max(best, seminorm_eval(x, k) / fnorm.caps[static_cast<std::size_t>(k - 1)]);
    return best;
}

namespace {

// Gauge in units of V_{n0}: the dyadic pseudonorm quantizes this value up.
double scaled_gauge(const FNormMetric& fnorm, const Vector& x) {
    return std::ldexp(gauge_eval(fnorm, x), -fnorm.n0);
}

double standard_value(const FNormMetric& fnorm, const Vector& z) {
    double sum = 0.0;
    for (int k = 1; k <= fnorm.space->seminorm_count; ++k) {
        const double p = seminorm_eval(z, k);
        sum += std::ldexp(p / (1.0 + p), -k);
    }
    return sum;
}

// Least p_H >= t over H subset of {1..depth}: the subset sums are exactly the
// multiples of 2^-depth in [0, 1 - 2^-depth], so quantize t up onto that grid.
// Returns cap_value when t exceeds the largest representable sum.
double dyadic_value(const FNormMetric& fnorm, double t) {
    if (t == 0.0) return 0.0; // |0| = 0 by convention, not the smallest p_H
    const double scaled = std::ldexp(t, fnorm.depth); // exact: power-of-two factor
    const double k = std::ceil(scaled);
    if (k > std::ldexp(1.0, fnorm.depth) - 1.0) return fnorm.cap_value;
    return std::ldexp(k, -fnorm.depth);
}

} // namespace

double fnorm_eval(const FNormMetric& fnorm, const Vector& x) {
    if (!same_space(fnorm.space, x.space)) throw std::invalid_argument("space mismatch");
    switch (fnorm.mode) {
    case MetricMode::Standard: return standard_value(fnorm, x);
    case MetricMode::Gauge: return scaled_gauge(fnorm, x);
    case MetricMode::Dyadic: return dyadic_value(fnorm, scaled_gauge(fnorm, x));
    }
    throw std::logic_error("unknown metric mode");
}

bool fnorm_capped(const FNormMetric& fnorm, const Vector& x) {
    if (fnorm.mode != MetricMode::Dyadic) return false;
    const double t = scaled_gauge(fnorm, x);
    if (t == 0.0) return false;
    return std::ceil(std::ldexp(t, fnorm.depth)) > std::ldexp(1.0, fnorm.depth) - 1.0;
}

double metric_eval(const FNormMetric& fnorm, const Vector& x, const Vector& y) {
    return fnorm_eval(fnorm, sub(y, x));
}

double standard_metric(const SpacePtr& space, const Vector& x, const Vector& y) {
    if (!space->locally_convex())
        throw std::invalid_argument("standard metric requires a locally convex space");
    FNormMetric f;
    f.mode = MetricMode::Standard;
    f.space = space;
    f.caps.assign(static_cast<std::size_t>(space->seminorm_count), 1.0);
    return metric_eval(f, x, y);
}

double dyadic_sum(std::span<const int> h) {
    double sum = 0.0;
    for (int n : h) sum += std::ldexp(1.0, -n);
    return sum;
}

namespace {

void validate_h(const FNormMetric& fnorm, std::span<const int> h) {
    if (h.empty()) throw std::invalid_argument("index set H must be nonempty");
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] < 1 || h[i] > fnorm.depth) throw std::out_of_range("index set H out of range");
        for (std::size_t j = i + 1; j < h.size(); ++j)
            if (h[i] == h[j]) throw std::invalid_argument("index set H has a repeated index");
    }
}

} // namespace

bool member_vh(const FNormMetric& fnorm, std::span<const int> h, const Vector& x) {
    if (fnorm.mode == MetricMode::Standard)
        throw std::invalid_argument("V_H membership requires a gauge or dyadic metric");
    validate_h(fnorm, h);
    return gauge_eval(fnorm, x) <= std::ldexp(dyadic_sum(h), fnorm.n0);
}

VhDecomposition decompose_in_vh(const FNormMetric& fnorm, std::span<const int> h, const Vector& x) {
    if (fnorm.space->kind != SpaceKind::CGrid)
        throw std::invalid_argument("the decomposition route is defined for box gauges (c-grid)");
    validate_h(fnorm, h);
    if (!same_space(fnorm.space, x.space)) throw std::invalid_argument("space mismatch");
    const int dim = fnorm.space->dim;
    const int m = fnorm.space->seminorm_count;

    // Per-coordinate box bound of U: the tightest cap among seminorms that see
    // the coordinate.
    std::vector<double> box(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        double b = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= m; ++k)
            if (i < fnorm.space->prefix_len(k)) b = std::min(b, fnorm.caps[static_cast<std::size_t>(k - 1)]);
        box[static_cast<std::size_t>(i)] = b;
    }

    VhDecomposition out;
    out.parts.reserve(h.size());
    std::vector<std::vector<double>> parts(h.size(), std::vector<double>(static_cast<std::size_t>(dim), 0.0));

    // The reachable set per coordinate is the interval sum of [-r_n, r_n] with
    // r_n = 2^(n0-n) * box_i; greedily clamp the remainder into each part.
    bool feasible = true;
    for (int i = 0; i < dim; ++i) {
        double remaining = x.coords[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < h.size(); ++j) {
            const double radius = std::ldexp(box[static_cast<std::size_t>(i)], fnorm.n0 - h[j]);
            const double piece = std::clamp(remaining, -radius, radius);
            parts[j][static_cast<std::size_t>(i)] = piece;
            remaining -= piece;
        }
        if (remaining != 0.0) feasible = false;
        out.reconstruction_error = std::max(out.reconstruction_error, std::abs(remaining));
    }
    out.feasible = feasible;
    if (!feasible) return out;

    out.part_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < h.size(); ++j) {
        Vector part(fnorm.space, parts[j]);
        for (int k = 1; k <= m; ++k) {
            const double cap = std::ldexp(fnorm.caps[static_cast<std::size_t>(k - 1)], fnorm.n0 - h[j]);
            out.part_margin = std::max(out.part_margin, seminorm_eval(part, k) / cap - 1.0);
        }
        out.parts.push_back(std::move(part));
    }
    return out;
}

ScalingAudit audit_scaling(const FNormMetric& fnorm,
                           std::span<const std::pair<Vector, Vector>> samples,
                           std::span<const double> lambdas) {
    ScalingAudit audit;
    audit.mode = fnorm.mode;
    audit.margin_interior = -std::numeric_limits<double>::infinity();
    audit.margin_interior_dyadic = -std::numeric_limits<double>::infinity();
    audit.margin_capped = -std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : samples) {
        const double base = metric_eval(fnorm, x, y);
        for (double lambda : lambdas) {
            if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must be in [0, 1]");
            const double lhs = metric_eval(fnorm, scale(lambda, x), scale(lambda, y));
            const double margin = lhs - lambda * base;
            const Vector z = sub(y, x);
            const bool capped = fnorm_capped(fnorm, z) || fnorm_capped(fnorm, scale(lambda, z));
            if (capped) {
                ++audit.capped_count;
                if (margin > audit.margin_capped) {
                    audit.margin_capped = margin;
                    audit.worst_capped = ScalingAudit::Witness{x, y, lambda, margin};
                }
            } else {
                ++audit.interior_count;
                if (margin > audit.margin_interior) {
                    audit.margin_interior = margin;
                    audit.worst_interior = ScalingAudit::Witness{x, y, lambda, margin};
                }
                const double log2l = std::log2(lambda);
                const bool dyadic_lambda = lambda > 0.0 && log2l == std::floor(log2l);
                if (dyadic_lambda)
                    audit.margin_interior_dyadic = std::max(audit.margin_interior_dyadic, margin);
            }
        }
    }
    return audit;
}

AdditiveAudit audit_additive(const FNormMetric& fnorm,
                             std::span<const std::array<Vector, 4>> quadruples) {
    AdditiveAudit audit;
    audit.margin = -std::numeric_limits<double>::infinity();
    for (const auto& q : quadruples) {
        const auto& [x1, x2, y1, y2] = q;
        const double lhs = metric_eval(fnorm, add(x1, x2), add(y1, y2));
        const double rhs = metric_eval(fnorm, x1, y1) + metric_eval(fnorm, x2, y2);
        ++audit.samples;
        if (lhs - rhs > audit.margin) {
            audit.margin = lhs - rhs;
            audit.witness = q;
        }
    }
    return audit;
}

AxiomAudit audit_metric_axioms(const FNormMetric& fnorm,
                               std::span<const std::array<Vector, 3>> triples) {
    AxiomAudit audit;
    audit.symmetry_margin = 0.0;
    audit.identity_margin = 0.0;
    audit.triangle_margin = -std::numeric_limits<double>::infinity();
    audit.translation_margin = 0.0;
    for (const auto& [x, y, z] : triples) {
        const double dxy = metric_eval(fnorm, x, y);
        const double dyx = metric_eval(fnorm, y, x);
        const double dyz = metric_eval(fnorm, y, z);
        const double dxz = metric_eval(fnorm, x, z);
        audit.symmetry_margin = std::max(audit.symmetry_margin, std::abs(dxy - dyx));
        audit.identity_margin = std::max(audit.identity_margin, metric_eval(fnorm, x, x));
        audit.triangle_margin = std::max(audit.triangle_margin, dxz - (dxy + dyz));
        const double shifted = metric_eval(fnorm, add(x, z), add(y, z));
        audit.translation_margin = std::max(audit.translation_margin, std::abs(shifted - dxy));
        ++audit.samples;
    }
    return audit;
}

double lp_metric(const Vector& x, const Vector& y) {
    require_same_space(x, y);
    if (x.space->kind != SpaceKind::LpGrid)
        throw std::invalid_argument("lp_metric requires an lp-grid space");
    return seminorm_eval(sub(y, x), 1);
}

LpScalingResult lp_counterexample(double p, double lambda, const Vector& x, const Vector& y) {
    if (!(p > 0.0) || p > 1.0)
        throw std::invalid_argument("lp scaling reversal is defined for p in (0, 1]");
    if (!(lambda >= 0.0) || lambda > 1.0)
        throw std::invalid_argument("lambda must be in [0, 1]");
    require_same_space(x, y);
    if (x.space->kind != SpaceKind::LpGrid || x.space->exponent != p)
        throw std::invalid_argument("vectors must live in an lp-grid space with the given exponent");
    LpScalingResult r;
    r.p = p;
    r.lambda = lambda;
    r.base = lp_metric(x, y);
    r.lhs = lp_metric(scale(lambda, x), scale(lambda, y));
    r.rhs_strong = lambda * r.base;
    r.violated = r.lhs > r.rhs_strong;
    return r;
}

} // namespace fmnc
