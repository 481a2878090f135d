#include "fmnc/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "fmnc/mnc.hpp"

namespace fmnc {

BarycentricWeights BarycentricWeights::of(std::vector<double> raw) {
    if (raw.empty()) throw std::invalid_argument("weights must be nonempty");
    double sum = 0.0;
    for (double v : raw) {
        if (!(v >= -1e-12)) throw std::invalid_argument("weights must be nonnegative");
        sum += v;
    }
    if (!(sum > 1e-12)) throw std::invalid_argument("weights must have positive sum");
    for (double& v : raw) v = std::max(0.0, v) / sum;
    return BarycentricWeights{std::move(raw)};
}

Vector w_combine(const Vector& x, const Vector& y, double t) {
    if (!(t >= 0.0) || t > 1.0) throw std::invalid_argument("t must be in [0, 1]");
    require_same_space(x, y);
    std::vector<double> c(x.coords.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = t * x.coords[i] + (1.0 - t) * y.coords[i];
    return Vector(x.space, std::move(c));
}

Vector k_combine(const Vector& x, const Vector& y, const Vector& z,
                 const BarycentricWeights& w) {
    if (w.t.size() != 3) throw std::invalid_argument("k_combine needs three weights");
    const Vector pts[3] = {x, y, z};
    return bary_combine(pts, w);
}

Vector bary_combine(std::span<const Vector> points, const BarycentricWeights& w) {
    if (points.empty() || points.size() != w.t.size())
        throw std::invalid_argument("weights and points must match");
    for (std::size_t j = 1; j < points.size(); ++j) require_same_space(points[0], points[j]);
    std::vector<double> c(points[0].coords.size(), 0.0);
    for (std::size_t j = 0; j < points.size(); ++j)
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] += w.t[j] * points[j].coords[i];
    return Vector(points[0].space, std::move(c));
}

double check_tcs(const FNormMetric& metric, const Vector& u, const Vector& x,
                 const Vector& y, double t) {
    const double lhs = metric_eval(metric, u, w_combine(x, y, t));
    return lhs - (t * metric_eval(metric, u, x) + (1.0 - t) * metric_eval(metric, u, y));
}

double check_tmcs(const FNormMetric& metric, const Vector& u, const Vector& x,
                  const Vector& y, const Vector& z, const BarycentricWeights& w) {
    if (w.t.size() != 3) throw std::invalid_argument("check_tmcs needs three weights");
    const double lhs = metric_eval(metric, u, k_combine(x, y, z, w));
    return lhs - (w.t[0] * metric_eval(metric, u, x) + w.t[1] * metric_eval(metric, u, y) +
                  w.t[2] * metric_eval(metric, u, z));
}

double hull_grid_size(int generator_count, int resolution) {
    // C(n + r - 1, r) = C(n + r - 1, n - 1), evaluated from the smaller side
    const int total = generator_count + resolution - 1;
    const int k = std::min(resolution, generator_count - 1);
    double value = 1.0;
    for (int j = 1; j <= k; ++j) {
        value = value * static_cast<double>(total - k + j) / static_cast<double>(j);
        if (value > 1e18) return value;
    }
    return value;
}

namespace {

void enumerate_compositions(int n, int r, std::vector<int>& current, int pos, int left,
                            const std::function<void(const std::vector<int>&)>& emit) {
    if (pos == n - 1) {
        current[static_cast<std::size_t>(pos)] = left;
        emit(current);
        return;
    }
    for (int k = left; k >= 0; --k) {
        current[static_cast<std::size_t>(pos)] = k;
        enumerate_compositions(n, r, current, pos + 1, left - k, emit);
    }
}

Vector grid_point(const PointCloud& gens, const std::vector<int>& comp, int resolution) {
    std::vector<double> c(static_cast<std::size_t>(gens.space->dim), 0.0);
    for (std::size_t j = 0; j < comp.size(); ++j) {
        if (comp[j] == 0) continue;
        const double w = static_cast<double>(comp[j]) / static_cast<double>(resolution);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += w * gens.points[j].coords[i];
    }
    return Vector(gens.space, std::move(c));
}

} // namespace

HullSample hull_sample_full(const PointCloud& generators, int resolution, std::size_t budget) {
    if (generators.empty()) throw std::invalid_argument("hull_sample of empty cloud");
    if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
    const int n = static_cast<int>(generators.size());
    const double count = hull_grid_size(n, resolution);
    if (count > static_cast<double>(budget))
        throw std::runtime_error("hull grid of " + std::to_string(count) +
                                 " points exceeds the budget of " + std::to_string(budget));

    HullSample out;
    out.resolution = resolution;
    out.cloud = PointCloud(generators.space, generators.label + ":co");
    out.cloud.points.reserve(static_cast<std::size_t>(count));
    out.compositions.reserve(static_cast<std::size_t>(count));

    // vertices first, so prefix-based comparisons against the generators stay
    // exact downstream
    for (int j = 0; j < n; ++j) {
        std::vector<int> comp(static_cast<std::size_t>(n), 0);
        comp[static_cast<std::size_t>(j)] = resolution;
        out.cloud.points.push_back(generators.points[static_cast<std::size_t>(j)]);
        out.compositions.push_back(std::move(comp));
    }
    std::vector<int> current(static_cast<std::size_t>(n), 0);
    enumerate_compositions(n, resolution, current, 0, resolution,
                           [&](const std::vector<int>& comp) {
                               for (int k : comp)
                                   if (k == resolution) return; // vertex, already emitted
                               out.cloud.points.push_back(grid_point(generators, comp, resolution));
                               out.compositions.push_back(comp);
                           });
    return out;
}

PointCloud hull_sample(const PointCloud& generators, int resolution, std::size_t budget) {
    return hull_sample_full(generators, resolution, budget).cloud;
}

double hull_grid_gap(const FNormMetric& metric, const PointCloud& generators, int resolution) {
    double diam = 0.0;
    for (std::size_t i = 0; i < generators.size(); ++i)
        for (std::size_t j = i + 1; j < generators.size(); ++j)
            diam = std::max(diam, metric_eval(metric, generators.points[i], generators.points[j]));
    return diam * static_cast<double>(generators.size()) / static_cast<double>(resolution);
}

StabilityReport check_stability(const FNormMetric& metric, const HullSample& c, double r,
                                int samples, double tol, Rng& rng, double perturb_frac) {
    if (metric.mode != MetricMode::Gauge)
        throw std::invalid_argument("stability check requires the gauge metric");
    if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
    if (c.cloud.empty()) throw std::invalid_argument("stability check needs a nonempty grid");

    const std::size_t n_gens = c.compositions.empty() ? c.cloud.size() : c.compositions.front().size();
    StabilityReport report;
    report.r = r;
    report.tolerance = tol;
    report.max_violation = -std::numeric_limits<double>::infinity();
    {
        PointCloud gens(c.cloud.space);
        const std::size_t take = std::min(n_gens, c.cloud.size());
        for (std::size_t j = 0; j < take; ++j) gens.points.push_back(c.cloud.points[j]);
        report.grid_gap = hull_grid_gap(metric, gens, c.resolution);
    }

    auto perturbation = [&](double radius) {
        for (;;) {
            Vector v = sample_vector(metric.space, rng, 1.0);
            const double norm = fnorm_eval(metric, v);
            if (norm > 1e-9) return scale(radius / norm, v);
        }
    };

    for (int s = 0; s < samples; ++s) {
        const Vector& ci = c.cloud.points[rng.below(c.cloud.size())];
        const Vector& cj = c.cloud.points[rng.below(c.cloud.size())];
        const Vector x = add(ci, perturbation(rng.unit() * perturb_frac * r));
        const Vector y = add(cj, perturbation(rng.unit() * perturb_frac * r));
        const double t = rng.unit();
        const Vector z = w_combine(x, y, t);
        // the combination of the unperturbed grid points is in C by W-convexity
        const Vector z_witness = w_combine(ci, cj, t);
        double dist = metric_eval(metric, z, z_witness);
        for (const Vector& g : c.cloud.points) dist = std::min(dist, metric_eval(metric, z, g));
        const double violation = dist - r;
        ++report.samples;
        if (violation > report.max_violation) {
            report.max_violation = violation;
            report.witness = z;
        }
    }
    report.pass = report.max_violation <= tol;
    return report;
}

PropertyPReport check_property_p(const FNormMetric& metric,
                                 std::span<const PropertyPTuple> tuples) {
    PropertyPReport report;
    report.printed_margin = -std::numeric_limits<double>::infinity();
    report.conventional_margin = -std::numeric_limits<double>::infinity();
    for (const auto& [x1, y1, x2, y2, t] : tuples) {
        const double lhs = metric_eval(metric, w_combine(x1, y1, t), w_combine(x2, y2, t));
        const double printed = lhs - (t * metric_eval(metric, x1, y1) +
                                      (1.0 - t) * metric_eval(metric, x2, y2));
        const double conventional = lhs - (t * metric_eval(metric, x1, x2) +
                                           (1.0 - t) * metric_eval(metric, y1, y2));
        report.printed_margin = std::max(report.printed_margin, printed);
        report.conventional_margin = std::max(report.conventional_margin, conventional);
        ++report.samples;
    }
    return report;
}

PropertyQReport check_property_q(const FNormMetric& metric, const PointCloud& finite_set,
                                 std::span<const double> eps_list, std::size_t budget) {
    if (finite_set.empty()) throw std::invalid_argument("property (Q) needs a nonempty set");
    PropertyQReport report;
    double diam = 0.0;
    for (std::size_t i = 0; i < finite_set.size(); ++i)
        for (std::size_t j = i + 1; j < finite_set.size(); ++j)
            diam = std::max(diam, metric_eval(metric, finite_set.points[i], finite_set.points[j]));
    const double n = static_cast<double>(finite_set.size());

    report.pass = true;
    for (double eps : eps_list) {
        if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
        // resolution making the grid an eps/2-net of the true hull
        const int resolution = std::max(1, static_cast<int>(std::ceil(2.0 * diam * n / eps)));
        const HullSample grid = hull_sample_full(finite_set, resolution, budget);
        const NetCertificate net = greedy_net(metric, grid.cloud, eps);
        PropertyQReport::Entry entry;
        entry.eps = eps;
        entry.resolution = resolution;
        entry.grid_points = grid.cloud.size();
        entry.net_size = net.centers.size();
        entry.grid_gap = diam * n / static_cast<double>(resolution);
        entry.complete = net.complete;
        report.pass = report.pass && entry.complete;
        report.entries.push_back(entry);
    }
    return report;
}

} // namespace fmnc
