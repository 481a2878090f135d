#include "fmnc/mnc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fmnc/convexity.hpp"

namespace fmnc {

double distance_to_cloud(const FNormMetric& metric, const Vector& x, const PointCloud& cloud) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vector& p : cloud.points) best = std::min(best, metric_eval(metric, x, p));
    return best;
}

NetCertificate greedy_net(const FNormMetric& metric, const PointCloud& m, double eps) {
    return greedy_net(metric, m, eps, m);
}

NetCertificate greedy_net(const FNormMetric& metric, const PointCloud& m, double eps,
                          const PointCloud& candidates) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    NetCertificate cert;
    cert.eps = eps;
    cert.centers = PointCloud(m.space.get() ? m.space : candidates.space, "net");
    cert.assignments.assign(m.size(), {});
    cert.complete = true;
    if (m.empty()) return cert; // vacuously complete
    if (candidates.empty()) throw std::invalid_argument("greedy_net needs candidate centers");

    std::vector<double> dist(m.size(), std::numeric_limits<double>::infinity());
    std::vector<int> assigned(m.size(), -1);
    std::vector<bool> used(candidates.size(), false);

    for (;;) {
        // farthest uncovered point; the first pass picks index 0
        std::size_t target = 0;
        double worst = -1.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (dist[i] > worst) {
                worst = dist[i];
                target = i;
            }
        }
        if (worst <= eps) break;

        // nearest unused candidate to the target (lowest index on ties)
        std::size_t pick = candidates.size();
        double pick_dist = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (used[c]) continue;
            const double d = metric_eval(metric, m.points[target], candidates.points[c]);
            if (d < pick_dist) {
                pick_dist = d;
                pick = c;
            }
        }
        if (pick == candidates.size() || pick_dist > eps) {
            cert.complete = false; // no candidate can cover the farthest point
            break;
        }
        used[pick] = true;
        const int center_idx = static_cast<int>(cert.centers.size());
        cert.centers.points.push_back(candidates.points[pick]);
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double d = metric_eval(metric, m.points[i], cert.centers.points.back());
            if (d < dist[i]) {
                dist[i] = d;
                assigned[i] = center_idx;
            }
        }
    }

    for (std::size_t i = 0; i < m.size(); ++i) {
        cert.assignments[i].center = assigned[i];
        cert.assignments[i].distance = dist[i];
        if (!(dist[i] <= eps)) cert.complete = false;
    }
    return cert;
}

bool verify_net(const FNormMetric& metric, const PointCloud& m, const NetCertificate& cert) {
    if (cert.assignments.size() != m.size()) return false;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto& a = cert.assignments[i];
        if (a.center < 0 || a.center >= static_cast<int>(cert.centers.size())) return false;
        const double d =
            metric_eval(metric, m.points[i], cert.centers.points[static_cast<std::size_t>(a.center)]);
        if (!(d <= cert.eps)) return false;
    }
    return true;
}

PackingWitness packing_lower(const FNormMetric& metric, const PointCloud& m, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    PackingWitness out;
    out.eps = eps;
    for (std::size_t i = 0; i < m.size(); ++i) {
        bool separated = true;
        for (int w : out.indices) {
            if (metric_eval(metric, m.points[i], m.points[static_cast<std::size_t>(w)]) <= 2.0 * eps) {
                separated = false;
                break;
            }
        }
        if (separated) out.indices.push_back(static_cast<int>(i));
    }
    return out;
}

bool verify_packing(const FNormMetric& metric, const PointCloud& m, const PackingWitness& w) {
    // pairwise separation
    for (std::size_t a = 0; a < w.indices.size(); ++a)
        for (std::size_t b = a + 1; b < w.indices.size(); ++b) {
            const double d = metric_eval(metric, m.points[static_cast<std::size_t>(w.indices[a])],
                                         m.points[static_cast<std::size_t>(w.indices[b])]);
            if (!(d > 2.0 * w.eps)) return false;
        }
    // maximality: every cloud point is within 2*eps of a witness
    for (const Vector& p : m.points) {
        bool near = false;
        for (int idx : w.indices)
            if (metric_eval(metric, p, m.points[static_cast<std::size_t>(idx)]) <= 2.0 * w.eps) {
                near = true;
                break;
            }
        if (!near) return false;
    }
    return true;
}

AlphaBounds alpha_bounds(const FNormMetric& metric, const PointCloud& m,
                         std::vector<double> eps_grid, std::size_t net_budget) {
    if (eps_grid.empty()) throw std::invalid_argument("eps grid must be nonempty");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0)) throw std::invalid_argument("eps grid must be positive");
        if (i > 0 && !(eps_grid[i] < eps_grid[i - 1]))
            throw std::invalid_argument("eps grid must be strictly decreasing");
    }
    AlphaBounds out;
    out.eps_grid = eps_grid;
    out.net_budget = net_budget;
    out.lower = 0.0;
    out.upper = std::numeric_limits<double>::infinity();
    out.upper_attained = false;

    for (double eps : eps_grid) {
        const NetCertificate net = greedy_net(metric, m, eps);
        const PackingWitness pack = packing_lower(metric, m, eps);
        out.profile.push_back({eps, net.centers.size(), pack.indices.size()});
        if (net.complete && net.centers.size() <= net_budget) {
            // grid is decreasing, so the last qualifying eps is the least one
            out.upper = eps;
            out.upper_attained = true;
            out.upper_witness = net;
        }
        if (pack.indices.size() > net_budget && out.lower == 0.0) {
            out.lower = eps; // first hit on the decreasing grid is the largest
            out.lower_witness = pack;
        }
    }
    if (out.upper_attained && out.lower > out.upper)
        throw std::logic_error("packing/covering duality violated"); // cannot happen
    return out;
}

NetTransfer net_transfer_co(const FNormMetric& metric, const PointCloud& m,
                            const NetCertificate& net_for_m, double eps, int resolution,
                            std::size_t hull_budget) {
    if (metric.mode != MetricMode::Gauge)
        throw std::invalid_argument("net transfer requires the gauge metric");
    if (!net_for_m.complete) throw std::invalid_argument("input certificate is incomplete");
    if (!verify_net(metric, m, net_for_m))
        throw std::invalid_argument("input certificate does not cover the cloud");

    const double eta = net_for_m.eps;
    const HullSample center_hull = hull_sample_full(net_for_m.centers, resolution, hull_budget);
    const NetCertificate k_net = greedy_net(metric, center_hull.cloud, eps);
    const HullSample co_m = hull_sample_full(m, resolution, hull_budget);

    NetTransfer out;
    out.eta = eta;
    out.eps = eps;
    out.resolution = resolution;
    out.grid_gap = hull_grid_gap(metric, net_for_m.centers, resolution);
    out.co_sample = co_m.cloud;
    out.certificate.eps = eta + eps + 1e-9;
    out.certificate.centers = k_net.centers;
    out.certificate.assignments.assign(co_m.cloud.size(), {});
    out.certificate.complete = true;
    out.hinge_max = 0.0;

    const std::size_t n_centers = net_for_m.centers.size();
    for (std::size_t i = 0; i < co_m.cloud.size(); ++i) {
        // aggregate the composition through the net assignment: a resolution-r
        // hull point of M lands within eta of a resolution-r hull point of the
        // centers
        std::vector<double> agg(static_cast<std::size_t>(m.space->dim), 0.0);
        std::vector<int> center_weight(n_centers, 0);
        const auto& comp = co_m.compositions[i];
        for (std::size_t j = 0; j < comp.size(); ++j) {
            if (comp[j] == 0) continue;
            center_weight[static_cast<std::size_t>(net_for_m.assignments[j].center)] += comp[j];
        }
        for (std::size_t c = 0; c < n_centers; ++c) {
            if (center_weight[c] == 0) continue;
            const double w = static_cast<double>(center_weight[c]) / static_cast<double>(resolution);
            for (std::size_t d = 0; d < agg.size(); ++d)
                agg[d] += w * net_for_m.centers.points[c].coords[d];
        }
        const Vector z(m.space, std::move(agg));
        out.hinge_max = std::max(out.hinge_max, metric_eval(metric, co_m.cloud.points[i], z));

        // certificate assignment: nearest transferred center
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k_net.centers.size(); ++c) {
            const double d = metric_eval(metric, co_m.cloud.points[i], k_net.centers.points[c]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        out.certificate.assignments[i] = {best, best_d};
        if (!(best_d <= out.certificate.eps)) out.certificate.complete = false;
    }
    return out;
}

namespace {

PointCloud prefix_cloud(const PointCloud& m, std::size_t count) {
    PointCloud out(m.space, m.label + ":prefix");
    out.points.assign(m.points.begin(), m.points.begin() + static_cast<std::ptrdiff_t>(count));
    return out;
}

double grid_step(const std::vector<double>& eps_grid) {
    double step = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < eps_grid.size(); ++i)
        step = std::min(step, eps_grid[i - 1] - eps_grid[i]);
    return std::isfinite(step) ? step : eps_grid.front();
}

double cover_radius(const FNormMetric& metric, const PointCloud& cloud,
                    const PointCloud& centers) {
    double radius = 0.0;
    for (const Vector& p : cloud.points) radius = std::max(radius, distance_to_cloud(metric, p, centers));
    return radius;
}

} // namespace

std::vector<MncPropertyItem> check_mnc_properties(const FNormMetric& metric,
                                                  const std::vector<PointCloud>& clouds,
                                                  const std::vector<double>& eps_grid,
                                                  std::size_t net_budget, Rng& rng) {
    if (clouds.empty()) throw std::invalid_argument("property checks need clouds");
    const double tol = 2.0 * grid_step(eps_grid);
    std::vector<MncPropertyItem> items;
    auto push = [&](const std::string& id, const std::string& stmt, double violation,
                    double tolerance) {
        items.push_back({id, stmt, violation, tolerance, violation <= tolerance});
    };

    double v_mono_upper = 0.0, v_mono_lower = 0.0;
    double v_closure = 0.0;
    double v_translate = 0.0;
    double v_scale = 0.0;
    double v_sum_upper = 0.0, v_sum_lower = 0.0;
    double v_union_upper = 0.0, v_union_lower = 0.0;
    double v_finite = 0.0;

    std::vector<double> doubled_grid;
    for (double e : eps_grid) doubled_grid.push_back(2.0 * e);

    for (std::size_t ci = 0; ci < clouds.size(); ++ci) {
        const PointCloud& n_cloud = clouds[ci];
        const AlphaBounds bn = alpha_bounds(metric, n_cloud, eps_grid, net_budget);

        // (i) monotonicity on a prefix subset
        const PointCloud m_cloud = prefix_cloud(n_cloud, std::max<std::size_t>(1, n_cloud.size() / 2));
        const AlphaBounds bm = alpha_bounds(metric, m_cloud, eps_grid, net_budget);
        v_mono_upper = std::max(v_mono_upper, bm.upper - bn.upper);
        v_mono_lower = std::max(v_mono_lower, bm.lower - bn.lower);

        // (ii) closure of a finite grid is a no-op
        const AlphaBounds again = alpha_bounds(metric, n_cloud, eps_grid, net_budget);
        v_closure = std::max({v_closure, std::abs(again.upper - bn.upper),
                              std::abs(again.lower - bn.lower)});

        // (iii) translation invariance, exact on lattice samples
        const Vector shift = sample_vector(metric.space, rng, 1.0);
        const AlphaBounds bt =
            alpha_bounds(metric, translate_cloud(n_cloud, shift), eps_grid, net_budget);
        v_translate = std::max({v_translate, std::abs(bt.upper - bn.upper),
                                std::abs(bt.lower - bn.lower)});

        // (iv) homogeneity: 2*M on the doubled grid scales both bounds exactly
        const AlphaBounds b2 =
            alpha_bounds(metric, scale_cloud(2.0, n_cloud), doubled_grid, net_budget);
        v_scale = std::max({v_scale, std::abs(b2.upper - 2.0 * bn.upper),
                            std::abs(b2.lower - 2.0 * bn.lower)});

        // (v) finite branch: with an unlimited budget every grid eps is covered
        const AlphaBounds bf = alpha_bounds(metric, n_cloud, eps_grid, kUnlimitedNetBudget);
        v_finite = std::max(v_finite, bf.upper - eps_grid.back());

        // (vi)/(vii) need a partner cloud
        const PointCloud& partner = clouds[(ci + 1) % clouds.size()];
        const AlphaBounds bp = alpha_bounds(metric, partner, eps_grid, net_budget);
        if (!bn.upper_attained || !bp.upper_attained || !bn.upper_witness || !bp.upper_witness)
            continue;

        // Minkowski sum: the pairwise sums of the two nets' centers cover
        // M + N at upper(M) + upper(N) by the additive shift inequality.
        // The measured radius of that transferred net is the upper estimate;
        // the budgeted greedy value is recorded next to it.
        {
            const PointCloud sum_cloud = minkowski_sum(n_cloud, partner);
            const PointCloud sum_centers =
                minkowski_sum(bn.upper_witness->centers, bp.upper_witness->centers);
            double upper_est = cover_radius(metric, sum_cloud, sum_centers);
            std::vector<double> merged = eps_grid;
            for (double e : eps_grid) merged.push_back(2.0 * e);
            std::sort(merged.begin(), merged.end(), std::greater<double>());
            merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
            const std::size_t sum_budget = net_budget < (std::size_t{1} << 20)
                                               ? net_budget * net_budget
                                               : net_budget;
            const AlphaBounds bsum = alpha_bounds(metric, sum_cloud, merged, sum_budget);
            if (bsum.upper_attained) upper_est = std::min(upper_est, bsum.upper);
            v_sum_upper = std::max(v_sum_upper, upper_est - (bn.upper + bp.upper));
            const double diff_est = std::max({bn.lower - bp.upper, bp.lower - bn.upper, 0.0});
            v_sum_lower = std::max(v_sum_lower, diff_est - upper_est);
        }

        // union: the two nets together cover M and N at max(upper, upper);
        // packings scan the M points first, so lower(M) transfers exactly.
        {
            const PointCloud both = union_cloud(n_cloud, partner);
            const PointCloud both_centers =
                union_cloud(bn.upper_witness->centers, bp.upper_witness->centers);
            double upper_est = cover_radius(metric, both, both_centers);
            const std::size_t union_budget =
                net_budget < (std::size_t{1} << 20) ? 2 * net_budget : net_budget;
            const AlphaBounds bu = alpha_bounds(metric, both, eps_grid, union_budget);
            if (bu.upper_attained) upper_est = std::min(upper_est, bu.upper);
            v_union_upper = std::max(v_union_upper, upper_est - std::max(bn.upper, bp.upper));
            const AlphaBounds bu_low = alpha_bounds(metric, both, eps_grid, net_budget);
            v_union_lower =
                std::max(v_union_lower, std::max(bn.lower, bp.lower) - bu_low.lower);
        }
    }

    push("i", "M subset of N implies bounds(M) <= bounds(N)", std::max(v_mono_upper, v_mono_lower), tol);
    push("ii", "closure of a finite grid leaves both bounds unchanged", v_closure, 0.0);
    push("iii", "translation leaves both bounds unchanged", v_translate, 0.0);
    push("iv", "scaling by 2 doubles both bounds on the doubled grid", v_scale, 0.0);
    push("v", "finite clouds cover at every grid eps (unlimited budget)", v_finite, 0.0);
    push("vi", "sum bounds via transferred center sums: upper(M+N) <= upper(M) + upper(N), "
               "|alpha(M)-alpha(N)| <= alpha(M+N)",
         std::max(v_sum_upper, v_sum_lower), tol);
    push("vii", "union bounds via the joined nets: upper <= max of uppers, lower >= max of lowers",
         std::max(v_union_upper, v_union_lower), tol);

    // (viii) finite-dimensional branch: the unit ball covers at every tested
    // eps; net sizes are recorded elsewhere as a trend, never asserted.
    {
        PointCloud ball(metric.space, "unit-ball-grid");
        Rng ball_rng(rng.next());
        const int n_pts = 64;
        for (int i = 0; i < n_pts; ++i) {
            Vector v = sample_vector(metric.space, ball_rng, 1.0);
            const double g = fnorm_eval(metric, v);
            ball.points.push_back(g > 1.0 ? scale(1.0 / g, v) : v);
        }
        const AlphaBounds bb = alpha_bounds(metric, ball, eps_grid, kUnlimitedNetBudget);
        push("viii", "unit ball at truncation covers at every tested eps",
             bb.upper - eps_grid.back(), 0.0);
    }
    return items;
}

DecreasingFamily make_decreasing_family(const FNormMetric& metric,
                                        std::vector<PointCloud> members, double nest_tol) {
    if (members.size() < 2) throw std::invalid_argument("family needs at least two members");
    for (std::size_t i = 0; i + 1 < members.size(); ++i) {
        for (const Vector& p : members[i + 1].points) {
            if (distance_to_cloud(metric, p, members[i]) > nest_tol)
                throw std::invalid_argument("family is not decreasing: member " +
                                            std::to_string(i + 2) + " leaves member " +
                                            std::to_string(i + 1));
        }
    }
    return DecreasingFamily{std::move(members), nest_tol, true};
}

IntersectionProbe nested_intersection_probe(const FNormMetric& metric,
                                            const DecreasingFamily& family, double eps) {
    const PointCloud& last = family.members.back();
    if (last.empty()) throw std::invalid_argument("family members must be nonempty");
    IntersectionProbe probe;
    probe.max_distance = std::numeric_limits<double>::infinity();
    for (const Vector& candidate : last.points) {
        std::vector<double> dists;
        double worst = 0.0;
        for (const PointCloud& member : family.members) {
            const double d = distance_to_cloud(metric, candidate, member);
            dists.push_back(d);
            worst = std::max(worst, d);
        }
        if (worst < probe.max_distance) {
            probe.max_distance = worst;
            probe.point = candidate;
            probe.distances = std::move(dists);
        }
    }
    probe.found = probe.max_distance <= eps;
    return probe;
}

} // namespace fmnc
