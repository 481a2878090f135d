#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fmnc/space.hpp"

namespace fmnc {

/// The three realizations of a translation-invariant metric on a SpaceModel.
///
///   standard  d(x,y) = sum_k 2^-k * p_k(z)/(1 + p_k(z)), z = y-x.
///             The textbook metrizability construction; it does NOT satisfy
///             the scaling inequality d(Lx, Ly) <= L * d(x,y).
///   gauge     d(x,y) = gauge_U(z) * 2^-n0 with U the caps box
///             {x : p_k(x) <= c_k for all k}. Positively homogeneous, so the
///             scaling inequality holds with equality.
///   dyadic    the pseudonorm built from the neighborhood base
///             V_n = 2^(n0-n) * U: |z| is the least p_H = sum_{n in H} 2^-n
///             over H subset of {1..depth} with z in V_H = sum_{n in H} V_n,
///             cap_value if no such H, and |0| = 0 by convention.
enum class MetricMode { Standard, Gauge, Dyadic };

std::string to_string(MetricMode mode);
MetricMode metric_mode_from_string(const std::string& name);

struct FNormMetric {
    MetricMode mode = MetricMode::Standard;
    SpacePtr space;
    std::vector<double> caps; // size m, positive
    int n0 = 0;
    int depth = 8;        // dyadic search depth N_max
    double cap_value = 1.0;
};

/// Largest value representable by a dyadic sum at this depth, sum 2^-n for
/// n = 1..depth.
double max_dyadic_value(int depth);

/// cap_value default: sup over all finite H of p_H. Any larger cap breaks
/// subadditivity of the truncated pseudonorm on points outside every V_H.
inline double default_cap_value() { return 1.0; }

FNormMetric build_fnorm(SpacePtr space, MetricMode mode, std::vector<double> caps,
                        int n0 = 0, int depth = 8,
                        std::optional<double> cap_value = std::nullopt);

/// Minkowski gauge of the caps box: max_k p_k(x) / c_k.
double gauge_eval(const FNormMetric& fnorm, const Vector& x);

double fnorm_eval(const FNormMetric& fnorm, const Vector& x);
bool fnorm_capped(const FNormMetric& fnorm, const Vector& x);
double metric_eval(const FNormMetric& fnorm, const Vector& x, const Vector& y);

/// Baseline metric without building an FNormMetric object.
double standard_metric(const SpacePtr& space, const Vector& x, const Vector& y);

/// p_H = sum_{n in H} 2^-n for H subset of {1..depth}, exact in double.
double dyadic_sum(std::span<const int> h);

/// x in V_H = sum_{n in H} V_n? Reduces to gauge_U(x) <= 2^n0 * p_H because
/// every V_n shares the shape U.
bool member_vh(const FNormMetric& fnorm, std::span<const int> h, const Vector& x);

/// Independent route for box gauges (c-grid): solve the linear feasibility
/// problem x = sum_{n in H} x_n with x_n in V_n coordinate by coordinate and
/// return the witness parts. Feasible iff member_vh agrees.
struct VhDecomposition {
    bool feasible = false;
    std::vector<Vector> parts;          // one per index in H when feasible
    double reconstruction_error = 0.0;  // max |x_i - sum_n part_n,i|
    double part_margin = 0.0;           // max over parts of p_k(part)/(2^(n0-n) c_k) - 1
};
VhDecomposition decompose_in_vh(const FNormMetric& fnorm, std::span<const int> h, const Vector& x);

// --- audits -----------------------------------------------------------------

/// Worst-case margins of d(Lx, Ly) - L * d(x, y) over sample pairs and
/// scale factors, split by whether both sides stay inside the dyadic range.
struct ScalingAudit {
    MetricMode mode = MetricMode::Standard;
    double margin_interior = 0.0;
    double margin_interior_dyadic = 0.0; // interior pairs, L an exact power of two
    double margin_capped = 0.0;
    long interior_count = 0;
    long capped_count = 0;
    struct Witness {
        Vector x, y;
        double lambda = 0.0;
        double margin = 0.0;
    };
    std::optional<Witness> worst_interior;
    std::optional<Witness> worst_capped;
};
ScalingAudit audit_scaling(const FNormMetric& fnorm,
                           std::span<const std::pair<Vector, Vector>> samples,
                           std::span<const double> lambdas);

/// Max margin of d(x1+x2, y1+y2) - d(x1,y1) - d(x2,y2) over quadruples.
struct AdditiveAudit {
    double margin = 0.0;
    long samples = 0;
    std::optional<std::array<Vector, 4>> witness;
};
AdditiveAudit audit_additive(const FNormMetric& fnorm,
                             std::span<const std::array<Vector, 4>> quadruples);

/// Metric axioms plus translation invariance on sampled triples/shifts.
struct AxiomAudit {
    double symmetry_margin = 0.0;
    double identity_margin = 0.0;
    double triangle_margin = 0.0;
    double translation_margin = 0.0;
    long samples = 0;
};
AxiomAudit audit_metric_axioms(const FNormMetric& fnorm,
                               std::span<const std::array<Vector, 3>> triples);

// --- the L^p anomaly ---------------------------------------------------------

/// d(x, y) = sum |y_i - x_i|^p * step on an lp-grid space.
double lp_metric(const Vector& x, const Vector& y);

/// Evaluates both sides of the scaling inequality for the lp-grid metric:
/// lhs = d(Lx, Ly) = L^p * d(x, y), rhs = L * d(x, y). For 0 < p < 1 and
/// 0 < L < 1 the strict reversal lhs > rhs always holds; p = 1 is the
/// boundary with equality. Rejects p outside (0, 1].
struct LpScalingResult {
    double p = 0.0;
    double lambda = 0.0;
    double base = 0.0; // d(x, y)
    double lhs = 0.0;  // d(Lx, Ly)
    double rhs_strong = 0.0;
    bool violated = false;
};
LpScalingResult lp_counterexample(double p, double lambda, const Vector& x, const Vector& y);

} // namespace fmnc
