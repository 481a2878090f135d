#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fmnc/mnc.hpp"
#include "fmnc/space.hpp"

namespace fmnc {

/// Deterministic operators on a SpaceModel.
///
///   affine-contraction          F(x) = lambda * x + shift
///   contraction-plus-smoothing  F(x) = lambda * x + strength * (G x) + shift,
///                               G the discretized Gaussian kernel matrix
///                               G_ij = exp(-((i-j) * step / width)^2) * step.
///                               The kernel part is a finite-rank smoothing
///                               term; `smoothing_gain` bounds its sup-norm
///                               operator gain.
///   custom-table                explicit point-to-point table, exact lookup.
enum class OperatorKind { AffineContraction, ContractionPlusSmoothing, CustomTable };

std::string to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(const std::string& name);

struct OperatorSpec {
    OperatorKind kind = OperatorKind::AffineContraction;
    SpacePtr space;
    double lambda = 0.0;
    Vector shift;
    double kernel_width = 0.0;
    double strength = 0.0;
    std::vector<std::pair<Vector, Vector>> table;
};

OperatorSpec make_affine_contraction(SpacePtr space, double lambda, Vector shift);
OperatorSpec make_contraction_plus_smoothing(SpacePtr space, double lambda, Vector shift,
                                             double kernel_width, double strength);
OperatorSpec make_custom_table(SpacePtr space, std::vector<std::pair<Vector, Vector>> table);

Vector apply_operator(const OperatorSpec& op, const Vector& x);
PointCloud apply_operator(const OperatorSpec& op, const PointCloud& m);

/// Sup-norm gain of the smoothing part: strength * max_i sum_j G_ij.
double smoothing_gain(const OperatorSpec& op);
/// lambda + smoothing gain; a Lipschitz bound in the unit-caps gauge metric.
double lipschitz_bound(const OperatorSpec& op);

/// gamma_hat = max over trials of upper(F(M)) / lower(M): an upper estimate
/// of the contraction ratio of the covering bounds on the tested sets, not a
/// proof about all bounded sets. Trials whose lower bound is zero at the grid
/// resolution are skipped with a warning.
struct UpperCharEstimate {
    double gamma_hat = 0.0;
    double max_slack = 0.0; // max over used trials of upper/lower - 1
    struct Trial {
        double lower_source = 0.0;
        double upper_source = 0.0;
        double upper_image = 0.0;
        double ratio = 0.0;
        bool skipped = false;
        std::string note;
    };
    std::vector<Trial> trials;
    int witness = -1;
};
UpperCharEstimate estimate_upper_char(const OperatorSpec& op, const FNormMetric& metric,
                                      const std::vector<PointCloud>& trial_sets,
                                      const std::vector<double>& eps_grid,
                                      std::size_t net_budget);

/// Interval-honest condensing classification per trial: condensing only when
/// upper(F(M)) < lower(M); not condensing when the image bounds dominate the
/// source bounds; inconclusive when the intervals overlap.
enum class CondensingVerdict { Condensing, NotCondensing, Inconclusive };
std::string to_string(CondensingVerdict v);

struct SadovskiiReport {
    struct Trial {
        CondensingVerdict verdict = CondensingVerdict::Inconclusive;
        double lower_source = 0.0, upper_source = 0.0;
        double lower_image = 0.0, upper_image = 0.0;
        double slack_ratio = 0.0; // upper_source / lower_source
        bool skipped = false;
    };
    std::vector<Trial> trials;
};
SadovskiiReport sadovskii_check(const OperatorSpec& op, const FNormMetric& metric,
                                const std::vector<PointCloud>& trial_sets,
                                const std::vector<double>& eps_grid, std::size_t net_budget);

struct DarboOptions {
    double tol = 1e-6;
    int max_iter = 60;
    int resolution = 2;
    std::size_t hull_budget = 200000;
    std::size_t cloud_budget = 64;  // farthest-point thinning target
    std::size_t net_budget = 8;
    std::vector<double> eps_grid;   // for the per-iteration alpha bounds
    double invariance_tol = 1e-7;
    double transfer_eps_factor = 0.05; // extra net radius per transfer step, relative
};

/// Per-iteration record of the condensing iteration
/// M_{n+1} = thin(hull_sample(F(M_n), resolution)), followed by plain point
/// iteration from the final barycenter. The residual is recomputed at emit.
struct DarboTrace {
    struct Iteration {
        int n = 0;
        std::size_t cloud_size = 0;
        double alpha_lower = 0.0;
        double alpha_upper = 0.0;      // min(greedy bound, transferred certificate)
        double alpha_upper_greedy = 0.0;
        double alpha_upper_transfer = 0.0;
        double diameter = 0.0;
        double grid_gap = 0.0;         // transfer eps + thinning radius
        double thin_radius = 0.0;
        double nesting_violation = 0.0;
    };
    std::vector<Iteration> iterations;
    Vector x_star;
    double residual = 0.0;
    int plain_steps = 0;
    bool converged = false;
    bool invariance_ok = false;
    double invariance_margin = 0.0;
};
DarboTrace darbo_solve(const OperatorSpec& op, const FNormMetric& metric, const PointCloud& m0,
                       const DarboOptions& options);

/// Independent oracle: plain iteration x <- F(x) for `steps` steps.
Vector plain_iteration(const OperatorSpec& op, Vector x, int steps);

} // namespace fmnc
