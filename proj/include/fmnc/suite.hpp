#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fmnc/fixedpoint.hpp"
#include "fmnc/metric.hpp"
#include "fmnc/report.hpp"
#include "fmnc/space.hpp"

namespace fmnc {

/// Raised for unusable configuration or input files; the CLI maps it to
/// exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SuiteConfig {
    std::uint64_t seed = 42;
    std::size_t hull_budget = 200000;
    std::string models_dir; // optional: load space descriptors instead of the shipped set
};

/// The locally convex models every metric-level check runs against.
std::vector<SpacePtr> shipped_models();
/// The non-locally-convex counterexample space.
SpacePtr shipped_lp_space();

FNormMetric shipped_metric(const SpacePtr& space, MetricMode mode);

/// Max over k of p_k(e)/caps for a unit-amplitude coordinate box; used to
/// scale samples into the dyadic interior.
double gauge_amp_factor(const SpaceModel& space);

/// Fixtures for the condensing solver checks (c-grid dim 16).
SpacePtr darbo_space();
OperatorSpec darbo_operator(const SpacePtr& space);
PointCloud darbo_start_cloud(const OperatorSpec& op);
DarboOptions darbo_options();

std::vector<std::string> suite_names();
bool is_suite_name(const std::string& name);

SuiteReport run_suite(const std::string& name, const SuiteConfig& config);

} // namespace fmnc
