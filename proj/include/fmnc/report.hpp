#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fmnc/json_io.hpp"

namespace fmnc {

/// One suite check. `kind` is "assert" (margin must stay within tolerance)
/// or "report" (recorded data, never a failure). Margins are worst-case over
/// the check's samples.
struct CheckResult {
    std::string id;
    std::string kind = "assert";
    double margin = 0.0;
    double tolerance = 0.0;
    std::string verdict; // pass | fail | report
    json details = json::object();
};

CheckResult assert_check(std::string id, double margin, double tolerance,
                         json details = json::object());
CheckResult report_check(std::string id, double margin, json details = json::object());

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::size_t budget = 0;
    std::vector<CheckResult> checks;

    bool all_passed() const;
    const CheckResult* first_failure() const;
};

json suite_report_to_json(const SuiteReport& report);
std::string suite_report_to_csv(const SuiteReport& report);

/// Structural schema check for serialized suite reports (required keys,
/// types, verdict values, count consistency). Throws on the first violation.
void validate_suite_report_schema(const json& j);

} // namespace fmnc
