#include "fmnc/report.hpp"

#include <cstdio>
#include <sstream>

namespace fmnc {

CheckResult assert_check(std::string id, double margin, double tolerance, json details) {
    CheckResult r;
    r.id = std::move(id);
    r.kind = "assert";
    r.margin = margin;
    r.tolerance = tolerance;
    r.verdict = margin <= tolerance ? "pass" : "fail";
    r.details = std::move(details);
    return r;
}

CheckResult report_check(std::string id, double margin, json details) {
    CheckResult r;
    r.id = std::move(id);
    r.kind = "report";
    r.margin = margin;
    r.tolerance = 0.0;
    r.verdict = "report";
    r.details = std::move(details);
    return r;
}

bool SuiteReport::all_passed() const {
    for (const CheckResult& c : checks)
        if (c.verdict == "fail") return false;
    return true;
}

const CheckResult* SuiteReport::first_failure() const {
    for (const CheckResult& c : checks)
        if (c.verdict == "fail") return &c;
    return nullptr;
}

json suite_report_to_json(const SuiteReport& report) {
    json checks = json::array();
    int pass = 0, fail = 0, info = 0;
    for (const CheckResult& c : report.checks) {
        checks.push_back(json{{"id", c.id},
                              {"kind", c.kind},
                              {"margin", c.margin},
                              {"tolerance", c.tolerance},
                              {"verdict", c.verdict},
                              {"details", c.details}});
        if (c.verdict == "pass") ++pass;
        else if (c.verdict == "fail") ++fail;
        else ++info;
    }
    return json{{"suite", report.suite},
                {"seed", report.seed},
                {"budget", report.budget},
                {"checks", checks},
                {"counts", json{{"pass", pass}, {"fail", fail}, {"report", info}}},
                {"verdict", report.all_passed() ? "pass" : "fail"}};
}

namespace {

void require_field(const json& j, const char* key, json::value_t type, const char* where) {
    if (!j.contains(key))
        throw std::invalid_argument(std::string("report schema: missing '") + key + "' in " + where);
    const json& v = j.at(key);
    const bool numeric_ok = type == json::value_t::number_float &&
                            (v.is_number_float() || v.is_number_integer() ||
                             v.is_number_unsigned());
    const bool integer_ok = type == json::value_t::number_unsigned && v.is_number();
    if (v.type() != type && !numeric_ok && !integer_ok)
        throw std::invalid_argument(std::string("report schema: bad type for '") + key + "' in " +
                                    where);
}

} // namespace

void validate_suite_report_schema(const json& j) {
    require_field(j, "suite", json::value_t::string, "report");
    require_field(j, "seed", json::value_t::number_unsigned, "report");
    require_field(j, "budget", json::value_t::number_unsigned, "report");
    require_field(j, "verdict", json::value_t::string, "report");
    require_field(j, "checks", json::value_t::array, "report");
    require_field(j, "counts", json::value_t::object, "report");
    int pass = 0, fail = 0, info = 0;
    for (const json& c : j.at("checks")) {
        require_field(c, "id", json::value_t::string, "check");
        require_field(c, "kind", json::value_t::string, "check");
        require_field(c, "margin", json::value_t::number_float, "check");
        require_field(c, "tolerance", json::value_t::number_float, "check");
        require_field(c, "verdict", json::value_t::string, "check");
        require_field(c, "details", json::value_t::object, "check");
        const std::string verdict = c.at("verdict").get<std::string>();
        if (verdict == "pass") ++pass;
        else if (verdict == "fail") ++fail;
        else if (verdict == "report") ++info;
        else throw std::invalid_argument("report schema: unknown verdict " + verdict);
    }
    const json& counts = j.at("counts");
    if (counts.at("pass") != pass || counts.at("fail") != fail || counts.at("report") != info)
        throw std::invalid_argument("report schema: counts do not match the checks");
    const std::string overall = j.at("verdict").get<std::string>();
    if (overall != (fail == 0 ? "pass" : "fail"))
        throw std::invalid_argument("report schema: overall verdict inconsistent");
}

std::string suite_report_to_csv(const SuiteReport& report) {
    std::ostringstream out;
    out << "check,margin,tolerance,verdict\n";
    for (const CheckResult& c : report.checks) {
        char margin[40], tol[40];
        std::snprintf(margin, sizeof(margin), "%.17g", c.margin);
        std::snprintf(tol, sizeof(tol), "%.17g", c.tolerance);
        out << c.id << ',' << margin << ',' << tol << ',' << c.verdict << '\n';
    }
    return out.str();
}

} // namespace fmnc
