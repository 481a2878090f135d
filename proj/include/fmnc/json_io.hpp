#pragma once

#include <string>

#include <json.hpp>

#include "fmnc/fixedpoint.hpp"
#include "fmnc/metric.hpp"
#include "fmnc/mnc.hpp"
#include "fmnc/space.hpp"

namespace fmnc {

using json = nlohmann::json;

// descriptors: {"kind","dim","m","params":{...}}
json space_to_json(const SpaceModel& space);
SpacePtr space_from_json(const json& j);

// {"space": descriptor, "points": [[...],...], "label": "..."}
json cloud_to_json(const PointCloud& cloud);
PointCloud cloud_from_json(const json& j);

// {"kind","lambda","shift","kernel_width","strength","table"}
json operator_to_json(const OperatorSpec& op);
OperatorSpec operator_from_json(const json& j, const SpacePtr& space);

json net_certificate_to_json(const NetCertificate& cert);
json alpha_bounds_to_json(const AlphaBounds& bounds);
json darbo_trace_to_json(const DarboTrace& trace);

/// Canonical serialization: keys sorted, doubles printed with 17 significant
/// digits, trailing newline. Two runs over equal values produce identical
/// bytes.
std::string canonical_json(const json& j);

json load_json_file(const std::string& path);       // throws with path context
void write_text_file(const std::string& path, const std::string& content);

} // namespace fmnc
