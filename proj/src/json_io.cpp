#include "fmnc/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fmnc {

json space_to_json(const SpaceModel& space) {
    json params = json::object();
    switch (space.kind) {
    case SpaceKind::CGrid: params["step"] = space.step; break;
    case SpaceKind::SeqProduct: params["blocks"] = space.blocks; break;
    case SpaceKind::LpGrid:
        params["p"] = space.exponent;
        params["step"] = space.step;
        break;
    }
    return json{{"kind", to_string(space.kind)},
                {"dim", space.dim},
                {"m", space.seminorm_count},
                {"params", params}};
}

SpacePtr space_from_json(const json& j) {
    const SpaceKind kind = space_kind_from_string(j.at("kind").get<std::string>());
    const int dim = j.at("dim").get<int>();
    const int m = j.at("m").get<int>();
    const json& params = j.at("params");
    switch (kind) {
    case SpaceKind::CGrid:
        return make_space_cgrid(dim, m, params.at("step").get<double>());
    case SpaceKind::SeqProduct: {
        auto blocks = params.at("blocks").get<std::vector<int>>();
        if (static_cast<int>(blocks.size()) != m)
            throw std::invalid_argument("seq-product descriptor: m must equal the block count");
        return make_space_seq_product(dim, std::move(blocks));
    }
    case SpaceKind::LpGrid:
        if (m != 1) throw std::invalid_argument("lp-grid has a single functional (m = 1)");
        return make_space_lp_grid(dim, params.at("p").get<double>(), params.at("step").get<double>());
    }
    throw std::logic_error("unknown space kind");
}

json cloud_to_json(const PointCloud& cloud) {
    json points = json::array();
    for (const Vector& p : cloud.points) points.push_back(p.coords);
    return json{{"space", space_to_json(*cloud.space)}, {"points", points}, {"label", cloud.label}};
}

PointCloud cloud_from_json(const json& j) {
    PointCloud cloud(space_from_json(j.at("space")));
    if (j.contains("label")) cloud.label = j.at("label").get<std::string>();
    for (const json& row : j.at("points"))
        cloud.points.emplace_back(cloud.space, row.get<std::vector<double>>());
    return cloud;
}

json operator_to_json(const OperatorSpec& op) {
    json j{{"kind", to_string(op.kind)}, {"lambda", op.lambda}};
    if (op.kind != OperatorKind::CustomTable) j["shift"] = op.shift.coords;
    if (op.kind == OperatorKind::ContractionPlusSmoothing) {
        j["kernel_width"] = op.kernel_width;
        j["strength"] = op.strength;
    }
    if (op.kind == OperatorKind::CustomTable) {
        json table = json::array();
        for (const auto& [in, out] : op.table) table.push_back({in.coords, out.coords});
        j["table"] = table;
    }
    return j;
}

OperatorSpec operator_from_json(const json& j, const SpacePtr& space) {
    const OperatorKind kind = operator_kind_from_string(j.at("kind").get<std::string>());
    switch (kind) {
    case OperatorKind::AffineContraction:
        return make_affine_contraction(space, j.at("lambda").get<double>(),
                                       Vector(space, j.at("shift").get<std::vector<double>>()));
    case OperatorKind::ContractionPlusSmoothing:
        return make_contraction_plus_smoothing(
            space, j.at("lambda").get<double>(),
            Vector(space, j.at("shift").get<std::vector<double>>()),
            j.at("kernel_width").get<double>(), j.value("strength", 1.0));
    case OperatorKind::CustomTable: {
        std::vector<std::pair<Vector, Vector>> table;
        for (const json& row : j.at("table"))
            table.emplace_back(Vector(space, row.at(0).get<std::vector<double>>()),
                               Vector(space, row.at(1).get<std::vector<double>>()));
        return make_custom_table(space, std::move(table));
    }
    }
    throw std::logic_error("unknown operator kind");
}

json net_certificate_to_json(const NetCertificate& cert) {
    json centers = json::array();
    for (const Vector& c : cert.centers.points) centers.push_back(c.coords);
    json assignments = json::array();
    for (const auto& a : cert.assignments) assignments.push_back({a.center, a.distance});
    return json{{"eps", cert.eps},
                {"centers", centers},
                {"assignments", assignments},
                {"complete", cert.complete}};
}

json alpha_bounds_to_json(const AlphaBounds& bounds) {
    json profile = json::array();
    for (const auto& p : bounds.profile)
        profile.push_back(
            {{"eps", p.eps}, {"net_size", p.net_size}, {"packing_count", p.packing_count}});
    json j{{"lower", bounds.lower},
           {"upper", bounds.upper_attained ? json(bounds.upper) : json()},
           {"eps_grid", bounds.eps_grid},
           {"profile", profile}};
    j["net_budget"] = bounds.net_budget == kUnlimitedNetBudget
                          ? json()
                          : json(bounds.net_budget);
    if (bounds.upper_witness) j["net"] = net_certificate_to_json(*bounds.upper_witness);
    if (bounds.lower_witness)
        j["packing"] = json{{"eps", bounds.lower_witness->eps},
                            {"indices", bounds.lower_witness->indices}};
    return j;
}

json darbo_trace_to_json(const DarboTrace& trace) {
    json iters = json::array();
    for (const auto& it : trace.iterations)
        iters.push_back({{"n", it.n},
                         {"cloud_size", it.cloud_size},
                         {"alpha_lower", it.alpha_lower},
                         {"alpha_upper", it.alpha_upper},
                         {"alpha_upper_greedy", it.alpha_upper_greedy},
                         {"alpha_upper_transfer", it.alpha_upper_transfer},
                         {"diameter", it.diameter},
                         {"grid_gap", it.grid_gap},
                         {"thin_radius", it.thin_radius},
                         {"nesting_violation", it.nesting_violation}});
    return json{{"iterations", iters},
                {"x_star", trace.x_star.coords},
                {"residual", trace.residual},
                {"plain_steps", trace.plain_steps},
                {"converged", trace.converged},
                {"invariance_ok", trace.invariance_ok},
                {"invariance_margin", trace.invariance_margin}};
}

namespace {

void dump_canonical(const json& j, std::string& out) {
    switch (j.type()) {
    case json::value_t::object: {
        out += '{';
        bool first = true;
        for (auto it = j.cbegin(); it != j.cend(); ++it) { // nlohmann objects iterate sorted
            if (!first) out += ',';
            first = false;
            out += json(it.key()).dump();
            out += ':';
            dump_canonical(it.value(), out);
        }
        out += '}';
        break;
    }
    case json::value_t::array: {
        out += '[';
        bool first = true;
        for (const json& v : j) {
            if (!first) out += ',';
            first = false;
            dump_canonical(v, out);
        }
        out += ']';
        break;
    }
    case json::value_t::number_float: {
        const double v = j.get<double>();
        if (!std::isfinite(v)) throw std::invalid_argument("canonical JSON cannot hold non-finite numbers");
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out += buf;
        break;
    }
    default:
        out += j.dump();
        break;
    }
}

} // namespace

std::string canonical_json(const json& j) {
    std::string out;
    dump_canonical(j, out);
    out += '\n';
    return out;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("cannot parse JSON from " + path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

} // namespace fmnc
