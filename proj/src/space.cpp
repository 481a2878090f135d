#include "fmnc/space.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fmnc {

std::string to_string(SpaceKind kind) {
    switch (kind) {
    case SpaceKind::CGrid: return "c-grid";
    case SpaceKind::SeqProduct: return "seq-product";
    case SpaceKind::LpGrid: return "lp-grid";
    }
    throw std::logic_error("unknown space kind");
}

SpaceKind space_kind_from_string(const std::string& name) {
    if (name == "c-grid") return SpaceKind::CGrid;
    if (name == "seq-product") return SpaceKind::SeqProduct;
    if (name == "lp-grid") return SpaceKind::LpGrid;
    throw std::invalid_argument("unknown space kind: " + name);
}

int SpaceModel::prefix_len(int k) const {
    // ceil(k * dim / m) without floating point
    return (k * dim + seminorm_count - 1) / seminorm_count;
}

std::pair<int, int> SpaceModel::block_range(int k) const {
    int first = 0;
    for (int i = 0; i + 1 < k; ++i) first += blocks[static_cast<std::size_t>(i)];
    return {first, first + blocks[static_cast<std::size_t>(k - 1)]};
}

namespace {

void validate_common(int dim, int m) {
    if (dim < 1) throw std::invalid_argument("space dim must be >= 1");
    if (m < 1) throw std::invalid_argument("seminorm count must be >= 1");
    if (dim < m) throw std::invalid_argument("space requires dim >= seminorm count");
}

} // namespace

SpacePtr make_space_cgrid(int dim, int m, double step) {
    validate_common(dim, m);
    if (!(step > 0.0)) throw std::invalid_argument("c-grid step must be positive");
    auto s = std::make_shared<SpaceModel>();
    s->kind = SpaceKind::CGrid;
    s->dim = dim;
    s->seminorm_count = m;
    s->step = step;
    return s;
}

SpacePtr make_space_seq_product(int dim, std::vector<int> blocks) {
    const int m = static_cast<int>(blocks.size());
    validate_common(dim, m);
    int total = 0;
    for (int b : blocks) {
        if (b < 1) throw std::invalid_argument("seq-product blocks must be positive");
        total += b;
    }
    if (total != dim) throw std::invalid_argument("seq-product blocks must sum to dim");
    auto s = std::make_shared<SpaceModel>();
    s->kind = SpaceKind::SeqProduct;
    s->dim = dim;
    s->seminorm_count = m;
    s->blocks = std::move(blocks);
    return s;
}

SpacePtr make_space_lp_grid(int dim, double p, double step) {
    validate_common(dim, 1);
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("lp-grid exponent must be in (0, 1]");
    if (!(step > 0.0)) throw std::invalid_argument("lp-grid step must be positive");
    auto s = std::make_shared<SpaceModel>();
    s->kind = SpaceKind::LpGrid;
    s->dim = dim;
    s->seminorm_count = 1;
    s->step = step;
    s->exponent = p;
    return s;
}

double seminorm_eval(const SpaceModel& space, int k, std::span<const double> x) {
    if (k < 1 || k > space.seminorm_count) throw std::out_of_range("seminorm index out of range");
    if (static_cast<int>(x.size()) != space.dim) throw std::invalid_argument("vector size does not match space dim");
    switch (space.kind) {
    case SpaceKind::CGrid: {
        const int n = space.prefix_len(k);
        double best = 0.0;
        for (int i = 0; i < n; ++i) best = std::max(best, std::abs(x[static_cast<std::size_t>(i)]));
        return best;
    }
    case SpaceKind::SeqProduct: {
        auto [first, last] = space.block_range(k);
        double sum = 0.0;
        for (int i = first; i < last; ++i) sum += std::abs(x[static_cast<std::size_t>(i)]);
        return sum;
    }
    case SpaceKind::LpGrid: {
        double sum = 0.0;
        for (double c : x) sum += std::pow(std::abs(c), space.exponent);
        return sum * space.step;
    }
    }
    throw std::logic_error("unknown space kind");
}

Vector::Vector(SpacePtr s, std::vector<double> c) : space(std::move(s)), coords(std::move(c)) {
    if (!space) throw std::invalid_argument("vector requires a space");
    if (static_cast<int>(coords.size()) != space->dim)
        throw std::invalid_argument("vector size does not match space dim");
    for (double v : coords)
        if (!std::isfinite(v)) throw std::invalid_argument("vector coordinates must be finite");
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

void require_same_space(const Vector& a, const Vector& b) {
    if (!same_space(a.space, b.space)) throw std::invalid_argument("space mismatch");
}

Vector zero_vector(const SpacePtr& space) {
    if (!space) throw std::invalid_argument("zero_vector requires a space");
    return Vector(space, std::vector<double>(static_cast<std::size_t>(space->dim), 0.0));
}

Vector add(const Vector& a, const Vector& b) {
    require_same_space(a, b);
    std::vector<double> c(a.coords.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords[i] + b.coords[i];
    return Vector(a.space, std::move(c));
}

Vector sub(const Vector& a, const Vector& b) {
    require_same_space(a, b);
    std::vector<double> c(a.coords.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords[i] - b.coords[i];
    return Vector(a.space, std::move(c));
}

Vector scale(double lambda, const Vector& x) {
    if (!std::isfinite(lambda)) throw std::invalid_argument("scale factor must be finite");
    std::vector<double> c(x.coords.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = lambda * x.coords[i];
    return Vector(x.space, std::move(c));
}

double seminorm_eval(const Vector& x, int k) {
    return seminorm_eval(*x.space, k, x.coords);
}

void PointCloud::push_back(Vector v) {
    if (!space) space = v.space;
    if (!same_space(space, v.space)) throw std::invalid_argument("cloud points must share one space");
    points.push_back(std::move(v));
}

PointCloud translate_cloud(const PointCloud& m, const Vector& z) {
    PointCloud out(m.space, m.label);
    out.points.reserve(m.size());
    for (const Vector& p : m.points) out.points.push_back(add(p, z));
    return out;
}

PointCloud scale_cloud(double lambda, const PointCloud& m) {
    PointCloud out(m.space, m.label);
    out.points.reserve(m.size());
    for (const Vector& p : m.points) out.points.push_back(scale(lambda, p));
    return out;
}

PointCloud minkowski_sum(const PointCloud& a, const PointCloud& b) {
    if (!same_space(a.space, b.space)) throw std::invalid_argument("space mismatch");
    PointCloud out(a.space, a.label + "+" + b.label);
    out.points.reserve(a.size() * b.size());
    for (const Vector& p : a.points)
        for (const Vector& q : b.points) out.points.push_back(add(p, q));
    return out;
}

PointCloud union_cloud(const PointCloud& a, const PointCloud& b) {
    if (!same_space(a.space, b.space)) throw std::invalid_argument("space mismatch");
    PointCloud out(a.space, a.label + "|" + b.label);
    out.points = a.points;
    out.points.insert(out.points.end(), b.points.begin(), b.points.end());
    return out;
}

Vector barycenter(const PointCloud& m) {
    if (m.empty()) throw std::invalid_argument("barycenter of empty cloud");
    std::vector<double> c(static_cast<std::size_t>(m.space->dim), 0.0);
    for (const Vector& p : m.points)
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += p.coords[i];
    const double inv = 1.0 / static_cast<double>(m.size());
    for (double& v : c) v *= inv;
    return Vector(m.space, std::move(c));
}

Vector sample_vector(const SpacePtr& space, Rng& rng, double amp) {
    std::vector<double> c(static_cast<std::size_t>(space->dim));
    for (double& v : c) v = rng.dyadic(amp);
    return Vector(space, std::move(c));
}

PointCloud sample_cloud(const SpacePtr& space, Rng& rng, int n, double amp, std::string label) {
    PointCloud out(space, std::move(label));
    out.points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.points.push_back(sample_vector(space, rng, amp));
    return out;
}

} // namespace fmnc
