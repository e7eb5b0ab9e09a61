#include "gammalim/setvalued.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gammalim/errors.hpp"
#include "json_util.hpp"

namespace gammalim {

SetValuedLimit::SetValuedLimit(Domain1D domain, std::vector<ExceptionalPoint> exceptional)
    : domain_(domain), exceptional_(std::move(exceptional)) {
    for (auto& e : exceptional_) {
        if (!std::isfinite(e.x) || !std::isfinite(e.lo) || !std::isfinite(e.hi))
            throw ArgumentError("exceptional point with non-finite data");
        if (!domain_.contains(e.x)) throw DomainError("exceptional point outside the domain");
        if (!(e.lo <= 1.0 && 1.0 <= e.hi)) throw ArgumentError("exceptional value must contain 1");
        if (!(e.lo < e.hi)) throw ArgumentError("exceptional value must be a nondegenerate interval");
        e.x = domain_.wrap(e.x);
    }
    for (std::size_t i = 0; i < exceptional_.size(); ++i)
        for (std::size_t j = i + 1; j < exceptional_.size(); ++j)
            if (domain_.distance(exceptional_[i].x, exceptional_[j].x) == 0.0)
                throw ArgumentError("exceptional points must be distinct");
}

double SetValuedLimit::min_at(double x, double snap) const {
    for (const auto& e : exceptional_)
        if (domain_.distance(e.x, x) <= snap) return e.lo;
    return 1.0;
}

SetValuedLimit parse_set_valued_limit(std::string_view text) {
    const auto j = detail::parse_json(text, "set-valued limit");
    try {
        if (!j.is_object()) throw ConfigError("set-valued limit: expected an object");
        for (const auto& [key, value] : j.items())
            if (key != "domain" && key != "exceptional") throw ConfigError("set-valued limit: unknown key `" + key + "`");
        const Domain1D domain = detail::domain_from_json(j.at("domain"));
        std::vector<ExceptionalPoint> pts;
        if (j.contains("exceptional")) {
            for (const auto& e : j.at("exceptional"))
                pts.push_back({e.at("x").get<double>(), e.at("lo").get<double>(), e.at("hi").get<double>()});
        }
        return SetValuedLimit(domain, std::move(pts));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("set-valued limit: ") + e.what());
    }
}

std::string to_json(const SetValuedLimit& xi) {
    nlohmann::json j;
    j["domain"] = detail::domain_to_json(xi.domain());
    j["exceptional"] = nlohmann::json::array();
    for (const auto& e : xi.exceptional()) j["exceptional"].push_back({{"x", e.x}, {"lo", e.lo}, {"hi", e.hi}});
    return j.dump();
}

namespace {

void require_resolution(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ArgumentError("resolution must be positive");
}

void sample_segment(std::vector<GraphPoint>& out, GraphPoint a, GraphPoint b, double resolution, bool include_end) {
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / resolution)));
    for (std::size_t i = 0; i < m; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(m);
        out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
    if (include_end) out.push_back(b);
}

}  // namespace

GraphSet graph_of_field(const Field& u, double resolution) {
    require_resolution(resolution);
    const Mesh& mesh = u.mesh();
    GraphSet g{mesh.domain(), {}, resolution};
    for (std::size_t k = 0; k < mesh.cells(); ++k) {
        const std::size_t j = mesh.next(k);
        const double xr = j == 0 ? mesh.domain().right() : mesh.node(j);
        sample_segment(g.points, {mesh.node(k), u[k]}, {xr, u[j]}, resolution, false);
    }
    if (!mesh.domain().is_torus()) g.points.push_back({mesh.node(mesh.size() - 1), u[mesh.size() - 1]});
    for (auto& p : g.points) p.x = mesh.domain().wrap(p.x);
    return g;
}

GraphSet graph_of_limit(const SetValuedLimit& xi, double resolution) {
    require_resolution(resolution);
    const Domain1D& dom = xi.domain();
    GraphSet g{dom, {}, resolution};
    sample_segment(g.points, {dom.left(), 1.0}, {dom.right(), 1.0}, resolution, !dom.is_torus());
    for (const auto& e : xi.exceptional()) sample_segment(g.points, {e.x, e.lo}, {e.x, e.hi}, resolution, true);
    return g;
}

double squared_distance(const Domain1D& domain, const GraphPoint& a, const GraphPoint& b) {
    const double dx = domain.distance(a.x, b.x);
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

double directed_hausdorff(const GraphSet& from, const GraphSet& to) {
    if (!(from.domain == to.domain)) throw ArgumentError("hausdorff: graphs live on different domains");
    if (from.points.empty() || to.points.empty()) throw ArgumentError("hausdorff: empty graph sample");
    const Domain1D& dom = to.domain;
    const bool torus = dom.is_torus();

    std::vector<GraphPoint> sorted = to.points;
    std::sort(sorted.begin(), sorted.end(), [](const GraphPoint& a, const GraphPoint& b) { return a.x < b.x; });
    const std::size_t n = sorted.size();
    // Offsets only prune; the slack keeps rounding in the offset from pruning a candidate.
    constexpr double kSlack = 1e-12;
    auto prune = [](double offset, double best) {
        const double lb = std::max(offset - kSlack, 0.0);
        return lb * lb > best;
    };

    double result = 0.0;
    for (const auto& a : from.points) {
        double best = std::numeric_limits<double>::infinity();
        const auto it = std::lower_bound(sorted.begin(), sorted.end(), a.x,
                                         [](const GraphPoint& p, double x) { return p.x < x; });
        const std::size_t start = static_cast<std::size_t>(it - sorted.begin());
        for (std::size_t step = 0; step < n; ++step) {
            const std::size_t i = torus ? (start + step) % n : start + step;
            if (!torus && i >= n) break;
            double offset = sorted[i].x - a.x;
            if (torus) {
                offset -= std::floor(offset);
                if (offset > 0.5 + kSlack) break;
            }
            if (prune(offset, best)) break;
            best = std::min(best, squared_distance(dom, a, sorted[i]));
        }
        for (std::size_t step = 1; step <= n; ++step) {
            if (!torus && step > start) break;
            const std::size_t i = torus ? (start + n - step % n) % n : start - step;
            double offset = a.x - sorted[i].x;
            if (torus) {
                offset -= std::floor(offset);
                if (offset > 0.5 + kSlack) break;
            }
            if (prune(offset, best)) break;
            best = std::min(best, squared_distance(dom, a, sorted[i]));
        }
        result = std::max(result, best);
    }
    return std::sqrt(result);
}

double hausdorff(const GraphSet& a, const GraphSet& b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double graph_distance(const Field& u, const SetValuedLimit& xi, double resolution) {
    if (!(u.mesh().domain() == xi.domain())) throw ArgumentError("graph_distance: field and limit differ in domain");
    return hausdorff(graph_of_field(u, resolution), graph_of_limit(xi, resolution));
}

}  // namespace gammalim
