#include "gammalim/limits.hpp"

#include <algorithm>
#include <cmath>

#include "gammalim/errors.hpp"
#include "json_util.hpp"

namespace gammalim {

JumpFunction::JumpFunction(Domain1D domain, std::vector<Jump> jumps, double ac_tv, double left_value)
    : domain_(domain), jumps_(std::move(jumps)), ac_tv_(ac_tv), left_value_(left_value) {
    if (!(ac_tv_ >= 0.0) || !std::isfinite(ac_tv_)) throw ArgumentError("ac_tv must be a nonnegative number");
    for (auto& j : jumps_) {
        if (!domain_.is_interior(j.x)) throw DomainError("jump location must lie in the interior of the domain");
        if (!(j.d > 0.0) || !std::isfinite(j.d)) throw ArgumentError("jump size must be positive");
        j.x = domain_.wrap(j.x);
    }
    for (std::size_t a = 0; a < jumps_.size(); ++a)
        for (std::size_t b = a + 1; b < jumps_.size(); ++b)
            if (domain_.distance(jumps_[a].x, jumps_[b].x) == 0.0) throw ArgumentError("jump locations must be distinct");
}

JumpFunction parse_jump_function(std::string_view text, const Domain1D& domain) {
    const auto j = detail::parse_json(text, "jump function");
    try {
        std::vector<Jump> jumps;
        if (j.contains("jumps"))
            for (const auto& e : j.at("jumps")) jumps.push_back({e.at("x").get<double>(), e.at("d").get<double>()});
        return JumpFunction(domain, std::move(jumps), j.value("ac_tv", 0.0), j.value("left_value", 0.0));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("jump function: ") + e.what());
    }
}

double limit_energy_smm(const SetValuedLimit& xi, const Potential& p) {
    double acc = 0.0;
    for (const auto& e : xi.exceptional()) {
        const double gl = p.G(e.lo), gh = p.G(e.hi);
        const double kappa = xi.domain().is_boundary(e.x, kLocationSnap) ? 1.0 : 0.0;
        acc += 2.0 * (gl + gh) - kappa * std::max(gl, gh);
    }
    return acc;
}

double limit_energy_smm_b(const SetValuedLimit& xi, const Potential& p, std::span<const PointPenalty> penalties) {
    double acc = limit_energy_smm(xi, p);
    for (const auto& pen : penalties) {
        if (!xi.domain().is_interior(pen.location)) throw DomainError("penalty location must lie in the interior");
        if (!(pen.weight >= 0.0)) throw ArgumentError("penalty weight must be nonnegative");
        const double m = xi.min_at(pen.location, kLocationSnap);
        acc += pen.weight * m * m;
    }
    return acc;
}

double limit_energy_kwc(const JumpFunction& u, const SetValuedLimit& xi, double sigma, const Potential& p) {
    if (!(u.domain() == xi.domain())) throw ArgumentError("limit_energy_kwc: u and xi live on different domains");
    if (!(sigma >= 0.0)) throw ArgumentError("sigma must be nonnegative");
    double tv = u.ac_tv();
    for (const auto& j : u.jumps()) {
        const double m = xi.min_at(j.x, kLocationSnap);
        tv += j.d * m * m;
    }
    return sigma * tv + limit_energy_smm(xi, p);
}

PointwiseMinimum limit_pointwise_minimizer(double b, const Potential& p) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw ArgumentError("penalty weight must be a nonnegative number");
    if (p.is_quadratic()) return {1.0 / (1.0 + b), b / (1.0 + b)};
    auto phi = [&](double q) { return 2.0 * p.G(q) + b * q * q; };

    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = 0.0, hi = 1.0;
    double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
    double f1 = phi(x1), f2 = phi(x2);
    while (hi - lo > 1e-10) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = phi(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = phi(x2);
        }
    }
    double best = f1 <= f2 ? x1 : x2;
    double best_f = std::min(f1, f2);

    // Parabola through the final bracket.
    const double a = lo, c = hi, m = 0.5 * (lo + hi);
    const double fa = phi(a), fm = phi(m), fc = phi(c);
    const double denom = (m - a) * (fm - fc) - (m - c) * (fm - fa);
    if (denom != 0.0) {
        const double vertex = m - 0.5 * ((m - a) * (m - a) * (fm - fc) - (m - c) * (m - c) * (fm - fa)) / denom;
        if (vertex >= a && vertex <= c) {
            const double fv = phi(vertex);
            if (fv < best_f) {
                best = vertex;
                best_f = fv;
            }
        }
    }
    for (double end : {0.0, 1.0}) {
        const double fe = phi(end);
        if (fe < best_f) {
            best = end;
            best_f = fe;
        }
    }
    return {best, best_f};
}

}  // namespace gammalim
