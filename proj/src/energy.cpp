#include "gammalim/energy.hpp"

#include <algorithm>
#include <cmath>

#include "gammalim/errors.hpp"

namespace gammalim {

double cell_weight(double a, double b) {
    if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) return 0.0;
    const double m = std::min(std::abs(a), std::abs(b));
    return m * m;
}

EnergyReport energy_smm(const Field& v, double eps, const Potential& p) {
    if (!(eps > 0.0)) throw ArgumentError("eps must be positive");
    const Mesh& mesh = v.mesh();
    const double h = mesh.spacing();
    double grad = 0.0;
    for (std::size_t k = 0; k < mesh.cells(); ++k) {
        const double d = v[mesh.next(k)] - v[k];
        grad += d * d;
    }
    double pot = 0.0;
    for (std::size_t k = 0; k < mesh.size(); ++k) pot += mesh.weight(k) * p.F(v[k]);
    EnergyReport r;
    r.gradient = 0.5 * eps * grad / h;
    r.potential = 0.5 * pot / eps;
    r.total = r.gradient + r.potential;
    return r;
}

EnergyReport energy_smm_b(const Field& v, double eps, const Potential& p, std::span<const PointPenalty> penalties) {
    const Domain1D& dom = v.mesh().domain();
    for (const auto& pen : penalties) {
        if (!dom.is_interior(pen.location)) throw DomainError("penalty location must lie in the interior of the domain");
        if (!(pen.weight >= 0.0)) throw ArgumentError("penalty weight must be nonnegative");
    }
    EnergyReport r = energy_smm(v, eps, p);
    for (const auto& pen : penalties) {
        const double value = v.at(pen.location);
        r.penalty += pen.weight * value * value;
    }
    r.total = r.gradient + r.potential + r.penalty;
    return r;
}

double weighted_tv(const Field& u, const Field& v, double sigma) {
    require_same_mesh(u, v, "weighted_tv");
    if (!(sigma >= 0.0)) throw ArgumentError("sigma must be nonnegative");
    const Mesh& mesh = u.mesh();
    double acc = 0.0;
    for (std::size_t k = 0; k < mesh.cells(); ++k) {
        const std::size_t j = mesh.next(k);
        acc += cell_weight(v[k], v[j]) * std::abs(u[j] - u[k]);
    }
    return sigma * acc;
}

EnergyReport energy_kwc(const Field& u, const Field& v, double eps, double sigma, const Potential& p, double lambda,
                        const Field* g) {
    if (!(lambda >= 0.0)) throw ArgumentError("lambda must be nonnegative");
    if (lambda > 0.0 && g == nullptr) throw ArgumentError("a fidelity datum g is required when lambda > 0");
    EnergyReport r = energy_smm(v, eps, p);
    r.weighted_tv = weighted_tv(u, v, sigma);
    if (lambda > 0.0) {
        require_same_mesh(u, *g, "energy_kwc");
        const Mesh& mesh = u.mesh();
        double acc = 0.0;
        for (std::size_t k = 0; k < mesh.size(); ++k) {
            const double d = u[k] - (*g)[k];
            acc += mesh.weight(k) * d * d;
        }
        r.fidelity = lambda * acc;
    }
    r.total = r.weighted_tv + r.smm() + r.fidelity;
    return r;
}

double total_variation(const Field& u) {
    const Mesh& mesh = u.mesh();
    double acc = 0.0;
    for (std::size_t k = 0; k < mesh.cells(); ++k) acc += std::abs(u[mesh.next(k)] - u[k]);
    return acc;
}

double modica_mortola_lower_bound(const Field& v, const Potential& p) {
    const Mesh& mesh = v.mesh();
    double acc = 0.0;
    for (std::size_t k = 0; k < mesh.cells(); ++k) acc += std::abs(p.G(v[mesh.next(k)]) - p.G(v[k]));
    return acc;
}

}  // namespace gammalim
