#include "gammalim/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "tridiagonal.hpp"

namespace gammalim {

namespace {

void require_eps(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ArgumentError("eps must be positive");
}

// Tridiagonal part shared by the quadratic solve, the Hessian model and the gradient:
// (eps/h) * graph Laplacian plus the penalty quadratic forms.
detail::Tridiagonal dirichlet_with_penalties(const Mesh& mesh, double eps, std::span<const NodalPenalty> penalties) {
    const std::size_t n = mesh.size();
    const double stiff = eps / mesh.spacing();
    detail::Tridiagonal a;
    a.cyclic = mesh.domain().is_torus();
    a.diag.assign(n, 0.0);
    a.off.assign(a.cyclic ? n : n - 1, 0.0);
    for (std::size_t k = 0; k < mesh.cells(); ++k) {
        const std::size_t j = mesh.next(k);
        a.diag[k] += stiff;
        a.diag[j] += stiff;
        a.off[k] -= stiff;
    }
    for (const auto& pen : penalties) {
        const double b2 = 2.0 * pen.weight;
        if (pen.i == pen.j) {
            const double w = pen.wi + pen.wj;
            a.diag[pen.i] += b2 * w * w;
            continue;
        }
        a.diag[pen.i] += b2 * pen.wi * pen.wi;
        a.diag[pen.j] += b2 * pen.wj * pen.wj;
        // j is the right neighbour of i
        a.off[pen.i] += b2 * pen.wi * pen.wj;
    }
    return a;
}

double penalty_trace(const NodalPenalty& pen, std::span<const double> v) {
    return pen.i == pen.j ? (pen.wi + pen.wj) * v[pen.i] : pen.wi * v[pen.i] + pen.wj * v[pen.j];
}

double smm_b_energy(const Mesh& mesh, std::span<const double> v, double eps, const Potential& p,
                    std::span<const NodalPenalty> penalties) {
    double grad = 0.0;
    for (std::size_t k = 0; k < mesh.cells(); ++k) {
        const double d = v[mesh.next(k)] - v[k];
        grad += d * d;
    }
    double pot = 0.0;
    for (std::size_t k = 0; k < mesh.size(); ++k) pot += mesh.weight(k) * p.F(v[k]);
    double pen_sum = 0.0;
    for (const auto& pen : penalties) {
        const double tr = penalty_trace(pen, v);
        pen_sum += pen.weight * tr * tr;
    }
    return 0.5 * eps * grad / mesh.spacing() + 0.5 * pot / eps + pen_sum;
}

}  // namespace

ClosedFormMinimizer::ClosedFormMinimizer(double eps, double b) : eps_(eps), b_(b) {
    require_eps(eps);
    if (!(b >= 0.0)) throw ArgumentError("penalty weight must be nonnegative");
    q_ = std::exp(-2.0 / eps);
    denom_ = 1.0 - q_ * q_ + b * (1.0 + q_) * (1.0 + q_);
}

double ClosedFormMinimizer::operator()(double x) const {
    const double ax = std::abs(x);
    // b(-q - 1)/D e^{-|x|/eps} + b(-q - q^2)/D e^{|x|/eps}; the growing mode is
    // rewritten as -b(1 + q)/D e^{(|x| - 2)/eps} so that nothing overflows.
    const double decaying = -b_ * (1.0 + q_) / denom_ * std::exp(-ax / eps_);
    const double growing = -b_ * (1.0 + q_) / denom_ * std::exp((ax - 2.0) / eps_);
    return 1.0 + decaying + growing;
}

ClosedFormMinimizer closed_form_minimizer(double eps, double b) { return ClosedFormMinimizer(eps, b); }

std::vector<NodalPenalty> nodal_penalties(const Mesh& mesh, std::span<const PointPenalty> penalties) {
    std::vector<NodalPenalty> out;
    out.reserve(penalties.size());
    for (const auto& pen : penalties) {
        if (!mesh.domain().is_interior(pen.location))
            throw DomainError("penalty location must lie in the interior of the domain");
        if (!(pen.weight >= 0.0)) throw ArgumentError("penalty weight must be nonnegative");
        const auto loc = mesh.locate(pen.location);
        out.push_back({loc.left, loc.right, loc.left_weight, loc.left == loc.right ? 0.0 : 1.0 - loc.left_weight,
                       pen.weight});
    }
    return out;
}

Field minimize_smm_b_quadratic(const Mesh& mesh, double eps, std::span<const PointPenalty> penalties) {
    const auto nodal = nodal_penalties(mesh, penalties);
    return minimize_smm_b_quadratic(mesh, eps, std::span<const NodalPenalty>(nodal));
}

Field minimize_smm_b_quadratic(const Mesh& mesh, double eps, std::span<const NodalPenalty> penalties) {
    require_eps(eps);
    // Without an active penalty the minimizer is exactly v = 1.
    if (std::all_of(penalties.begin(), penalties.end(), [](const NodalPenalty& q) { return q.weight == 0.0; }))
        return Field::constant(mesh, 1.0);
    auto a = dirichlet_with_penalties(mesh, eps, penalties);
    std::vector<double> rhs(mesh.size());
    for (std::size_t k = 0; k < mesh.size(); ++k) {
        const double mass = mesh.weight(k) / eps;
        a.diag[k] += mass;
        rhs[k] = mass;
    }
    return Field(mesh, detail::solve(a, rhs));
}

std::vector<double> smm_b_gradient(const Field& v, double eps, const Potential& p,
                                   std::span<const NodalPenalty> penalties) {
    require_eps(eps);
    const Mesh& mesh = v.mesh();
    const auto a = dirichlet_with_penalties(mesh, eps, penalties);
    auto g = detail::multiply(a, v.values());
    for (std::size_t k = 0; k < mesh.size(); ++k) g[k] += 0.5 * mesh.weight(k) / eps * p.dF(v[k]);
    return g;
}

Field minimize_smm_b_general(const Mesh& mesh, double eps, const Potential& p, std::span<const PointPenalty> penalties,
                             const SolveOptions& opts) {
    const auto nodal = nodal_penalties(mesh, penalties);
    return minimize_smm_b_general(mesh, eps, p, std::span<const NodalPenalty>(nodal), opts, nullptr);
}

Field minimize_smm_b_general(const Mesh& mesh, double eps, const Potential& p, std::span<const NodalPenalty> penalties,
                             const SolveOptions& opts, const Field* initial) {
    require_eps(eps);
    if (opts.max_iterations < 1 || !(opts.tolerance > 0.0)) throw ArgumentError("invalid solve options");
    constexpr double kCurvatureFloor = 1e-4;
    constexpr double kArmijo = 1e-4;
    constexpr double kEnergyNoise = 64.0 * std::numeric_limits<double>::epsilon();

    std::vector<double> v = initial ? std::vector<double>(initial->values().begin(), initial->values().end())
                                    : std::vector<double>(mesh.size(), 1.0);
    if (initial) require_same_mesh(*initial, Field::constant(mesh, 1.0), "minimize_smm_b_general");

    const auto base = dirichlet_with_penalties(mesh, eps, penalties);
    auto energy = [&](std::span<const double> w) {
        for (double x : w)
            if (!p.in_range(x)) return std::numeric_limits<double>::infinity();
        return smm_b_energy(mesh, w, eps, p, penalties);
    };

    auto gradient = [&](std::span<const double> w) {
        auto g = detail::multiply(base, w);
        for (std::size_t k = 0; k < mesh.size(); ++k) g[k] += 0.5 * mesh.weight(k) / eps * p.dF(w[k]);
        return g;
    };
    auto sup = [](const std::vector<double>& g) {
        double m = 0.0;
        for (double x : g) m = std::max(m, std::abs(x));
        return m;
    };

    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.max_iterations; ++it) {
        const auto g = gradient(v);
        residual = sup(g);
        if (residual <= opts.tolerance) return Field(mesh, std::move(v));

        auto model = base;
        for (std::size_t k = 0; k < mesh.size(); ++k)
            model.diag[k] += 0.5 * mesh.weight(k) / eps * std::max(p.d2F(v[k]), kCurvatureFloor);
        auto step = detail::solve(model, g);
        for (double& s : step) s = -s;

        std::vector<double> trial(v.size());
        if (opts.step_rule == StepRule::fixed) {
            for (std::size_t k = 0; k < v.size(); ++k) trial[k] = v[k] + step[k];
            v.swap(trial);
            continue;
        }
        const double e0 = energy(v);
        const double slope = std::inner_product(g.begin(), g.end(), step.begin(), 0.0);
        double alpha = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
            for (std::size_t k = 0; k < v.size(); ++k) trial[k] = v[k] + alpha * step[k];
            const double e1 = energy(trial);
            if (e1 <= e0 + kArmijo * alpha * slope) {
                accepted = true;
                break;
            }
            // Near the minimum the energy change drowns in rounding; fall back to
            // requiring a smaller gradient.
            if (std::abs(e1 - e0) <= kEnergyNoise * std::abs(e0) && sup(gradient(trial)) < residual) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            throw ConvergenceError("line search stalled before reaching the gradient tolerance",
                                   Field(mesh, std::move(v)), it, residual);
        }
        v.swap(trial);
    }
    throw ConvergenceError("iteration cap reached", Field(mesh, std::move(v)), opts.max_iterations, residual);
}

std::vector<double> weighted_tv_chain(std::span<const double> g, std::span<const double> data_weight,
                                      std::span<const double> edge_weight) {
    const std::size_t n = g.size();
    if (n == 0) return {};
    if (data_weight.size() != n || edge_weight.size() + 1 != n) throw ArgumentError("weighted_tv_chain: size mismatch");
    for (double a : data_weight)
        if (!(a > 0.0)) throw ArgumentError("weighted_tv_chain: data weights must be positive");

    // Forward pass over derivatives of the partial value functions. Each
    // derivative is piecewise linear and increasing; a knot stores the jump of
    // (slope, offset) when crossing it from left to right.
    struct Knot {
        double x;
        double d_slope;
        double d_offset;
    };
    std::deque<Knot> knots;
    double al = 2.0 * data_weight[0], bl = -2.0 * data_weight[0] * g[0];
    double ar = al, br = bl;
    std::vector<double> lo(n - 1), hi(n - 1);

    auto root = [&]() {
        double a = al, b = bl;
        for (const auto& kn : knots) {
            if (a * kn.x + b >= 0.0) break;
            a += kn.d_slope;
            b += kn.d_offset;
        }
        return -b / a;
    };

    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double t = edge_weight[k];
        if (!(t > 0.0)) {
            lo[k] = hi[k] = root();
            knots.clear();
            al = ar = 0.0;
            bl = br = 0.0;
        } else {
            while (!knots.empty() && al * knots.front().x + bl <= -t) {
                al += knots.front().d_slope;
                bl += knots.front().d_offset;
                knots.pop_front();
            }
            lo[k] = (-t - bl) / al;
            knots.push_front({lo[k], al, bl + t});
            al = 0.0;
            bl = -t;
            while (!knots.empty() && ar * knots.back().x + br >= t) {
                ar -= knots.back().d_slope;
                br -= knots.back().d_offset;
                knots.pop_back();
            }
            hi[k] = (t - br) / ar;
            knots.push_back({hi[k], -ar, t - br});
            ar = 0.0;
            br = t;
        }
        const double a2 = 2.0 * data_weight[k + 1];
        al += a2;
        ar += a2;
        bl -= a2 * g[k + 1];
        br -= a2 * g[k + 1];
    }

    std::vector<double> u(n);
    u[n - 1] = root();
    for (std::size_t k = n - 1; k-- > 0;) u[k] = std::clamp(u[k + 1], lo[k], std::max(lo[k], hi[k]));
    return u;
}

Field prox_weighted_tv(const Field& g, const Field& v, double sigma, double lambda) {
    require_same_mesh(g, v, "prox_weighted_tv");
    if (!(lambda > 0.0)) throw ArgumentError("prox_weighted_tv needs lambda > 0 (the minimizer is not unique otherwise)");
    if (!(sigma >= 0.0)) throw ArgumentError("sigma must be nonnegative");
    const Mesh& mesh = g.mesh();
    const std::size_t n = mesh.size();
    std::vector<double> a(n), t(n - 1);
    for (std::size_t k = 0; k < n; ++k) a[k] = lambda * mesh.weight(k);
    for (std::size_t k = 0; k + 1 < n; ++k) t[k] = sigma * cell_weight(v[k], v[k + 1]);
    std::vector<double> data(g.values().begin(), g.values().end());

    if (!mesh.domain().is_torus()) return Field(mesh, weighted_tv_chain(data, a, t));

    // The closing edge n-1 -> 0 is dualised: for |p| <= tc the chain with linear
    // terms p (u_0 - u_{n-1}) is solved exactly, and p is the root of the
    // decreasing map p -> u_0(p) - u_{n-1}(p).
    const double tc = sigma * cell_weight(v[n - 1], v[0]);
    auto solve_for = [&](double p) {
        std::vector<double> shifted = data;
        shifted[0] -= p / (2.0 * a[0]);
        shifted[n - 1] += p / (2.0 * a[n - 1]);
        return weighted_tv_chain(shifted, a, t);
    };
    if (!(tc > 0.0)) return Field(mesh, solve_for(0.0));
    auto gap = [](const std::vector<double>& u) { return u.front() - u.back(); };
    auto u_lo = solve_for(-tc);
    if (gap(u_lo) <= 0.0) return Field(mesh, std::move(u_lo));
    auto u_hi = solve_for(tc);
    if (gap(u_hi) >= 0.0) return Field(mesh, std::move(u_hi));
    double p_lo = -tc, p_hi = tc;
    std::vector<double> best = u_lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (p_lo + p_hi);
        if (mid <= p_lo || mid >= p_hi) break;
        auto u = solve_for(mid);
        const double d = gap(u);
        best = std::move(u);
        if (d == 0.0) break;
        (d > 0.0 ? p_lo : p_hi) = mid;
    }
    return Field(mesh, std::move(best));
}

KwcResult minimize_kwc_alternating(const Field& g, double eps, double sigma, const Potential& p, double lambda,
                                   const SolveOptions& opts) {
    require_eps(eps);
    if (!(lambda > 0.0)) throw ArgumentError("alternating KWC minimization needs lambda > 0");
    if (!(sigma >= 0.0)) throw ArgumentError("sigma must be nonnegative");
    if (opts.rounds < 1) throw ArgumentError("at least one alternating round is required");
    const Mesh& mesh = g.mesh();

    Field u = g;
    Field v = Field::constant(mesh, 1.0);
    auto total = [&](const Field& uu, const Field& vv) { return energy_kwc(uu, vv, eps, sigma, p, lambda, &g).total; };

    KwcResult result{u, v, {}, {total(u, v)}, 0};
    for (int round = 1; round <= opts.rounds; ++round) {
        u = prox_weighted_tv(g, v, sigma, lambda);
        result.energy_trace.push_back(total(u, v));

        // Majorize the weighted TV by charging each jump sigma*|du| to the
        // endpoint of its cell where v^2 is currently smallest.
        std::vector<NodalPenalty> charges;
        for (std::size_t k = 0; k < mesh.cells(); ++k) {
            const std::size_t j = mesh.next(k);
            const double jump = std::abs(u[j] - u[k]);
            if (jump == 0.0 || sigma == 0.0) continue;
            const std::size_t at = std::abs(v[k]) <= std::abs(v[j]) ? k : j;
            charges.push_back({at, at, 1.0, 0.0, sigma * jump});
        }
        if (p.is_quadratic()) {
            v = minimize_smm_b_quadratic(mesh, eps, std::span<const NodalPenalty>(charges));
        } else {
            try {
                v = minimize_smm_b_general(mesh, eps, p, std::span<const NodalPenalty>(charges), opts, &v);
            } catch (const ConvergenceError& e) {
                v = e.last_iterate();
            }
        }
        const double after = total(u, v);
        const double before_round = result.energy_trace[result.energy_trace.size() - 2];
        result.energy_trace.push_back(after);
        result.rounds = round;
        if (before_round - after < opts.tolerance) break;
    }
    result.u = u;
    result.v = v;
    result.report = energy_kwc(u, v, eps, sigma, p, lambda, &g);
    return result;
}

}  // namespace gammalim
