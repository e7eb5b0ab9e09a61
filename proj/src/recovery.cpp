#include "gammalim/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <ostream>

#include "gammalim/energy.hpp"
#include "gammalim/errors.hpp"
#include "gammalim/io.hpp"
#include "gammalim/limits.hpp"

namespace gammalim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double hermite(double x0, double h, double v0, double v1, double d0, double d1, double x) {
    const double t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * v1 + (t3 - t2) * h * d1;
}

}  // namespace

Profile profile(double xi, const Potential& p, double x_max, double step) {
    if (!std::isfinite(xi)) throw ArgumentError("profile: initial value must be finite");
    if (xi == 1.0) throw ArgumentError("profile: initial value must differ from 1");
    if (!(x_max > 0.0)) throw ArgumentError("profile: x_max must be positive");
    Profile pr;
    pr.xi_ = xi;
    pr.beta_ = std::abs(xi - 1.0);
    pr.sign_ = xi < 1.0 ? 1.0 : -1.0;
    if (p.is_quadratic()) {
        pr.closed_form_ = true;
        return pr;
    }
    if (!(step > 0.0)) throw ArgumentError("profile: step must be positive");
    if (!p.in_range(xi)) throw RangeError("profile: initial value outside the tabulated range");

    // The profile only exists when F stays positive strictly between xi and 1.
    const std::size_t checks = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(pr.beta_ / p.quadrature_step())));
    for (std::size_t k = 0; k < checks; ++k) {
        const double v = xi + (1.0 - xi) * static_cast<double>(k) / static_cast<double>(checks);
        if (!(p.F(v) > 0.0)) throw PotentialError("profile: F vanishes between the initial value and 1");
    }
    for (double knot : p.table_v()) {
        const bool between = xi < 1.0 ? (knot >= xi && knot < 1.0) : (knot <= xi && knot > 1.0);
        if (between && !(p.F(knot) > 0.0)) throw PotentialError("profile: F vanishes between the initial value and 1");
    }

    const double sign = pr.sign_;
    auto rhs = [&](double v) { return sign * (1.0 - v) > 0.0 ? sign * std::sqrt(std::max(p.F(v), 0.0)) : 0.0; };
    auto clamp_to_one = [&](double v) { return sign > 0 ? std::min(v, 1.0) : std::max(v, 1.0); };

    pr.step_ = step;
    double v = xi;
    pr.v_.push_back(v);
    pr.dv_.push_back(rhs(v));
    const auto steps = static_cast<std::size_t>(std::ceil(x_max / step));
    for (std::size_t k = 0; k < steps; ++k) {
        const double k1 = rhs(v);
        const double k2 = rhs(clamp_to_one(v + 0.5 * step * k1));
        const double k3 = rhs(clamp_to_one(v + 0.5 * step * k2));
        const double k4 = rhs(clamp_to_one(v + step * k3));
        v = clamp_to_one(v + step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4));
        pr.v_.push_back(v);
        pr.dv_.push_back(rhs(v));
        if (v == 1.0) {
            pr.x_star_ = static_cast<double>(k + 1) * step;
            break;
        }
    }
    pr.x_max_ = static_cast<double>(pr.v_.size() - 1) * step;
    return pr;
}

double Profile::operator()(double x) const {
    const double ax = std::abs(x);
    if (closed_form_) return 1.0 - sign_ * beta_ * std::exp(-ax);
    if (ax >= x_star_) return 1.0;
    if (ax > x_max_) throw ArgumentError("profile evaluated beyond its sampled range");
    const auto k = std::min(static_cast<std::size_t>(ax / step_), v_.size() - 2);
    const double x0 = static_cast<double>(k) * step_;
    const double v = hermite(x0, step_, v_[k], v_[k + 1], dv_[k], dv_[k + 1], ax);
    return sign_ > 0 ? std::min(v, 1.0) : std::max(v, 1.0);
}

double Profile::reach(double gap) const {
    if (!(gap > 0.0)) throw ArgumentError("profile: gap must be positive");
    if (gap >= beta_) return 0.0;
    if (closed_form_) return std::log(beta_ / gap);
    auto dist = [&](double x) { return std::abs((*this)(x) - 1.0); };
    for (std::size_t k = 1; k < v_.size(); ++k) {
        if (std::abs(v_[k] - 1.0) > gap) continue;
        double lo = static_cast<double>(k - 1) * step_, hi = static_cast<double>(k) * step_;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            (dist(mid) > gap ? lo : hi) = mid;
        }
        return hi;
    }
    throw ArgumentError("profile sampled range too short to reach the requested gap");
}

CutoffProfile::CutoffProfile(Profile base, double delta) : base_(std::move(base)), delta_(delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("cutoff parameter must lie in (0, 1)");
    x_switch_ = base_.reach(delta * base_.beta());
    v_switch_ = base_(x_switch_);
    eta_ = x_switch_ + std::abs(1.0 - v_switch_);
}

double CutoffProfile::operator()(double x) const {
    const double ax = std::abs(x);
    if (ax >= eta_) return 1.0;
    if (ax > x_switch_) {
        const double toward = ax - x_switch_;
        return v_switch_ < 1.0 ? std::min(v_switch_ + toward, 1.0) : std::max(v_switch_ - toward, 1.0);
    }
    return base_(ax);
}

CutoffProfile cutoff(const Profile& pr, double delta) { return CutoffProfile(pr, delta); }

namespace {

std::optional<CutoffProfile> side_profile(double xi, double delta, const Potential& p) {
    if (xi == 1.0) return std::nullopt;
    if (p.is_quadratic()) return CutoffProfile(profile(xi, p, kInf, 0.0), delta);
    for (double x_max = 16.0;; x_max *= 2.0) {
        try {
            return CutoffProfile(profile(xi, p, x_max, p.quadrature_step()), delta);
        } catch (const ArgumentError&) {
            if (x_max > 1e4) throw;
        }
    }
}

struct Block {
    RecoveryBlock info;
    double centre;
    double anchor_lo;   // centre of the lower profile
    double anchor_hi;   // centre of the upper profile
    std::optional<CutoffProfile> lo;
    std::optional<CutoffProfile> hi;
    double eps;

    double value(double y) const {
        if (lo && std::abs(y - anchor_lo) <= eps * lo->eta()) return (*lo)((y - anchor_lo) / eps);
        if (hi && std::abs(y - anchor_hi) <= eps * hi->eta()) return (*hi)((y - anchor_hi) / eps);
        return 1.0;
    }
};

bool overlaps(const RecoveryBlock& a, const RecoveryBlock& b, bool torus) {
    const int reach = torus ? 2 : 0;
    for (int m = -reach; m <= reach; ++m)
        if (a.begin < b.end + m && b.begin + m < a.end) return true;
    return false;
}

}  // namespace

Mesh recovery_mesh(const Domain1D& domain, double eps, double cells_per_eps) {
    if (!(eps > 0.0) || !(cells_per_eps > 0.0)) throw ArgumentError("recovery_mesh: eps and cells_per_eps must be positive");
    if (domain.is_torus()) return Mesh(domain, static_cast<std::size_t>(std::ceil(cells_per_eps / eps)));
    return Mesh(domain, static_cast<std::size_t>(std::ceil(domain.length() * cells_per_eps / eps)) + 1);
}

Recovery build_recovery(const SetValuedLimit& xi, double eps, double mu, const Potential& p, const Mesh& mesh) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ArgumentError("eps must be positive");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw ArgumentError("mu must be positive");
    if (!(mesh.domain() == xi.domain())) throw ArgumentError("build_recovery: mesh and limit differ in domain");
    const Domain1D& dom = xi.domain();
    const bool torus = dom.is_torus();
    const auto& pts = xi.exceptional();

    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    auto beta_of = [&](std::size_t i) { return std::max(std::abs(pts[i].hi - 1.0), std::abs(pts[i].lo - 1.0)); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return beta_of(a) > beta_of(b); });

    std::vector<Block> blocks;
    double bound = 0.0;
    double scale = mu;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const auto& e = pts[order[rank]];
        scale *= 0.5;
        const double beta = beta_of(order[rank]);
        const double delta = std::min(0.25 * scale, cutoff_delta_cap(p, beta));

        Block b;
        b.eps = eps;
        b.lo = side_profile(e.lo, delta, p);
        b.hi = side_profile(e.hi, delta, p);
        const double eta_lo = b.lo ? b.lo->eta() : 0.0;
        const double eta_hi = b.hi ? b.hi->eta() : 0.0;
        const double g_lo = p.G(e.lo), g_hi = p.G(e.hi);

        RecoveryBlock info{order[rank], beta, delta, 0.0, 0.0, false, 0.0};
        if (!torus && dom.is_boundary(e.x, kLocationSnap)) {
            // The profile with larger G sits on the boundary, the other one inside.
            const double inward = std::abs(e.x - dom.left()) <= kLocationSnap ? 1.0 : -1.0;
            const double edge = inward > 0 ? dom.left() : dom.right();
            const bool lo_outer = g_lo >= g_hi;
            const double eta_outer = lo_outer ? eta_lo : eta_hi;
            const double eta_inner = lo_outer ? eta_hi : eta_lo;
            const double inner_centre = edge + inward * eps * (eta_outer + eta_inner);
            b.anchor_lo = lo_outer ? edge : inner_centre;
            b.anchor_hi = lo_outer ? inner_centre : edge;
            const double far = edge + inward * eps * (eta_outer + 2.0 * eta_inner);
            info.begin = std::min(edge, far);
            info.end = std::max(edge, far);
            info.boundary = true;
            info.bound = 2.0 * std::min(g_lo, g_hi) + std::max(g_lo, g_hi) + 3.0 * beta * delta;
        } else {
            b.anchor_lo = e.x;
            b.anchor_hi = e.x + eps * (eta_lo + eta_hi);
            info.begin = e.x - eps * eta_lo;
            info.end = e.x + eps * (eta_lo + 2.0 * eta_hi);
            info.bound = 2.0 * (g_lo + g_hi) + 4.0 * beta * delta;
        }

        bool fits = torus ? info.end - info.begin < 1.0 : (info.begin >= dom.left() && info.end <= dom.right());
        for (const auto& other : blocks)
            if (fits && overlaps(info, other.info, torus)) fits = false;
        if (!fits) break;

        for (const auto* side : {&b.lo, &b.hi}) {
            if (*side && eps * (*side)->eta() < 4.0 * mesh.spacing())
                throw ResolutionError("mesh too coarse: a recovery profile spans fewer than 4 cells");
        }
        b.info = info;
        bound += info.bound;
        blocks.push_back(std::move(b));
    }

    std::vector<double> w(mesh.size(), 1.0);
    const double h = mesh.spacing();
    const auto n = static_cast<long long>(mesh.size());
    for (const auto& b : blocks) {
        const auto first = static_cast<long long>(std::ceil((b.info.begin - dom.left()) / h));
        const auto last = static_cast<long long>(std::floor((b.info.end - dom.left()) / h));
        for (long long k = first; k <= last; ++k) {
            long long idx = k;
            if (torus) {
                idx = ((k % n) + n) % n;
            } else if (k < 0 || k >= n) {
                continue;
            }
            const double y = dom.left() + static_cast<double>(k) * h;
            w[static_cast<std::size_t>(idx)] = b.value(y);
        }
    }

    Recovery r{Field(mesh, std::move(w)), bound, {}, pts.size() - blocks.size()};
    for (const auto& b : blocks) r.blocks.push_back(b.info);
    return r;
}

std::vector<LimsupRow> verify_limsup(const SetValuedLimit& xi, const Potential& p, std::span<const double> eps_schedule,
                                     double mu, const LimsupOptions& opts) {
    if (eps_schedule.empty()) throw ArgumentError("verify_limsup: empty schedule");
    for (std::size_t k = 1; k < eps_schedule.size(); ++k)
        if (!(eps_schedule[k] < eps_schedule[k - 1])) throw ArgumentError("verify_limsup: schedule must decrease strictly");
    const double limit = limit_energy_smm_b(xi, p, opts.penalties);

    std::vector<LimsupRow> rows;
    for (double eps : eps_schedule) {
        const Mesh mesh = recovery_mesh(xi.domain(), eps, opts.cells_per_eps);
        const auto rec = build_recovery(xi, eps, mu, p, mesh);
        const double energy = energy_smm_b(rec.w, eps, p, opts.penalties).total;
        const double distance = graph_distance(rec.w, xi, opts.resolution);
        const double h = mesh.spacing();
        const double slack = opts.slack_constant * h * h / eps;
        bool pass = energy <= limit + mu + slack;
        if (!rows.empty()) pass = pass && distance <= rows.back().graph_distance;
        rows.push_back({eps, energy, limit, mu, distance, rec.bound, rec.blocks.size(), pass});
    }
    return rows;
}

void write_csv(const std::vector<LimsupRow>& rows, std::ostream& out) {
    out << "eps,discrete_energy,limit_energy,mu,graph_distance,bound,blocks,pass\n";
    for (const auto& r : rows) {
        out << format_double(r.eps) << ',' << format_double(r.discrete_energy) << ',' << format_double(r.limit_energy)
            << ',' << format_double(r.mu) << ',' << format_double(r.graph_distance) << ',' << format_double(r.bound)
            << ',' << r.blocks << ',' << (r.pass ? "pass" : "fail") << '\n';
    }
}

}  // namespace gammalim
