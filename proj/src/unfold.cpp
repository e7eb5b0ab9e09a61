#include "gammalim/unfold.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "gammalim/errors.hpp"
#include "gammalim/io.hpp"

namespace gammalim {

namespace {

double interp(const std::vector<double>& s, const std::vector<double>& y, double t) {
    if (t <= s.front()) return y.front();
    if (t >= s.back()) return y.back();
    const auto it = std::upper_bound(s.begin(), s.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - s.begin()) - 1;
    const double ds = s[k + 1] - s[k];
    if (ds <= 0.0) return y[k + 1];
    const double w = (t - s[k]) / ds;
    return (1.0 - w) * y[k] + w * y[k + 1];
}

}  // namespace

double UnfoldedCurve::x_at(double s_value) const { return interp(s, x, s_value); }
double UnfoldedCurve::U_at(double s_value) const { return interp(s, U, s_value); }

UnfoldedCurve make_curve(Domain1D domain, std::vector<double> s, std::vector<double> x, std::vector<double> U) {
    if (s.size() < 2 || x.size() != s.size() || U.size() != s.size())
        throw ShapeError("curve needs at least two samples with matching columns");
    if (s.front() != 0.0) throw ArgumentError("curve parameter must start at 0");
    for (std::size_t k = 1; k < s.size(); ++k)
        if (!(s[k] >= s[k - 1])) throw ArgumentError("curve parameter must be nondecreasing");
    UnfoldedCurve c{domain, std::move(s), std::move(x), std::move(U), 0.0};
    c.length = c.s.back();
    return c;
}

UnfoldedCurve unfold(const Field& u) {
    const Mesh& mesh = u.mesh();
    const bool torus = mesh.domain().is_torus();
    const std::size_t samples = torus ? mesh.size() + 1 : mesh.size();
    const double h = mesh.spacing();
    UnfoldedCurve c;
    c.domain = mesh.domain();
    c.s.resize(samples);
    c.x.resize(samples);
    c.U.resize(samples);
    c.s[0] = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        c.x[k] = k == mesh.size() ? mesh.domain().right() : mesh.node(k);
        c.U[k] = u[k % mesh.size()];
        if (k > 0) c.s[k] = c.s[k - 1] + std::hypot(h, c.U[k] - c.U[k - 1]);
    }
    c.length = c.s.back();
    return c;
}

LipschitzReport lipschitz_report(const UnfoldedCurve& c) {
    LipschitzReport r;
    for (std::size_t k = 0; k + 1 < c.size(); ++k) {
        const double ds = c.s[k + 1] - c.s[k];
        const double dx = c.x[k + 1] - c.x[k];
        const double du = c.U[k + 1] - c.U[k];
        r.max_U_excess = std::max(r.max_U_excess, std::abs(du) - ds);
        r.max_x_excess = std::max(r.max_x_excess, std::abs(dx) - ds);
        if (ds > 0.0) r.max_pythagoras_error = std::max(r.max_pythagoras_error, std::abs(dx * dx + du * du - ds * ds) / (ds * ds));
    }
    return r;
}

double total_variation(const UnfoldedCurve& c) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < c.size(); ++k) acc += std::abs(c.U[k + 1] - c.U[k]);
    return acc;
}

double xbar_uniform_distance(const UnfoldedCurve& a, const UnfoldedCurve& b) {
    const double common = std::min(a.length, b.length);
    double d = 0.0;
    for (const auto* c : {&a, &b}) {
        for (double s : c->s) {
            if (s > common) break;
            d = std::max(d, std::abs(a.x_at(s) - b.x_at(s)));
        }
    }
    return std::max(d, std::abs(a.x_at(common) - b.x_at(common)));
}

void write_csv(const UnfoldedCurve& c, std::ostream& out) {
    out << "s,x,U\n";
    for (std::size_t k = 0; k < c.size(); ++k)
        out << format_double(c.s[k]) << ',' << format_double(c.x[k]) << ',' << format_double(c.U[k]) << '\n';
}

std::pair<double, double> ball_extrema(const Field& f, double x, double r) {
    const Mesh& mesh = f.mesh();
    const Domain1D& dom = mesh.domain();
    double lo = f.at(x), hi = lo;
    auto take = [&](double value) {
        lo = std::min(lo, value);
        hi = std::max(hi, value);
    };
    for (std::size_t k = 0; k < mesh.size(); ++k)
        if (dom.distance(mesh.node(k), x) < r) take(f[k]);
    // The supremum over the open ball is attained in the limit at its ends.
    if (!(dom.is_torus() && r >= 0.5)) {
        for (double y : {x - r, x + r}) {
            if (dom.is_torus()) {
                take(f.at(dom.wrap(y)));
            } else {
                take(f.at(std::clamp(y, dom.left(), dom.right())));
            }
        }
    }
    return {lo, hi};
}

RelaxedLimits relaxed_limits(const std::vector<Field>& seq, double x) {
    if (seq.empty()) throw ArgumentError("relaxed_limits needs a nonempty sequence");
    const Domain1D& dom = seq.front().mesh().domain();
    for (const auto& f : seq)
        if (!(f.mesh().domain() == dom)) throw ArgumentError("relaxed_limits: fields live on different domains");
    if (!dom.contains(x)) throw DomainError("relaxed_limits: point outside the domain");

    const std::size_t J = seq.size();
    RelaxedLimits r;
    r.inf_table.resize(J);
    r.sup_table.resize(J);
    for (std::size_t j = 1; j <= J; ++j) {
        const double radius = 1.0 / static_cast<double>(j);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t k = j - 1; k < J; ++k) {
            const auto [a, b] = ball_extrema(seq[k], x, radius);
            lo = std::min(lo, a);
            hi = std::max(hi, b);
        }
        r.inf_table[j - 1] = lo;
        r.sup_table[j - 1] = hi;
        if (j > 1 && (lo < r.inf_table[j - 2] || hi > r.sup_table[j - 2]))
            throw InternalError("relaxed_limits: tables lost monotonicity");
    }
    r.liminf = r.inf_table.back();
    r.limsup = r.sup_table.back();
    return r;
}

std::pair<double, double> pointwise_semilimits_from_unfolding(const UnfoldedCurve& c, double x, double tol) {
    if (!(tol > 0.0)) throw ArgumentError("tolerance must be positive");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    auto take = [&](double value) {
        lo = std::min(lo, value);
        hi = std::max(hi, value);
    };
    const bool torus = c.domain.is_torus();
    for (std::size_t k = 0; k + 1 < c.size(); ++k) {
        const double x0 = c.x[k], dx = c.x[k + 1] - c.x[k];
        for (double shift : torus ? std::vector<double>{-1.0, 0.0, 1.0} : std::vector<double>{0.0}) {
            // parameters t in [0, 1] with |x0 + t dx - (x + shift)| <= tol
            const double centre = x + shift;
            double t0 = 0.0, t1 = 1.0;
            if (dx == 0.0) {
                if (std::abs(x0 - centre) > tol) continue;
            } else {
                double a = (centre - tol - x0) / dx, b = (centre + tol - x0) / dx;
                if (a > b) std::swap(a, b);
                t0 = std::max(t0, a);
                t1 = std::min(t1, b);
                if (t0 > t1) continue;
            }
            const double du = c.U[k + 1] - c.U[k];
            take(c.U[k] + t0 * du);
            take(c.U[k] + t1 * du);
        }
    }
    if (!(lo <= hi)) throw DomainError("no curve sample lies within the tolerance of x");
    return {lo, hi};
}

RhoDecomposition rho_decomposition(const UnfoldedCurve& V, const std::vector<double>& exceptional_xs,
                                   std::optional<double> zero_tol, double capture_radius) {
    RhoDecomposition out;
    for (double x : exceptional_xs) out.entries.push_back({x, {}});
    const std::size_t n = V.size();
    if (n == 0) return out;

    double vmax = 0.0;
    for (double v : V.U) vmax = std::max(vmax, v);
    const double tol = zero_tol ? *zero_tol : 1e-9 * vmax;
    if (!(vmax > tol)) return out;

    auto crossing = [&](std::size_t below, std::size_t above) {
        const double a = V.U[below], b = V.U[above];
        const double w = (tol - a) / (b - a);
        return V.s[below] + w * (V.s[above] - V.s[below]);
    };

    struct Run {
        std::size_t first;
        std::size_t last;
    };
    std::vector<Run> runs;
    for (std::size_t k = 0; k < n;) {
        if (!(V.U[k] > tol)) {
            ++k;
            continue;
        }
        std::size_t j = k;
        while (j + 1 < n && V.U[j + 1] > tol) ++j;
        runs.push_back({k, j});
        k = j + 1;
    }

    const bool torus = V.domain.is_torus();
    std::vector<RhoPiece> pieces;
    for (const auto& run : runs) {
        RhoPiece p;
        p.s_begin = run.first == 0 ? V.s.front() : crossing(run.first - 1, run.first);
        p.s_end = run.last + 1 == n ? V.s.back() : crossing(run.last + 1, run.last);
        std::size_t peak = run.first;
        for (std::size_t k = run.first; k <= run.last; ++k)
            if (V.U[k] > V.U[peak]) peak = k;
        p.rho = V.U[peak];
        p.x_peak = V.x[peak];
        const bool touches_left = run.first == 0;
        const bool touches_right = run.last + 1 == n;
        if (!torus && (touches_left || touches_right)) p.chi_bar = 0.5;
        if (!torus && touches_left && touches_right) {
            out.unassigned.push_back(p);
            continue;
        }
        pieces.push_back(p);
    }
    // A torus curve closes up: a piece through the cut is one piece.
    if (torus && pieces.size() >= 2 && runs.front().first == 0 && runs.back().last + 1 == n) {
        RhoPiece& head = pieces.front();
        const RhoPiece tail = pieces.back();
        pieces.pop_back();
        if (tail.rho > head.rho) {
            head.rho = tail.rho;
            head.x_peak = tail.x_peak;
        }
        head.s_begin = tail.s_begin - V.length;
    }

    for (const auto& p : pieces) {
        std::size_t best = out.entries.size();
        double best_d = capture_radius;
        for (std::size_t i = 0; i < out.entries.size(); ++i) {
            const double d = V.domain.distance(p.x_peak, out.entries[i].x);
            if (d <= best_d && (best == out.entries.size() || d < best_d)) {
                best = i;
                best_d = d;
            }
        }
        if (best == out.entries.size()) {
            out.unassigned.push_back(p);
            continue;
        }
        out.entries[best].pieces.push_back(p);
        out.bound += 2.0 * p.chi_bar * p.rho;
    }
    return out;
}

}  // namespace gammalim
