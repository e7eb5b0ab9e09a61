// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gammalim/energy.hpp"
#include "gammalim/limits.hpp"
#include "gammalim/minimize.hpp"
#include "gammalim/recovery.hpp"
#include "gammalim/setvalued.hpp"
#include "gammalim/unfold.hpp"
#include "hausdorff_oracle.hpp"
#include "prox_oracle.hpp"

using namespace gammalim;

namespace {

// Pinned tolerances.
constexpr double kClosedFormTol = 1e-3;
constexpr double kRuntimeLimit = 5.0;  // seconds
constexpr double kDipTol = 1e-3;
constexpr double kEnergyTol = 1e-2;
constexpr double kRecoveryExtra = 0.02;
constexpr double kRecoveryDistance = 2e-2;
constexpr double kUnfoldRelTol = 1e-12;
constexpr double kLipschitzTol = 1e-12;
constexpr double kSlackConstant = 1.0;  // C in C * h
constexpr double kRhoTol = 5e-2;
constexpr double kRhoZeroTol = 1e-3;  // relative to max V
constexpr double kProxTol = 1e-8;
constexpr double kKwcTol = 5e-2;
constexpr double kAdditivityTol = 1e-12;
constexpr double kDescentTol = 1e-12;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Mesh dip_mesh(double eps) {
    const auto n = static_cast<std::size_t>(std::ceil(16.0 / eps)) + 1;
    return Mesh(Domain1D::interval(-1.0, 1.0), n);
}

// Limit energy on the torus with quadratic F, computed directly.
double torus_limit_quadratic(const std::vector<ExceptionalPoint>& pts) {
    double acc = 0.0;
    for (const auto& e : pts) acc += 2.0 * ((e.lo - 1.0) * (e.lo - 1.0) + (e.hi - 1.0) * (e.hi - 1.0)) / 2.0;
    return acc;
}

const std::vector<ExceptionalPoint> kTorusEntries = {{0.3, 0.5, 1.0}, {0.7, 0.0, 1.2}};
const std::vector<double> kTorusEps = {1e-1, 1e-2, 1e-3};
constexpr double kTorusMu = 0.05;

Outcome closed_form_agreement() {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<PointPenalty> pen = {{0.0, 1.0}};
    std::string detail;
    bool pass = true;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const Mesh m = dip_mesh(eps);
        const auto v = minimize_smm_b_quadratic(m, eps, pen);
        const auto w = closed_form_minimizer(eps, 1.0);
        double err = 0.0;
        for (std::size_t k = 0; k < m.size(); ++k) err = std::max(err, std::abs(v[k] - w(m.node(k))));
        pass = pass && err <= kClosedFormTol;
        detail += fmt("eps=%g sup=%.3e; ", eps, err);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    pass = pass && seconds < kRuntimeLimit;
    return {pass, detail + fmt("runtime %.3fs", seconds)};
}

Outcome dip_value() {
    constexpr double eps = 1e-3;
    std::string detail;
    bool pass = true;
    for (double b : {0.5, 1.0, 3.0}) {
        const std::vector<PointPenalty> pen = {{0.0, b}};
        const auto v = minimize_smm_b_quadratic(dip_mesh(eps), eps, pen);
        const double err = std::abs(v.at(0.0) - 1.0 / (1.0 + b));
        pass = pass && err <= kDipTol;
        detail += fmt("b=%g v(0)=%.6f err=%.2e; ", b, v.at(0.0), err);
    }
    return {pass, detail};
}

Outcome energy_limit() {
    constexpr double eps = 1e-3, b = 1.0;
    const auto p = Potential::quadratic();
    const std::vector<PointPenalty> pen = {{0.0, b}};
    const auto v = minimize_smm_b_quadratic(dip_mesh(eps), eps, pen);
    const auto report = energy_smm_b(v, eps, p, pen);
    const double expected = (b / (1.0 + b)) * (b / (1.0 + b));
    const bool energy_ok = std::abs(report.total - expected) <= kEnergyTol;

    const auto m0 = limit_pointwise_minimizer(b, p);
    const SetValuedLimit xi0(Domain1D::interval(-1.0, 1.0), {{0.0, m0.p0, 1.0}});
    const double limit = limit_energy_smm_b(xi0, p, pen);
    const bool limit_ok = limit == b / (b + 1.0);
    return {energy_ok && limit_ok,
            fmt("total E=%.6f vs %.4f (%s); MM part=%.6f, penalty part=%.6f; limit_energy_smm_b(Xi0)=%.17g vs b/(b+1) (%s)",
                report.total, expected, energy_ok ? "ok" : "off", report.smm(), report.penalty, limit,
                limit_ok ? "exact" : "differs")};
}

Outcome recovery_consistency() {
    const SetValuedLimit xi(Domain1D::torus(), kTorusEntries);
    const auto p = Potential::quadratic();
    const double limit = torus_limit_quadratic(kTorusEntries);
    const auto rows = verify_limsup(xi, p, kTorusEps, kTorusMu, LimsupOptions{});
    bool pass = std::abs(rows.front().limit_energy - limit) <= 1e-12;
    std::string detail = fmt("limit=%.6f; ", limit);
    double previous = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
        pass = pass && r.discrete_energy <= limit + kTorusMu + kRecoveryExtra && r.graph_distance < previous;
        previous = r.graph_distance;
        detail += fmt("eps=%g E=%.6f dist=%.4e; ", r.eps, r.discrete_energy, r.graph_distance);
    }
    pass = pass && previous <= kRecoveryDistance;
    return {pass, detail};
}

Outcome unfolding_exactness() {
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<std::size_t> size(2, 512);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> step(0.0, 1.0);
    double worst_tv = 0.0, worst_lip = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const bool torus = trial % 2 == 1;
        const std::size_t n = size(rng);
        const double a = -2.0 * unit(rng), len = 0.1 + 3.0 * unit(rng);
        const Mesh m = torus ? Mesh(Domain1D::torus(), n) : Mesh(Domain1D::interval(a, a + len), n);
        const double scale = std::pow(10.0, 4.0 * unit(rng) - 2.0);
        std::vector<double> vals(n);
        double y = 0.0;
        for (auto& x : vals) {
            y += scale * step(rng) * (unit(rng) < 0.1 ? 20.0 : 1.0);
            x = y;
        }
        const Field u(m, vals);
        const auto c = unfold(u);
        const double tvu = total_variation(u), tvU = total_variation(c);
        const double rel = tvu > 0.0 ? std::abs(tvU - tvu) / tvu : std::abs(tvU);
        const auto lip = lipschitz_report(c);
        worst_tv = std::max(worst_tv, rel);
        worst_lip = std::max({worst_lip, lip.max_U_excess / (1.0 + c.length), lip.max_x_excess / (1.0 + c.length)});
    }
    return {worst_tv <= kUnfoldRelTol && worst_lip <= kLipschitzTol,
            fmt("worst TV rel err=%.2e, worst Lipschitz excess=%.2e over 1000 fields", worst_tv, worst_lip)};
}

Outcome liminf_consistency() {
    const SetValuedLimit xi(Domain1D::torus(), kTorusEntries);
    const auto p = Potential::quadratic();
    const double limit = torus_limit_quadratic(kTorusEntries);
    const std::vector<double> xs = {0.3, 0.7};
    bool pass = true;
    std::string detail;
    double last = 0.0;
    for (double eps : kTorusEps) {
        const Mesh mesh = recovery_mesh(xi.domain(), eps, LimsupOptions{}.cells_per_eps);
        const auto rec = build_recovery(xi, eps, kTorusMu, p, mesh);
        std::vector<double> g(mesh.size());
        for (std::size_t k = 0; k < g.size(); ++k) g[k] = p.G(rec.w[k]);
        const auto V = unfold(Field(mesh, g));
        const double vmax = *std::max_element(g.begin(), g.end());
        const auto rho = rho_decomposition(V, xs, kRhoZeroTol * vmax);
        const auto rho_default = rho_decomposition(V, xs);
        const double mm = energy_smm(rec.w, eps, p).smm();
        pass = pass && rho.bound <= mm + kSlackConstant * mesh.spacing();
        last = rho.bound;
        detail += fmt("eps=%g bound=%.6f (default zero tol %.6f) MM=%.6f; ", eps, rho.bound, rho_default.bound, mm);
    }
    pass = pass && std::abs(last - limit) <= kRhoTol;
    return {pass, detail + fmt("limit=%.6f", limit)};
}

std::vector<oracle::Edge> cell_edges(const Mesh& m, const Field& v, double sigma) {
    std::vector<oracle::Edge> edges;
    for (std::size_t k = 0; k < m.cells(); ++k) edges.push_back({k, m.next(k), sigma * cell_weight(v[k], v[m.next(k)])});
    return edges;
}

Outcome prox_oracle() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    std::uniform_real_distribution<double> vv(0.0, 1.5);
    std::uniform_int_distribution<std::size_t> size(2, 5);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = size(rng);
        const Mesh m = trial % 2 ? Mesh(Domain1D::torus(), n) : Mesh(Domain1D::interval(0.0, 1.0), n);
        std::vector<double> gv(n), v(n), a(n);
        for (auto& x : gv) x = val(rng);
        for (auto& x : v) x = vv(rng);
        const double sigma = 0.05 + std::abs(val(rng)), lambda = 0.2 + std::abs(val(rng));
        const Field g(m, gv), vf(m, v);
        const auto u = prox_weighted_tv(g, vf, sigma, lambda);
        for (std::size_t k = 0; k < n; ++k) a[k] = lambda * m.weight(k);
        const auto ref = oracle::prox_by_patterns(gv, a, cell_edges(m, vf, sigma));
        for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(u[k] - ref[k]));
    }
    return {worst <= kProxTol, fmt("max deviation %.2e over 200 instances", worst)};
}

Outcome kwc_reduction() {
    constexpr double eps = 1e-2, sigma = 1.0, lambda = 1e3;
    const Mesh m(Domain1D::interval(-1.0, 1.0), 3201);
    const auto g = Field::sample(m, [](double x) { return x < 0.0 ? 0.0 : 1.0; });
    SolveOptions opts;
    opts.rounds = 500;
    const auto r = minimize_kwc_alternating(g, eps, sigma, Potential::quadratic(), lambda, opts);
    const auto jump = m.locate(-0.5 * m.spacing());
    const double v_jump = std::min(r.v[jump.left], r.v[jump.right]);
    const double err = std::abs(v_jump - 1.0 / (1.0 + sigma));
    return {err <= kKwcTol, fmt("v at jump=%.6f target=%.4f err=%.2e rounds=%d", v_jump, 1.0 / (1.0 + sigma), err, r.rounds)};
}

GraphSet random_graph(std::mt19937_64& rng, const Domain1D& dom) {
    std::uniform_int_distribution<std::size_t> count(1, 200);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = count(rng);
    std::vector<double> xs(n);
    for (auto& x : xs) x = dom.left() + (dom.is_torus() ? 1.0 : dom.length()) * unit(rng);
    std::sort(xs.begin(), xs.end());
    GraphSet g{dom, {}, 1.0};
    double y = unit(rng);
    for (double x : xs) {
        y += 0.3 * (unit(rng) - 0.5);
        g.points.push_back({dom.wrap(x), y});
    }
    return g;
}

Outcome hausdorff_exact() {
    std::mt19937_64 rng(9001);
    int mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Domain1D dom = trial % 2 ? Domain1D::torus() : Domain1D::interval(-1.0, 1.0);
        const auto a = random_graph(rng, dom), b = random_graph(rng, dom);
        if (hausdorff(a, b) != oracle::hausdorff_brute_force(a, b)) ++mismatches;
    }
    return {mismatches == 0, fmt("%d mismatches over 100 pairs", mismatches)};
}

Outcome property_suites() {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    const auto quad = Potential::quadratic();
    std::vector<double> tv, tf;
    for (int k = 0; k <= 40; ++k) {
        tv.push_back(-1.0 + 0.1 * k);
        tf.push_back(std::pow(tv.back() - 1.0, 4));
    }
    const auto quartic = Potential::tabulated(tv, tf, 1e-3);

    // Modica-Mortola inequality with slack C h.
    bool mm = true;
    double mm_worst = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
        const Mesh m(Domain1D::interval(0.0, 1.0), 20 + 7 * trial);
        const double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng);
        const auto v = Field::sample(m, [&](double x) { return 1.0 + a1 * std::sin(6.0 * x) + 0.5 * a2 * std::cos(17.0 * x) + a3 * x * x; });
        for (const Potential* p : {&quad, &quartic}) {
            for (double eps : {0.01, 0.1, 1.0}) {
                const double gap = modica_mortola_lower_bound(v, *p) - energy_smm(v, eps, *p).total;
                mm_worst = std::max(mm_worst, gap / m.spacing());
                mm = mm && gap <= kSlackConstant * m.spacing();
            }
        }
    }

    // Energy reports add up.
    bool additive = true;
    for (int trial = 0; trial < 100; ++trial) {
        const Mesh m(trial % 2 ? Domain1D::torus() : Domain1D::interval(-1.0, 1.0), 10 + trial);
        std::vector<double> uv(m.size()), vv(m.size()), gv(m.size());
        for (std::size_t k = 0; k < m.size(); ++k) {
            uv[k] = amp(rng);
            vv[k] = 1.0 + 0.5 * amp(rng);
            gv[k] = amp(rng);
        }
        const Field u(m, uv), v(m, vv), g(m, gv);
        const std::vector<PointPenalty> pen = {{m.domain().is_torus() ? 0.5 : 0.0, 0.7}};
        const auto b = energy_smm_b(v, 0.1, quad, pen);
        const auto k = energy_kwc(u, v, 0.1, 0.8, quad, 2.0, &g);
        const double sb = b.gradient + b.potential + b.penalty;
        const double sk = k.gradient + k.potential + k.weighted_tv + k.fidelity;
        additive = additive && std::abs(b.total - sb) <= kAdditivityTol * std::max(1.0, std::abs(sb)) &&
                   std::abs(k.total - sk) <= kAdditivityTol * std::max(1.0, std::abs(sk));
    }

    // Prox is nonexpansive in the lambda-weighted norm.
    bool nonexpansive = true;
    for (int trial = 0; trial < 100; ++trial) {
        const Mesh m(trial % 2 ? Domain1D::torus() : Domain1D::interval(0.0, 1.0), 5 + trial);
        std::vector<double> g1(m.size()), g2(m.size()), vv(m.size());
        for (std::size_t k = 0; k < m.size(); ++k) {
            g1[k] = amp(rng);
            g2[k] = g1[k] + 0.3 * amp(rng);
            vv[k] = 1.0 + 0.5 * amp(rng);
        }
        const Field v(m, vv);
        const double lambda = 3.0;
        const auto u1 = prox_weighted_tv(Field(m, g1), v, 0.5, lambda);
        const auto u2 = prox_weighted_tv(Field(m, g2), v, 0.5, lambda);
        double du = 0.0, dg = 0.0;
        for (std::size_t k = 0; k < m.size(); ++k) {
            du += lambda * m.weight(k) * (u1[k] - u2[k]) * (u1[k] - u2[k]);
            dg += lambda * m.weight(k) * (g1[k] - g2[k]) * (g1[k] - g2[k]);
        }
        nonexpansive = nonexpansive && std::sqrt(du) <= std::sqrt(dg) * (1.0 + 1e-9) + 1e-12;
    }

    // Alternating minimization never increases the energy.
    bool descent = true;
    for (int trial = 0; trial < 10; ++trial) {
        const Mesh m(Domain1D::interval(-1.0, 1.0), 201);
        const double at = 0.5 * amp(rng), noise = 0.1 * std::abs(amp(rng));
        std::mt19937_64 local(trial);
        std::normal_distribution<double> nd(0.0, 1.0);
        const auto g = Field::sample(m, [&](double x) { return (x < at ? 0.0 : 1.0) + noise * nd(local); });
        const auto r = minimize_kwc_alternating(g, 0.05, 1.0, quad, 50.0, SolveOptions{});
        for (std::size_t k = 1; k < r.energy_trace.size(); ++k)
            descent = descent && r.energy_trace[k] <= r.energy_trace[k - 1] * (1.0 + kDescentTol) + kDescentTol;
    }

    // Halving the resolution never raises the distance by more than the old resolution.
    bool refinement = true;
    for (int trial = 0; trial < 20; ++trial) {
        const Mesh m(Domain1D::interval(-1.0, 1.0), 50 + 10 * trial);
        const double c = 0.5 * amp(rng);
        const auto u = Field::sample(m, [&](double x) { return 1.0 - 0.6 * std::exp(-std::abs(x - c) * 8.0) + 0.1 * amp(rng); });
        const SetValuedLimit xi(m.domain(), {{c, 0.4 + 0.1 * amp(rng), 1.0}});
        for (double r = 0.2; r >= 0.2 / 64; r *= 0.5)
            refinement = refinement && graph_distance(u, xi, r / 2) <= graph_distance(u, xi, r) + r;
    }

    return {mm && additive && nonexpansive && descent && refinement,
            fmt("Modica-Mortola %s (worst gap/h %.2e), additivity %s, nonexpansive %s, descent %s, refinement %s",
                mm ? "ok" : "FAIL", mm_worst, additive ? "ok" : "FAIL", nonexpansive ? "ok" : "FAIL",
                descent ? "ok" : "FAIL", refinement ? "ok" : "FAIL")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"closed-form agreement", closed_form_agreement},
        {"dip-value limit", dip_value},
        {"energy limit", energy_limit},
        {"recovery consistency", recovery_consistency},
        {"unfolding exactness", unfolding_exactness},
        {"liminf-side consistency", liminf_consistency},
        {"prox oracle equivalence", prox_oracle},
        {"KWC reduction", kwc_reduction},
        {"Hausdorff correctness", hausdorff_exact},
        {"property suites", property_suites},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o{false, ""};
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("criterion %zu %s: %s  %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
