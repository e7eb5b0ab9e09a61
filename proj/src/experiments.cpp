#include "gammalim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>

#include "gammalim/energy.hpp"
#include "gammalim/errors.hpp"
#include "gammalim/io.hpp"
#include "gammalim/limits.hpp"
#include "gammalim/minimize.hpp"
#include "gammalim/recovery.hpp"
#include "gammalim/unfold.hpp"
#include "json_util.hpp"

namespace gammalim {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void note(const RunOptions& opts, const std::string& msg) {
    if (opts.log) *opts.log << msg << '\n';
}

// ---- config parsing --------------------------------------------------------

double positive(const json& j, const char* key) {
    const double v = j.at(key).get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string("`") + key + "` must be a positive number");
    return v;
}

double positive_or(const json& j, const char* key, double fallback) {
    return j.contains(key) ? positive(j, key) : fallback;
}

std::vector<double> schedule(const json& j) {
    auto eps = j.at("eps").get<std::vector<double>>();
    if (eps.empty()) throw ConfigError("`eps` schedule is empty");
    for (std::size_t k = 0; k < eps.size(); ++k) {
        if (!(eps[k] > 0.0) || !std::isfinite(eps[k])) throw ConfigError("`eps` entries must be positive");
        if (k > 0 && !(eps[k] < eps[k - 1])) throw ConfigError("`eps` schedule must be strictly decreasing");
    }
    return eps;
}

Potential potential(const json& root) {
    if (!root.contains("potential")) return Potential::quadratic();
    const json& j = root.at("potential");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "quadratic") return Potential::quadratic();
    if (kind != "tabulated") throw ConfigError("unknown potential kind `" + kind + "`");
    const double step = positive(j, "step");
    if (j.contains("table")) return Potential::from_csv(j.at("table").get<std::string>(), step);
    return Potential::tabulated(j.at("v").get<std::vector<double>>(), j.at("F").get<std::vector<double>>(), step);
}

std::vector<PointPenalty> penalties(const json& root) {
    std::vector<PointPenalty> out;
    if (!root.contains("penalties")) return out;
    for (const auto& e : root.at("penalties")) out.push_back({e.at("a").get<double>(), e.at("b").get<double>()});
    return out;
}

SolveOptions solver(const json& root) {
    SolveOptions s;
    if (!root.contains("solver")) return s;
    const json& j = root.at("solver");
    s.max_iterations = j.value("max_iterations", s.max_iterations);
    s.tolerance = j.value("tolerance", s.tolerance);
    s.rounds = j.value("rounds", s.rounds);
    const auto rule = j.value("step_rule", std::string("backtracking"));
    if (rule == "fixed") {
        s.step_rule = StepRule::fixed;
    } else if (rule != "backtracking") {
        throw ConfigError("unknown step rule `" + rule + "`");
    }
    if (s.max_iterations < 1 || !(s.tolerance > 0.0) || s.rounds < 1) throw ConfigError("invalid solver options");
    return s;
}

Mesh mesh_for(const Domain1D& dom, const json& root, double eps) {
    if (root.contains("nodes")) {
        const auto n = root.at("nodes").get<long long>();
        if (n < 2) throw ConfigError("`nodes` must be at least 2");
        return Mesh(dom, static_cast<std::size_t>(n));
    }
    return recovery_mesh(dom, eps, positive_or(root, "cells_per_eps", 8.0));
}

Field field_from(const json& j, const Mesh& mesh) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "values") return Field(mesh, j.at("values").get<std::vector<double>>());
    if (kind == "csv") return read_field_csv(mesh, j.at("path").get<std::string>());
    if (kind == "linear") {
        const double slope = j.value("slope", 1.0), intercept = j.value("intercept", 0.0);
        return Field::sample(mesh, [&](double x) { return slope * x + intercept; });
    }
    if (kind == "step") {
        const double at = j.at("at").get<double>();
        const double left = j.value("left", 0.0), right = j.value("right", 1.0);
        return Field::sample(mesh, [&](double x) { return x < at ? left : right; });
    }
    if (kind == "constant") return Field::constant(mesh, j.at("value").get<double>());
    throw ConfigError("unknown field kind `" + kind + "`");
}

double resolution(const json& root, const RunOptions& opts) {
    const double r = opts.resolution ? *opts.resolution : root.value("resolution", 1e-3);
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("resolution must be positive");
    return r;
}

// Runs `parse` and maps every parsing failure to a config error.
template <class F>
auto parse_config(std::string_view text, F&& parse) {
    const json root = detail::parse_json(text, "config");
    if (!root.is_object()) throw ConfigError("config must be a JSON object");
    try {
        return parse(root);
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

// ---- output ----------------------------------------------------------------

void prepare(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string());
}

std::ofstream open(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    return out;
}

std::string tag(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03zu", index);
    return buf;
}

void write_svg(const fs::path& path, const Field& f) {
    const Mesh& m = f.mesh();
    double lo = 0.0, hi = 1.0;
    for (double v : f.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double width = 800.0, height = 400.0;
    const double span = hi - lo > 0.0 ? hi - lo : 1.0;
    auto out = open(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\" viewBox=\"0 0 800 400\">\n";
    out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double x = (m.node(k) - m.domain().left()) / m.domain().length() * width;
        const double y = height - (f[k] - lo) / span * height;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", k ? " " : "", x, y);
        out << buf;
    }
    out << "\"/>\n</svg>\n";
}

template <class Body>
int guarded(const RunOptions& opts, Body&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        note(opts, std::string("config error: ") + e.what());
        return exit_config_error;
    } catch (const Error& e) {
        note(opts, std::string("numerical failure: ") + e.what());
        return exit_numerical_failure;
    }
}

}  // namespace

int run_minimize_sweep(std::string_view text, const RunOptions& opts) {
    return guarded(opts, [&] {
        struct Config {
            Domain1D domain = Domain1D::interval(-1.0, 1.0);
            std::vector<double> eps;
            std::vector<PointPenalty> pens;
            Potential pot = Potential::quadratic();
            SolveOptions solve;
            json root;
            double res = 1e-3;
            bool fields = true;
            bool svg = false;
        };
        const Config cfg = parse_config(text, [&](const json& root) {
            Config c;
            c.root = root;
            if (root.contains("domain")) c.domain = detail::domain_from_json(root.at("domain"));
            c.eps = schedule(root);
            c.pens = penalties(root);
            c.pot = potential(root);
            c.solve = solver(root);
            c.res = resolution(root, opts);
            c.fields = root.value("fields", true);
            c.svg = root.value("svg", false);
            for (const auto& pen : c.pens) {
                if (!c.domain.is_interior(pen.location)) throw ConfigError("penalty location must be interior");
                if (!(pen.weight >= 0.0)) throw ConfigError("penalty weight must be nonnegative");
            }
            for (double e : c.eps) (void)mesh_for(c.domain, root, e);
            return c;
        });

        // Predicted limit: a dip to the pointwise minimizer at every penalty.
        std::vector<ExceptionalPoint> dips;
        std::vector<double> predicted;
        for (const auto& pen : cfg.pens) {
            const auto m = limit_pointwise_minimizer(pen.weight, cfg.pot);
            predicted.push_back(m.p0);
            if (m.p0 < 1.0) dips.push_back({pen.location, m.p0, 1.0});
        }
        const SetValuedLimit limit(cfg.domain, dips);
        const double limit_energy = limit_energy_smm_b(limit, cfg.pot, cfg.pens);

        std::vector<std::vector<std::string>> rows;
        std::vector<std::pair<std::size_t, Field>> fields;
        bool failed = false;
        for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
            const double eps = cfg.eps[i];
            const Mesh mesh = mesh_for(cfg.domain, cfg.root, eps);
            std::string status = "ok";
            std::optional<Field> v;
            try {
                if (cfg.pot.is_quadratic()) {
                    v = minimize_smm_b_quadratic(mesh, eps, cfg.pens);
                } else {
                    v = minimize_smm_b_general(mesh, eps, cfg.pot, cfg.pens, cfg.solve);
                }
            } catch (const ConvergenceError& e) {
                status = "convergence_failure";
                note(opts, "eps " + format_double(eps) + ": " + e.what());
                v = e.last_iterate();
                failed = true;
            }
            const auto report = energy_smm_b(*v, eps, cfg.pot, cfg.pens);
            const double dist = graph_distance(*v, limit, cfg.res);
            auto emit = [&](double a, double b, double va, double p0) {
                rows.push_back({format_double(eps), std::to_string(mesh.size()), format_double(a), format_double(b),
                                format_double(va), format_double(p0), format_double(report.smm()),
                                format_double(report.total), format_double(limit_energy), format_double(dist), status});
            };
            if (cfg.pens.empty()) emit(kNaN, kNaN, kNaN, kNaN);
            for (std::size_t l = 0; l < cfg.pens.size(); ++l)
                emit(cfg.pens[l].location, cfg.pens[l].weight, v->at(cfg.pens[l].location), predicted[l]);
            fields.emplace_back(i, std::move(*v));
        }

        prepare(opts.out_dir);
        auto out = open(opts.out_dir / "sweep.csv");
        out << "eps,nodes,a,b,value_at_a,predicted_value,smm_energy,total_energy,limit_energy,graph_distance,status\n";
        for (const auto& row : rows) {
            for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
            out << '\n';
        }
        for (const auto& [i, f] : fields) {
            if (cfg.fields) write_field_csv(f, opts.out_dir / ("field_" + tag(i) + ".csv"));
            if (cfg.svg) write_svg(opts.out_dir / ("field_" + tag(i) + ".svg"), f);
        }
        return failed ? exit_numerical_failure : exit_ok;
    });
}

int run_recovery(std::string_view text, const RunOptions& opts) {
    return guarded(opts, [&] {
        struct Config {
            SetValuedLimit xi{Domain1D::torus(), {}};
            Potential pot = Potential::quadratic();
            std::vector<double> eps;
            double mu = 0.0;
            LimsupOptions limsup;
            bool fields = false;
        };
        const Config cfg = parse_config(text, [&](const json& root) {
            Config c;
            c.xi = parse_set_valued_limit(root.at("limit").dump());
            c.pot = potential(root);
            c.eps = schedule(root);
            c.mu = positive(root, "mu");
            c.limsup.cells_per_eps = positive_or(root, "cells_per_eps", c.limsup.cells_per_eps);
            c.limsup.slack_constant = root.value("slack_constant", c.limsup.slack_constant);
            c.limsup.resolution = resolution(root, opts);
            c.limsup.penalties = penalties(root);
            c.fields = root.value("fields", false);
            for (const auto& pen : c.limsup.penalties)
                if (!c.xi.domain().is_interior(pen.location)) throw ConfigError("penalty location must be interior");
            return c;
        });

        const auto rows = verify_limsup(cfg.xi, cfg.pot, cfg.eps, cfg.mu, cfg.limsup);
        std::vector<Field> fields;
        if (cfg.fields) {
            for (double eps : cfg.eps)
                fields.push_back(build_recovery(cfg.xi, eps, cfg.mu, cfg.pot,
                                                recovery_mesh(cfg.xi.domain(), eps, cfg.limsup.cells_per_eps))
                                     .w);
        }
        prepare(opts.out_dir);
        auto out = open(opts.out_dir / "recovery.csv");
        write_csv(rows, out);
        for (std::size_t i = 0; i < fields.size(); ++i) write_field_csv(fields[i], opts.out_dir / ("recovery_" + tag(i) + ".csv"));
        return exit_ok;
    });
}

int run_kwc(std::string_view text, const RunOptions& opts) {
    return guarded(opts, [&] {
        struct Config {
            std::optional<Field> g;
            double eps = 0.0, sigma = 0.0, lambda = 0.0;
            Potential pot = Potential::quadratic();
            SolveOptions solve;
        };
        const Config cfg = parse_config(text, [&](const json& root) {
            Config c;
            const Domain1D dom = root.contains("domain") ? detail::domain_from_json(root.at("domain"))
                                                         : Domain1D::interval(-1.0, 1.0);
            c.eps = positive(root, "eps");
            c.sigma = root.value("sigma", 1.0);
            c.lambda = positive(root, "lambda");
            if (!(c.sigma >= 0.0)) throw ConfigError("`sigma` must be nonnegative");
            c.pot = potential(root);
            c.solve = solver(root);
            c.g = field_from(root.at("data"), mesh_for(dom, root, c.eps));
            return c;
        });

        const auto r = minimize_kwc_alternating(*cfg.g, cfg.eps, cfg.sigma, cfg.pot, cfg.lambda, cfg.solve);
        prepare(opts.out_dir);
        {
            auto out = open(opts.out_dir / "kwc_fields.csv");
            std::vector<std::vector<double>> rows;
            for (std::size_t k = 0; k < r.u.size(); ++k) rows.push_back({r.u.mesh().node(k), (*cfg.g)[k], r.u[k], r.v[k]});
            write_rows(out, "x,g,u,v", rows);
        }
        {
            auto out = open(opts.out_dir / "kwc_energy.csv");
            std::vector<std::vector<double>> rows;
            for (std::size_t k = 0; k < r.energy_trace.size(); ++k) rows.push_back({static_cast<double>(k), r.energy_trace[k]});
            write_rows(out, "half_step,energy", rows);
        }
        {
            auto out = open(opts.out_dir / "kwc_summary.csv");
            write_rows(out, "rounds,weighted_tv,gradient,potential,fidelity,total,min_v",
                       {{static_cast<double>(r.rounds), r.report.weighted_tv, r.report.gradient, r.report.potential,
                         r.report.fidelity, r.report.total, *std::min_element(r.v.values().begin(), r.v.values().end())}});
        }
        return exit_ok;
    });
}

int run_unfold(std::string_view text, const RunOptions& opts) {
    return guarded(opts, [&] {
        struct Config {
            std::optional<Field> u;
            std::vector<double> exceptional;
            bool apply_G = false;
            Potential pot = Potential::quadratic();
        };
        const Config cfg = parse_config(text, [&](const json& root) {
            Config c;
            const Domain1D dom = root.contains("domain") ? detail::domain_from_json(root.at("domain"))
                                                         : Domain1D::interval(0.0, 1.0);
            const auto n = root.at("nodes").get<long long>();
            if (n < 2) throw ConfigError("`nodes` must be at least 2");
            c.u = field_from(root.at("field"), Mesh(dom, static_cast<std::size_t>(n)));
            c.apply_G = root.value("apply_G", false);
            c.pot = potential(root);
            if (root.contains("exceptional_xs")) c.exceptional = root.at("exceptional_xs").get<std::vector<double>>();
            return c;
        });

        Field u = *cfg.u;
        if (cfg.apply_G) {
            std::vector<double> g(u.size());
            for (std::size_t k = 0; k < u.size(); ++k) g[k] = cfg.pot.G(u[k]);
            u = Field(u.mesh(), std::move(g));
        }
        const auto curve = unfold(u);
        const auto lip = lipschitz_report(curve);
        const double rho = cfg.exceptional.empty() ? 0.0 : rho_decomposition(curve, cfg.exceptional).bound;

        prepare(opts.out_dir);
        {
            auto out = open(opts.out_dir / "unfolded.csv");
            write_csv(curve, out);
        }
        auto out = open(opts.out_dir / "summary.csv");
        write_rows(out, "L,tv_u,tv_U,max_U_excess,max_x_excess,rho_bound",
                   {{curve.length, total_variation(u), total_variation(curve), lip.max_U_excess, lip.max_x_excess, rho}});
        return exit_ok;
    });
}

int run_from_file(int (*runner)(std::string_view, const RunOptions&), const fs::path& config, const RunOptions& opts) {
    std::ifstream in(config, std::ios::binary);
    if (!in) {
        note(opts, "config error: cannot read " + config.string());
        return exit_config_error;
    }
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return runner(text, opts);
}

}  // namespace gammalim
