#include "gammalim/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "gammalim/errors.hpp"

namespace gammalim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Fritsch-Carlson derivative estimates for a shape-preserving cubic.
std::vector<double> pchip_slopes(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::vector<double> m(n, 0.0);
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x[k + 1] - x[k];
        d[k] = (y[k + 1] - y[k]) / h[k];
    }
    if (n == 2) {
        m[0] = m[1] = d[0];
        return m;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (d[k - 1] * d[k] <= 0.0) {
            m[k] = 0.0;
        } else {
            const double w1 = 2.0 * h[k] + h[k - 1];
            const double w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (std::signbit(s) != std::signbit(d0) || d0 == 0.0) {
            s = 0.0;
        } else if (std::signbit(d0) != std::signbit(d1) && std::abs(s) > 3.0 * std::abs(d0)) {
            s = 3.0 * d0;
        }
        return s;
    };
    m[0] = end_slope(h[0], h[1], d[0], d[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    return m;
}

// Knots plus interior points of every segment, where the growth bound is checked.
std::vector<double> growth_samples(std::span<const double> v) {
    constexpr int kPerSegment = 8;
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < v.size(); ++k)
        for (int i = 0; i < kPerSegment; ++i) out.push_back(v[k] + (v[k + 1] - v[k]) * i / kPerSegment);
    out.push_back(v.back());
    return out;
}

}  // namespace

Potential Potential::quadratic() {
    Potential p;
    p.kind_ = PotentialKind::quadratic;
    p.c0_ = 0.5;
    p.c1_ = 1.0;
    return p;
}

Potential Potential::tabulated(std::vector<double> v, std::vector<double> f, double step,
                               std::optional<std::pair<double, double>> growth) {
    if (v.size() != f.size()) throw ArgumentError("tabulated potential: column lengths differ");
    if (v.size() < 2) throw ArgumentError("tabulated potential: need at least two samples");
    if (!(step > 0.0)) throw ArgumentError("tabulated potential: quadrature step must be positive");
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!std::isfinite(v[k]) || !std::isfinite(f[k]))
            throw ArgumentError("tabulated potential: non-finite sample");
        if (k > 0 && !(v[k] > v[k - 1]))
            throw ArgumentError("tabulated potential: v must be strictly increasing");
    }
    if (!(v.front() <= 1.0 && 1.0 <= v.back()))
        throw RangeError("tabulated potential: range must contain v = 1");

    Potential p;
    p.kind_ = PotentialKind::tabulated;
    p.table_v_ = std::move(v);
    p.table_f_ = std::move(f);
    p.step_ = step;
    p.slopes_ = pchip_slopes(p.table_v_, p.table_f_);

    auto fill = [&p](std::vector<double>& acc, double sign, double limit) {
        acc.assign(1, 0.0);
        double prev = p.root_f(1.0);
        for (std::size_t k = 1;; ++k) {
            const double x = 1.0 + sign * static_cast<double>(k) * p.step_;
            if (sign > 0 ? x > limit : x < limit) break;
            const double cur = p.root_f(x);
            acc.push_back(acc.back() + 0.5 * p.step_ * (prev + cur));
            prev = cur;
        }
    };
    fill(p.g_up_, 1.0, p.table_v_.back());
    fill(p.g_down_, -1.0, p.table_v_.front());

    if (growth) {
        p.c0_ = growth->first;
        p.c1_ = growth->second;
    } else {
        double c0 = kInf;
        for (double end : {p.table_v_.front(), p.table_v_.back()}) {
            if (end != 0.0) c0 = std::min(c0, 0.5 * p.F(end) / (end * end));
        }
        p.c0_ = std::isfinite(c0) ? std::max(c0, 0.0) : 0.0;
        double c1 = 0.0;
        for (double x : growth_samples(p.table_v_)) c1 = std::max(c1, p.c0_ * x * x - p.F(x));
        p.c1_ = c1;
    }
    return p;
}

Potential Potential::from_csv(const std::filesystem::path& path, double step) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open potential table " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ArgumentError("potential table is empty");
    std::string header;
    for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) header += c;
    if (header != "v,F") throw ArgumentError("potential table header must be `v,F`, got `" + line + "`");
    std::vector<double> v, f;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b))
            throw ArgumentError("malformed potential row: " + line);
        try {
            v.push_back(std::stod(a));
            f.push_back(std::stod(b));
        } catch (const std::exception&) {
            throw ArgumentError("malformed potential row: " + line);
        }
    }
    return tabulated(std::move(v), std::move(f), step);
}

double Potential::min_v() const {
    return kind_ == PotentialKind::quadratic ? -kInf : table_v_.front();
}

double Potential::max_v() const {
    return kind_ == PotentialKind::quadratic ? kInf : table_v_.back();
}

void Potential::require_in_range(double v) const {
    if (!(v >= min_v() && v <= max_v())) {
        std::ostringstream msg;
        msg << "v = " << v << " outside tabulated range [" << min_v() << ", " << max_v() << "]";
        throw RangeError(msg.str());
    }
}

std::size_t Potential::segment(double v) const {
    auto it = std::upper_bound(table_v_.begin(), table_v_.end(), v);
    std::size_t k = it == table_v_.begin() ? 0 : static_cast<std::size_t>(it - table_v_.begin()) - 1;
    return std::min(k, table_v_.size() - 2);
}

double Potential::F(double v) const {
    if (kind_ == PotentialKind::quadratic) return (v - 1.0) * (v - 1.0);
    require_in_range(v);
    const std::size_t k = segment(v);
    const double h = table_v_[k + 1] - table_v_[k];
    const double t = (v - table_v_[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double value = (2 * t3 - 3 * t2 + 1) * table_f_[k] + (t3 - 2 * t2 + t) * h * slopes_[k] +
                         (-2 * t3 + 3 * t2) * table_f_[k + 1] + (t3 - t2) * h * slopes_[k + 1];
    return value;
}

double Potential::dF(double v) const {
    if (kind_ == PotentialKind::quadratic) return 2.0 * (v - 1.0);
    require_in_range(v);
    const std::size_t k = segment(v);
    const double h = table_v_[k + 1] - table_v_[k];
    const double t = (v - table_v_[k]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * table_f_[k] + (3 * t2 - 4 * t + 1) * h * slopes_[k] +
            (-6 * t2 + 6 * t) * table_f_[k + 1] + (3 * t2 - 2 * t) * h * slopes_[k + 1]) /
           h;
}

double Potential::d2F(double v) const {
    if (kind_ == PotentialKind::quadratic) return 2.0;
    require_in_range(v);
    const std::size_t k = segment(v);
    const double h = table_v_[k + 1] - table_v_[k];
    const double t = (v - table_v_[k]) / h;
    return ((12 * t - 6) * table_f_[k] + (6 * t - 4) * h * slopes_[k] + (-12 * t + 6) * table_f_[k + 1] +
            (6 * t - 2) * h * slopes_[k + 1]) /
           (h * h);
}

double Potential::root_f(double v) const { return std::sqrt(std::max(F(v), 0.0)); }

double Potential::G(double v) const {
    if (kind_ == PotentialKind::quadratic) return 0.5 * (v - 1.0) * (v - 1.0);
    require_in_range(v);
    const bool up = v >= 1.0;
    const auto& acc = up ? g_up_ : g_down_;
    const double dist = std::abs(v - 1.0);
    std::size_t k = static_cast<std::size_t>(std::floor(dist / step_));
    k = std::min(k, acc.size() - 1);
    const double node = up ? 1.0 + static_cast<double>(k) * step_ : 1.0 - static_cast<double>(k) * step_;
    return acc[k] + 0.5 * std::abs(v - node) * (root_f(node) + root_f(v));
}

double eval_F(const Potential& p, double v) { return p.F(v); }
double eval_G(const Potential& p, double v) { return p.G(v); }

ConditionReport check_conditions(const Potential& p) {
    ConditionReport r;
    r.c0 = p.c0();
    r.c1 = p.c1();
    if (p.is_quadratic()) {
        r.f1 = r.f2 = r.f2_prime = true;
        r.notes.emplace_back("quadratic: (v-1)^2 - (v^2/2 - 1) = (v-2)^2/2 >= 0");
        return r;
    }
    const auto v = p.table_v();
    const auto f = p.table_f();

    r.f1 = true;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (f[k] < 0.0) {
            r.f1 = false;
            r.notes.push_back("negative sample at v = " + std::to_string(v[k]));
        } else if (f[k] == 0.0 && v[k] != 1.0) {
            r.f1 = false;
            r.notes.push_back("additional zero at v = " + std::to_string(v[k]));
        }
    }
    if (std::abs(p.F(1.0)) > 1e-14) {
        r.f1 = false;
        r.notes.emplace_back("F(1) != 0");
    }

    r.f2 = p.F(v.front()) > 0.0 && p.F(v.back()) > 0.0;
    if (!r.f2) r.notes.emplace_back("F vanishes at a range endpoint");
    r.notes.emplace_back("(F2) checked at the tabulated range endpoints only");

    r.f2_prime = r.c0 > 0.0;
    for (double x : growth_samples(v)) {
        if (p.F(x) < r.c0 * x * x - r.c1 - 1e-12) {
            r.f2_prime = false;
            r.notes.push_back("growth bound violated at v = " + std::to_string(x));
            break;
        }
    }
    if (r.c0 <= 0.0) r.notes.emplace_back("no positive c0 available");
    return r;
}

double cutoff_delta_cap(const Potential& p, double beta) {
    double delta = 0.25;
    for (int k = 0; k < 60; ++k, delta *= 0.5) {
        const double reach = delta * beta;
        bool ok = true;
        for (int i = 0; i <= 64 && ok; ++i) {
            const double rho = 1.0 - reach + 2.0 * reach * i / 64.0;
            if (!p.in_range(rho)) continue;
            ok = p.F(rho) <= 1.0;
        }
        if (ok) return delta;
    }
    return delta;
}

}  // namespace gammalim
