#include <cmath>
#include <vector>

#include "doctest.h"
#include "gammalim/errors.hpp"
#include "gammalim/limits.hpp"

using namespace gammalim;

namespace {

Potential quartic() {
    std::vector<double> v, f;
    for (int k = 0; k <= 300; ++k) {
        const double x = -1.0 + 0.01 * k;
        v.push_back(x);
        f.push_back(std::pow(x - 1.0, 4));
    }
    return Potential::tabulated(v, f, 1e-4);
}

}  // namespace

TEST_CASE("limit energy of the single-well functional") {
    const auto p = Potential::quadratic();
    const auto iv = Domain1D::interval(0.0, 1.0);
    CHECK(limit_energy_smm(SetValuedLimit(iv, {}), p) == 0.0);
    CHECK(limit_energy_smm(SetValuedLimit(iv, {{0.5, 0.0, 1.0}}), p) == doctest::Approx(1.0));
    CHECK(limit_energy_smm(SetValuedLimit(iv, {{0.0, 0.0, 1.0}}), p) == doctest::Approx(0.5));
    CHECK(limit_energy_smm(SetValuedLimit(Domain1D::torus(), {{0.0, 0.0, 1.0}}), p) == doctest::Approx(1.0));

    // A boundary entry never costs more than the same entry inside.
    for (double lo : {0.0, 0.3, 0.9}) {
        for (double hi : {1.0, 1.2, 2.0}) {
            if (lo == 1.0 && hi == 1.0) continue;
            const double inner = limit_energy_smm(SetValuedLimit(iv, {{0.5, lo, hi}}), p);
            const double edge = limit_energy_smm(SetValuedLimit(iv, {{1.0, lo, hi}}), p);
            CHECK(edge <= inner);
        }
    }
    // Additivity over disjoint supports.
    const double a = limit_energy_smm(SetValuedLimit(iv, {{0.2, 0.1, 1.3}}), p);
    const double b = limit_energy_smm(SetValuedLimit(iv, {{0.7, 0.6, 1.0}}), p);
    CHECK(limit_energy_smm(SetValuedLimit(iv, {{0.2, 0.1, 1.3}, {0.7, 0.6, 1.0}}), p) == doctest::Approx(a + b));
}

TEST_CASE("limit energy with point penalties") {
    const auto p = Potential::quadratic();
    const auto iv = Domain1D::interval(-1.0, 1.0);
    const std::vector<PointPenalty> one{{0.0, 1.0}};
    CHECK(limit_energy_smm_b(SetValuedLimit(iv, {{0.0, 0.5, 1.0}}), p, one) == doctest::Approx(0.5));
    CHECK(limit_energy_smm_b(SetValuedLimit(iv, {}), p, one) == doctest::Approx(1.0));
    const std::vector<PointPenalty> off{{0.7, 2.0}};
    CHECK(limit_energy_smm_b(SetValuedLimit(iv, {{0.3, 0.2, 1.0}}), p, off) == doctest::Approx(2.64));
    const std::vector<PointPenalty> edge{{1.0, 2.0}};
    CHECK_THROWS_AS(limit_energy_smm_b(SetValuedLimit(iv, {}), p, edge), DomainError);

    // The dip value minimizing the limit energy is the pointwise minimizer.
    for (double b : {0.5, 1.0, 3.0}) {
        const std::vector<PointPenalty> pen{{0.0, b}};
        double best_q = 1.0;
        double best = limit_energy_smm_b(SetValuedLimit(iv, {}), p, pen);
        for (int k = 0; k < 1000; ++k) {
            const double q = k / 1000.0;
            const double e = limit_energy_smm_b(SetValuedLimit(iv, {{0.0, q, 1.0}}), p, pen);
            if (e < best) {
                best = e;
                best_q = q;
            }
        }
        CHECK(best_q == doctest::Approx(limit_pointwise_minimizer(b, p).p0).epsilon(2e-3));
    }
}

TEST_CASE("limit energy of the KWC functional") {
    const auto p = Potential::quadratic();
    const auto iv = Domain1D::interval(0.0, 1.0);
    const JumpFunction u(iv, {{0.5, 2.0}});
    CHECK(limit_energy_kwc(u, SetValuedLimit(iv, {{0.5, 0.5, 1.0}}), 1.0, p) == doctest::Approx(0.75));
    const JumpFunction unit(iv, {{0.5, 1.0}});
    CHECK(limit_energy_kwc(unit, SetValuedLimit(iv, {}), 3.0, p) == doctest::Approx(3.0));
    const SetValuedLimit xi(iv, {{0.2, 0.3, 1.1}, {0.5, 0.5, 1.0}});
    CHECK(limit_energy_kwc(u, xi, 0.0, p) == limit_energy_smm(xi, p));
    const JumpFunction with_ac(iv, {{0.5, 2.0}}, 0.4);
    CHECK(limit_energy_kwc(with_ac, SetValuedLimit(iv, {}), 2.0, p) == doctest::Approx(2.0 * 2.4));

    CHECK_THROWS_AS(JumpFunction(iv, {{0.0, 1.0}}), DomainError);
    CHECK_THROWS_AS(JumpFunction(iv, {{0.5, -1.0}}), ArgumentError);
    CHECK_THROWS_AS(limit_energy_kwc(u, SetValuedLimit(Domain1D::torus(), {}), 1.0, p), ArgumentError);

    const auto parsed = parse_jump_function(R"({"jumps":[{"x":0.5,"d":2.0}],"ac_tv":0.0})", iv);
    CHECK(parsed.jumps().size() == 1);
    CHECK(parsed.jumps()[0].d == 2.0);
    CHECK_THROWS_AS(parse_jump_function(R"({"jumps":[{"x":0.5}]})", iv), ConfigError);
}

TEST_CASE("pointwise limit minimizer") {
    const auto p = Potential::quadratic();
    auto r = limit_pointwise_minimizer(1.0, p);
    CHECK(r.p0 == doctest::Approx(0.5));
    CHECK(r.value == doctest::Approx(0.5));
    r = limit_pointwise_minimizer(0.0, p);
    CHECK(r.p0 == 1.0);
    CHECK(r.value == 0.0);
    r = limit_pointwise_minimizer(3.0, p);
    CHECK(r.p0 == doctest::Approx(0.25));
    CHECK(r.value == doctest::Approx(0.75));

    const auto q = quartic();
    const auto m = limit_pointwise_minimizer(1.0, q);
    CHECK(m.p0 == doctest::Approx(0.5 * (3.0 - std::sqrt(5.0))).epsilon(1e-6));
    const auto z = limit_pointwise_minimizer(0.0, q);
    CHECK(z.p0 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(z.value == doctest::Approx(0.0));
    CHECK_THROWS_AS(limit_pointwise_minimizer(-1.0, p), ArgumentError);
}
