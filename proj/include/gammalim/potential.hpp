#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gammalim {

enum class PotentialKind { quadratic, tabulated };

/// Outcome of checking the single-well conditions on a potential.
struct ConditionReport {
    bool f1 = false;        // nonnegative, vanishing exactly at v = 1
    bool f2 = false;        // positive at the far ends of the range
    bool f2_prime = false;  // F(v) >= c0 v^2 - c1 with the stored constants
    double c0 = 0.0;
    double c1 = 0.0;
    std::vector<std::string> notes;

    bool all_pass() const { return f1 && f2 && f2_prime; }
};

/// Single-well potential F together with G(v) = |int_1^v sqrt(F)|.
///
/// The quadratic kind is F(v) = (v-1)^2 with G(v) = (v-1)^2/2 in closed form.
/// The tabulated kind interpolates samples of F with a monotone cubic
/// (Fritsch-Carlson) so that F is C^1 and keeps the sign pattern of the data;
/// G is a composite trapezoid of sqrt(F) with the stated quadrature step.
/// Tabulated potentials are only defined on the sampled range, which must
/// contain v = 1; the growth of F beyond the table is not modelled.
class Potential {
public:
    static Potential quadratic();

    /// `v` strictly increasing, `f` the matching samples of F, `step` > 0.
    /// `growth` optionally fixes (c0, c1); otherwise they are derived from the table.
    static Potential tabulated(std::vector<double> v, std::vector<double> f, double step,
                               std::optional<std::pair<double, double>> growth = std::nullopt);

    /// Reads a two-column CSV with header `v,F`.
    static Potential from_csv(const std::filesystem::path& path, double step);

    PotentialKind kind() const { return kind_; }
    bool is_quadratic() const { return kind_ == PotentialKind::quadratic; }

    double F(double v) const;
    double G(double v) const;
    double dF(double v) const;
    double d2F(double v) const;

    /// Sampled range; infinite for the quadratic kind.
    double min_v() const;
    double max_v() const;
    bool in_range(double v) const { return v >= min_v() && v <= max_v(); }

    double c0() const { return c0_; }
    double c1() const { return c1_; }
    double quadrature_step() const { return step_; }
    std::span<const double> table_v() const { return table_v_; }
    std::span<const double> table_f() const { return table_f_; }

private:
    Potential() = default;
    void require_in_range(double v) const;
    std::size_t segment(double v) const;
    double root_f(double v) const;

    PotentialKind kind_ = PotentialKind::quadratic;
    std::vector<double> table_v_;
    std::vector<double> table_f_;
    std::vector<double> slopes_;   // Hermite derivatives at the knots
    double step_ = 0.0;
    // Cumulative trapezoid of sqrt(F) from 1 upward and downward in units of step_.
    std::vector<double> g_up_;
    std::vector<double> g_down_;
    double c0_ = 0.5;
    double c1_ = 1.0;
};

double eval_F(const Potential& p, double v);
double eval_G(const Potential& p, double v);
ConditionReport check_conditions(const Potential& p);

/// Largest cutoff parameter delta (0.25 * 2^-k) keeping F <= 1 within delta*beta of 1.
double cutoff_delta_cap(const Potential& p, double beta);

}  // namespace gammalim
