#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "gammalim/mesh.hpp"

namespace gammalim {

/// Graph of a piecewise-linear field reparametrized by arc length:
/// samples (s_k, x(s_k), U(s_k)) with s_0 = 0 and s_last = length.
struct UnfoldedCurve {
    Domain1D domain = Domain1D::interval(0.0, 1.0);
    std::vector<double> s;
    std::vector<double> x;
    std::vector<double> U;
    double length = 0.0;

    std::size_t size() const { return s.size(); }
    /// x(s) and U(s) by linear interpolation, clamped to [0, length].
    double x_at(double s_value) const;
    double U_at(double s_value) const;
};

/// Builds a curve from raw samples; checks sizes, s_0 = 0 and monotone s.
UnfoldedCurve make_curve(Domain1D domain, std::vector<double> s, std::vector<double> x, std::vector<double> U);

/// Arc-length unfolding. On the torus the curve is cut at node 0 and closed
/// by a final sample at x = 1 carrying u_0.
UnfoldedCurve unfold(const Field& u);

struct LipschitzReport {
    double max_U_excess = 0.0;       // max(|dU| - ds, 0) over segments
    double max_x_excess = 0.0;       // max(|dx| - ds, 0)
    double max_pythagoras_error = 0.0;  // max |dx^2 + dU^2 - ds^2| / ds^2
};
LipschitzReport lipschitz_report(const UnfoldedCurve& c);

/// sum |U_{k+1} - U_k| along the curve.
double total_variation(const UnfoldedCurve& c);

/// sup_s |x_a(s) - x_b(s)| over the common parameter range [0, min(L_a, L_b)].
double xbar_uniform_distance(const UnfoldedCurve& a, const UnfoldedCurve& b);

/// CSV with header `s,x,U`.
void write_csv(const UnfoldedCurve& c, std::ostream& out);

struct RelaxedLimits {
    double liminf = 0.0;
    double limsup = 0.0;
    /// Entry j-1 holds inf/sup over {(y, k) : d(y, x) < 1/j, k >= j}.
    std::vector<double> inf_table;
    std::vector<double> sup_table;
};

/// Finite-sequence tables for the relaxed lower and upper limits at x.
RelaxedLimits relaxed_limits(const std::vector<Field>& seq, double x);

/// min and max of a field over the open ball of radius r around x.
std::pair<double, double> ball_extrema(const Field& f, double x, double r);

/// min and max of U(s) over {s : d(x(s), x) <= tol}, exact on the segments.
std::pair<double, double> pointwise_semilimits_from_unfolding(const UnfoldedCurve& c, double x, double tol);

struct RhoPiece {
    double s_begin = 0.0;
    double s_end = 0.0;
    double rho = 0.0;       // max of V over the piece
    double x_peak = 0.0;    // x(s) at the maximizer
    double chi_bar = 1.0;   // 1/2 when the piece reaches an end of an interval curve
};

struct RhoEntry {
    double x = 0.0;
    std::vector<RhoPiece> pieces;
};

struct RhoDecomposition {
    std::vector<RhoEntry> entries;
    /// Pieces not within the capture radius of any exceptional point, or
    /// spanning the whole interval curve.
    std::vector<RhoPiece> unassigned;
    /// sum over assigned pieces of 2 * chi_bar * rho.
    double bound = 0.0;
};

/// Splits {V > zero_tol} into maximal pieces and assigns each to the nearest
/// exceptional point (by x at its peak) within `capture_radius`. The default
/// zero_tol is 1e-9 * max V.
RhoDecomposition rho_decomposition(const UnfoldedCurve& V, const std::vector<double>& exceptional_xs,
                                   std::optional<double> zero_tol = std::nullopt,
                                   double capture_radius = std::numeric_limits<double>::infinity());

}  // namespace gammalim
