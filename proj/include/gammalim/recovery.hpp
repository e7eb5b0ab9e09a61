#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "gammalim/mesh.hpp"
#include "gammalim/potential.hpp"
#include "gammalim/setvalued.hpp"

namespace gammalim {

/// Solution of dv/dx = sqrt(F(v)) moving from v(0) = xi toward 1, for x >= 0;
/// evaluated at |x| for negative arguments.
class Profile {
public:
    double xi() const { return xi_; }
    double beta() const { return beta_; }
    /// Length after which v = 1; infinite when 1 is only approached asymptotically.
    double x_star() const { return x_star_; }
    /// Largest x at which the profile is known (infinite for the closed form).
    double x_max() const { return x_max_; }

    double operator()(double x) const;
    /// Smallest x >= 0 with |v(x) - 1| <= gap.
    double reach(double gap) const;

    friend Profile profile(double xi, const Potential& p, double x_max, double step);

private:
    double xi_ = 0.0;
    double beta_ = 0.0;
    double sign_ = 1.0;  // +1 when xi < 1 (v increases), -1 otherwise
    bool closed_form_ = false;
    double x_star_ = std::numeric_limits<double>::infinity();
    double x_max_ = std::numeric_limits<double>::infinity();
    double step_ = 0.0;
    std::vector<double> v_;   // v at k * step
    std::vector<double> dv_;  // dv/dx at k * step
};

/// Quadratic potentials use the closed form 1 -/+ |1 - xi| e^{-x}. Tabulated
/// potentials integrate the ODE with classical Runge-Kutta at `step` up to
/// `x_max` and interpolate with cubic Hermite polynomials.
Profile profile(double xi, const Potential& p, double x_max, double step);

/// Profile followed by the unit-slope affine cap once |v - 1| <= delta * beta,
/// so that the value is exactly 1 for |x| >= eta.
class CutoffProfile {
public:
    CutoffProfile(Profile base, double delta);

    const Profile& base() const { return base_; }
    double delta() const { return delta_; }
    double x_switch() const { return x_switch_; }
    double eta() const { return eta_; }
    double operator()(double x) const;

private:
    Profile base_;
    double delta_;
    double x_switch_;
    double v_switch_;
    double eta_;
};

CutoffProfile cutoff(const Profile& pr, double delta);

/// One patched block of the recovery field.
struct RecoveryBlock {
    std::size_t entry;     // index into xi.exceptional()
    double beta;
    double delta;
    double begin;          // support [begin, end] in x (may leave [0, 1) on the torus)
    double end;
    bool boundary;
    double bound;
};

struct Recovery {
    Field w;
    double bound = 0.0;
    std::vector<RecoveryBlock> blocks;
    /// Exceptional points left out because their block did not fit.
    std::size_t dropped = 0;
};

/// Patched recovery field for xi at scale eps: blocks in order of decreasing
/// beta with delta_i = 2^{-i-2} mu (capped for the potential), keeping the
/// longest prefix whose supports are disjoint and fit in the domain.
Recovery build_recovery(const SetValuedLimit& xi, double eps, double mu, const Potential& p, const Mesh& mesh);

/// Mesh for scale eps with `cells_per_eps` cells per eps.
Mesh recovery_mesh(const Domain1D& domain, double eps, double cells_per_eps);

struct LimsupRow {
    double eps;
    double discrete_energy;
    double limit_energy;
    double mu;
    double graph_distance;
    double bound;
    std::size_t blocks;
    bool pass;
};

struct LimsupOptions {
    double cells_per_eps = 16.0;
    double resolution = 1e-3;
    /// Slack in the energy check is slack_constant * h^2 / eps.
    double slack_constant = 1.0;
    std::vector<PointPenalty> penalties;
};

/// Convergence table of build_recovery along a strictly decreasing schedule.
/// A row passes when its energy is at most limit + mu + slack and its graph
/// distance does not exceed that of the previous row.
std::vector<LimsupRow> verify_limsup(const SetValuedLimit& xi, const Potential& p, std::span<const double> eps_schedule,
                                     double mu, const LimsupOptions& opts = {});

/// CSV with header `eps,discrete_energy,limit_energy,mu,graph_distance,bound,blocks,pass`.
void write_csv(const std::vector<LimsupRow>& rows, std::ostream& out);

}  // namespace gammalim
