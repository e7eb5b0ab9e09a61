#pragma once

#include <optional>
#include <span>

#include "gammalim/mesh.hpp"
#include "gammalim/potential.hpp"

namespace gammalim {

/// Term-by-term breakdown of a discrete energy. Absent terms are zero.
struct EnergyReport {
    double gradient = 0.0;
    double potential = 0.0;
    double penalty = 0.0;
    double weighted_tv = 0.0;
    double fidelity = 0.0;
    double total = 0.0;

    /// Modica-Mortola part (gradient + potential).
    double smm() const { return gradient + potential; }
};

/// (eps/2) sum_cells h (dv/h)^2 + (1/(2 eps)) trapezoid(F(v)).
EnergyReport energy_smm(const Field& v, double eps, const Potential& p);

/// energy_smm plus sum_l b_l v(a_l)^2, with v(a_l) interpolated linearly.
/// Penalties must sit in the interior of an interval domain.
EnergyReport energy_smm_b(const Field& v, double eps, const Potential& p, std::span<const PointPenalty> penalties);

/// sigma * sum_k w_k |u_{k+1} - u_k| where w_k is the minimum of v^2 over cell k,
/// i.e. min(v_k, v_{k+1})^2 for nonnegative v (zero when v changes sign in the cell).
double weighted_tv(const Field& u, const Field& v, double sigma);

/// weighted_tv + energy_smm + lambda * trapezoid((u - g)^2). `g` is required iff lambda > 0.
EnergyReport energy_kwc(const Field& u, const Field& v, double eps, double sigma, const Potential& p,
                        double lambda, const Field* g = nullptr);

/// Plain discrete total variation (cyclic on the torus).
double total_variation(const Field& u);

/// sum_k |G(v_{k+1}) - G(v_k)|, the discrete Modica-Mortola lower bound.
double modica_mortola_lower_bound(const Field& v, const Potential& p);

/// Edge weight min over the cell of v^2.
double cell_weight(double a, double b);

}  // namespace gammalim
