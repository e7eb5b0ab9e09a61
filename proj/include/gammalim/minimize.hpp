#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gammalim/energy.hpp"
#include "gammalim/errors.hpp"
#include "gammalim/mesh.hpp"
#include "gammalim/potential.hpp"

namespace gammalim {

enum class StepRule { fixed, backtracking };

struct SolveOptions {
    int max_iterations = 5000;
    double tolerance = 1e-10;
    int rounds = 200;
    StepRule step_rule = StepRule::backtracking;
};

/// Raised when an iterative solver hits its iteration cap; carries the last iterate.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, Field last, int iterations, double residual)
        : Error(what), last_(std::move(last)), iterations_(iterations), residual_(residual) {}
    const Field& last_iterate() const { return last_; }
    int iterations() const { return iterations_; }
    double residual() const { return residual_; }

private:
    Field last_;
    int iterations_;
    double residual_;
};

/// Exact minimizer of (eps/2)int v'^2 + (1/(2 eps))int (v-1)^2 + b v(0)^2 on [-1, 1]
/// with natural boundary conditions.
class ClosedFormMinimizer {
public:
    ClosedFormMinimizer(double eps, double b);
    double operator()(double x) const;
    double eps() const { return eps_; }
    double b() const { return b_; }

private:
    double eps_;
    double b_;
    double q_;      // exp(-2/eps)
    double denom_;  // 1 - q^2 + b (1 + q)^2
};

ClosedFormMinimizer closed_form_minimizer(double eps, double b);

/// Quadratic form b * (w_i v_i + w_j v_j)^2, the discrete trace of a point penalty.
struct NodalPenalty {
    std::size_t i;
    std::size_t j;
    double wi;
    double wj;
    double weight;
};

std::vector<NodalPenalty> nodal_penalties(const Mesh& mesh, std::span<const PointPenalty> penalties);

/// Unique minimizer of the discrete energy_smm_b for F(v) = (v-1)^2, by a
/// (cyclic) tridiagonal solve of the Euler-Lagrange system.
Field minimize_smm_b_quadratic(const Mesh& mesh, double eps, std::span<const PointPenalty> penalties);
Field minimize_smm_b_quadratic(const Mesh& mesh, double eps, std::span<const NodalPenalty> penalties);

/// Gradient of the discrete energy_smm_b with respect to the nodal values.
std::vector<double> smm_b_gradient(const Field& v, double eps, const Potential& p,
                                   std::span<const NodalPenalty> penalties);

/// Descent for a general potential, started from v = 1 (or `initial`). Each
/// step uses the gradient preconditioned by the tridiagonal curvature model
/// (Laplacian plus local F''), with Armijo backtracking when requested.
Field minimize_smm_b_general(const Mesh& mesh, double eps, const Potential& p, std::span<const PointPenalty> penalties,
                             const SolveOptions& opts);
Field minimize_smm_b_general(const Mesh& mesh, double eps, const Potential& p, std::span<const NodalPenalty> penalties,
                             const SolveOptions& opts, const Field* initial = nullptr);

/// Exact minimizer of sigma * weighted_tv(u, v) + lambda * trapezoid((u - g)^2).
Field prox_weighted_tv(const Field& g, const Field& v, double sigma, double lambda);

/// Exact minimizer of sum_k a_k (u_k - g_k)^2 + sum_k t_k |u_{k+1} - u_k| on a chain.
std::vector<double> weighted_tv_chain(std::span<const double> g, std::span<const double> data_weight,
                                      std::span<const double> edge_weight);

struct KwcResult {
    Field u;
    Field v;
    EnergyReport report;
    /// Energy after initialisation and after every half-step.
    std::vector<double> energy_trace;
    int rounds = 0;
};

/// Alternating minimization of energy_kwc with fidelity, starting from u = g, v = 1.
KwcResult minimize_kwc_alternating(const Field& g, double eps, double sigma, const Potential& p, double lambda,
                                   const SolveOptions& opts);

}  // namespace gammalim
