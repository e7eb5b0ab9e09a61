#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gammalim/mesh.hpp"
#include "gammalim/potential.hpp"
#include "gammalim/setvalued.hpp"

namespace gammalim {

struct Jump {
    double x;
    double d;
};

/// Finitely many jumps plus the variation of the absolutely continuous part.
class JumpFunction {
public:
    /// Jump locations must be distinct points of the domain interior, sizes positive.
    JumpFunction(Domain1D domain, std::vector<Jump> jumps, double ac_tv = 0.0, double left_value = 0.0);

    const Domain1D& domain() const { return domain_; }
    const std::vector<Jump>& jumps() const { return jumps_; }
    double ac_tv() const { return ac_tv_; }
    double left_value() const { return left_value_; }

private:
    Domain1D domain_;
    std::vector<Jump> jumps_;
    double ac_tv_;
    double left_value_;
};

/// `{"jumps":[{"x":0.5,"d":2.0}],"ac_tv":0.0}`; the domain is supplied by the caller.
JumpFunction parse_jump_function(std::string_view json, const Domain1D& domain);

/// Tolerance under which a jump and an exceptional point count as the same location.
inline constexpr double kLocationSnap = 1e-12;

/// sum_i 2 (G(lo_i) + G(hi_i)) - kappa_i max(G(lo_i), G(hi_i)), kappa_i = 1 on the
/// boundary of an interval and 0 otherwise.
double limit_energy_smm(const SetValuedLimit& xi, const Potential& p);

/// limit_energy_smm plus sum b_l (min Xi(a_l))^2. Penalties must be interior.
double limit_energy_smm_b(const SetValuedLimit& xi, const Potential& p, std::span<const PointPenalty> penalties);

/// sigma (ac_tv + jumps away from the exceptional set) + sigma sum d_i lo_i^2
/// over jumps at exceptional points + limit_energy_smm.
double limit_energy_kwc(const JumpFunction& u, const SetValuedLimit& xi, double sigma, const Potential& p);

struct PointwiseMinimum {
    double p0;
    double value;
};

/// Minimizer of q -> 2 G(q) + b q^2 over [0, 1].
PointwiseMinimum limit_pointwise_minimizer(double b, const Potential& p);

}  // namespace gammalim
