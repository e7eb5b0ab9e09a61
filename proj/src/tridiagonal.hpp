#pragma once

#include <span>
#include <vector>

namespace gammalim::detail {

/// Symmetric tridiagonal system. `off[k]` couples node k and node k+1; when
/// `cyclic` is set, `off` has one more entry coupling the last node and node 0.
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;
    bool cyclic = false;
};

std::vector<double> solve(const Tridiagonal& a, std::span<const double> rhs);

/// y = A x
std::vector<double> multiply(const Tridiagonal& a, std::span<const double> x);

}  // namespace gammalim::detail
