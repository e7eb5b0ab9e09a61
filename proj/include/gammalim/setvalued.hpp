#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gammalim/mesh.hpp"

namespace gammalim {

/// Exceptional point x with value [lo, hi] containing 1.
struct ExceptionalPoint {
    double x;
    double lo;
    double hi;
};

/// Set-valued function equal to {1} except at finitely many points.
class SetValuedLimit {
public:
    /// Validates lo <= 1 <= hi, lo < hi, distinct locations inside the domain.
    SetValuedLimit(Domain1D domain, std::vector<ExceptionalPoint> exceptional);

    const Domain1D& domain() const { return domain_; }
    const std::vector<ExceptionalPoint>& exceptional() const { return exceptional_; }
    bool empty() const { return exceptional_.empty(); }

    /// Minimum of the value set at x: lo at an exceptional point (within snap), else 1.
    double min_at(double x, double snap = 1e-12) const;

private:
    Domain1D domain_;
    std::vector<ExceptionalPoint> exceptional_;
};

/// `{"domain":{"kind":"interval","a":-1,"b":1},"exceptional":[{"x":0,"lo":0.5,"hi":1}]}`;
/// a torus domain is `{"kind":"torus"}`.
SetValuedLimit parse_set_valued_limit(std::string_view json);
std::string to_json(const SetValuedLimit& xi);

struct GraphPoint {
    double x;
    double y;
};

/// Finite sample of a graph in M x R.
struct GraphSet {
    Domain1D domain;
    std::vector<GraphPoint> points;
    double resolution;
};

/// Samples every segment of the piecewise-linear graph with spacing <= resolution.
GraphSet graph_of_field(const Field& u, double resolution);

/// The line y = 1 plus vertical segments [lo, hi] at the exceptional points.
GraphSet graph_of_limit(const SetValuedLimit& xi, double resolution);

/// Squared product distance d_M(x, x')^2 + (y - y')^2.
double squared_distance(const Domain1D& domain, const GraphPoint& a, const GraphPoint& b);

/// max_a min_b dist(a, b), by an x-sorted sweep with pruning.
double directed_hausdorff(const GraphSet& from, const GraphSet& to);

/// Hausdorff distance of two sampled graphs on the same domain.
double hausdorff(const GraphSet& a, const GraphSet& b);

/// hausdorff(graph_of_field(u), graph_of_limit(xi)).
double graph_distance(const Field& u, const SetValuedLimit& xi, double resolution);

}  // namespace gammalim
