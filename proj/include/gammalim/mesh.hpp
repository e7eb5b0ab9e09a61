#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gammalim {

enum class DomainKind { interval, torus };

/// Closed interval [left, right] or the unit torus R/Z (represented on [0, 1)).
class Domain1D {
public:
    static Domain1D interval(double left, double right);
    static Domain1D torus();

    DomainKind kind() const { return kind_; }
    bool is_torus() const { return kind_ == DomainKind::torus; }
    double left() const { return left_; }
    double right() const { return right_; }
    double length() const { return right_ - left_; }

    /// |x - y| on an interval, min(|x - y|, 1 - |x - y|) on the torus.
    double distance(double x, double y) const;
    /// Representative in [0, 1) on the torus; identity on an interval.
    double wrap(double x) const;
    bool contains(double x) const;
    bool is_interior(double x) const;
    bool is_boundary(double x, double tol = 0.0) const;

    friend bool operator==(const Domain1D&, const Domain1D&) = default;

private:
    Domain1D(DomainKind kind, double left, double right) : kind_(kind), left_(left), right_(right) {}
    DomainKind kind_;
    double left_;
    double right_;
};

/// Uniform mesh. Interval meshes include both endpoints (spacing length/(n-1));
/// torus meshes hold n nodes k/n with node n identified with node 0.
class Mesh {
public:
    Mesh(Domain1D domain, std::size_t nodes);

    const Domain1D& domain() const { return domain_; }
    std::size_t size() const { return n_; }
    std::size_t cells() const { return domain_.is_torus() ? n_ : n_ - 1; }
    double spacing() const { return h_; }
    double node(std::size_t k) const { return domain_.left() + static_cast<double>(k) * h_; }
    /// Right neighbour of node k, cyclic on the torus. Valid for k < cells().
    std::size_t next(std::size_t k) const { return k + 1 == n_ ? 0 : k + 1; }
    /// Trapezoid weight of node k.
    double weight(std::size_t k) const;

    /// Cell containing x and the barycentric weight of its left node.
    struct Location {
        std::size_t left;
        std::size_t right;
        double left_weight;
    };
    Location locate(double x) const;

    friend bool operator==(const Mesh&, const Mesh&) = default;

private:
    Domain1D domain_;
    std::size_t n_;
    double h_;
};

/// Continuous piecewise-linear function given by its nodal values.
class Field {
public:
    Field(Mesh mesh, std::vector<double> values);

    static Field constant(const Mesh& mesh, double value);
    static Field sample(const Mesh& mesh, const std::function<double(double)>& fn);

    const Mesh& mesh() const { return mesh_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }

    /// Linear interpolation at x (exact nodal value when x sits on a node).
    double at(double x) const;

private:
    Mesh mesh_;
    std::vector<double> values_;
};

/// Point penalty b * v(a)^2.
struct PointPenalty {
    double location;
    double weight;
};

void require_same_mesh(const Field& a, const Field& b, const char* what);

}  // namespace gammalim
