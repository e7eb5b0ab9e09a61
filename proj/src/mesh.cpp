#include "gammalim/mesh.hpp"

#include <cmath>
#include <sstream>

#include "gammalim/errors.hpp"

namespace gammalim {

namespace {
constexpr double kNodeSnap = 1e-9;  // relative to the spacing
}

Domain1D Domain1D::interval(double left, double right) {
    if (!std::isfinite(left) || !std::isfinite(right) || !(left < right))
        throw ArgumentError("interval domain needs finite endpoints with left < right");
    return Domain1D(DomainKind::interval, left, right);
}

Domain1D Domain1D::torus() { return Domain1D(DomainKind::torus, 0.0, 1.0); }

double Domain1D::wrap(double x) const {
    if (!is_torus()) return x;
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

double Domain1D::distance(double x, double y) const {
    const double d = std::abs(x - y);
    if (!is_torus()) return d;
    const double r = d - std::floor(d);
    return std::min(r, 1.0 - r);
}

bool Domain1D::contains(double x) const {
    return is_torus() ? std::isfinite(x) : (x >= left_ && x <= right_);
}

bool Domain1D::is_interior(double x) const {
    return is_torus() ? std::isfinite(x) : (x > left_ && x < right_);
}

bool Domain1D::is_boundary(double x, double tol) const {
    if (is_torus()) return false;
    return std::abs(x - left_) <= tol || std::abs(x - right_) <= tol;
}

Mesh::Mesh(Domain1D domain, std::size_t nodes) : domain_(domain), n_(nodes), h_(0.0) {
    if (n_ < 2) throw ArgumentError("a mesh needs at least two nodes");
    h_ = domain_.is_torus() ? 1.0 / static_cast<double>(n_)
                            : domain_.length() / static_cast<double>(n_ - 1);
}

double Mesh::weight(std::size_t k) const {
    if (domain_.is_torus()) return h_;
    return (k == 0 || k + 1 == n_) ? 0.5 * h_ : h_;
}

Mesh::Location Mesh::locate(double x) const {
    if (!domain_.contains(x)) {
        std::ostringstream msg;
        msg << "point " << x << " outside the domain";
        throw DomainError(msg.str());
    }
    const double t = (domain_.wrap(x) - domain_.left()) / h_;
    const double nearest = std::round(t);
    if (std::abs(t - nearest) < kNodeSnap) {
        std::size_t k = static_cast<std::size_t>(nearest);
        if (k >= n_) k = domain_.is_torus() ? k % n_ : n_ - 1;
        return {k, k, 1.0};
    }
    std::size_t k = static_cast<std::size_t>(std::floor(t));
    if (domain_.is_torus()) {
        k %= n_;
    } else if (k + 1 >= n_) {
        k = n_ - 2;
    }
    const double frac = t - std::floor(t);
    return {k, next(k), 1.0 - frac};
}

Field::Field(Mesh mesh, std::vector<double> values) : mesh_(std::move(mesh)), values_(std::move(values)) {
    if (values_.size() != mesh_.size()) throw ShapeError("field value count differs from the node count");
}

Field Field::constant(const Mesh& mesh, double value) {
    return Field(mesh, std::vector<double>(mesh.size(), value));
}

Field Field::sample(const Mesh& mesh, const std::function<double(double)>& fn) {
    std::vector<double> v(mesh.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(mesh.node(k));
    return Field(mesh, std::move(v));
}

double Field::at(double x) const {
    const auto loc = mesh_.locate(x);
    if (loc.left == loc.right) return values_[loc.left];
    return loc.left_weight * values_[loc.left] + (1.0 - loc.left_weight) * values_[loc.right];
}

void require_same_mesh(const Field& a, const Field& b, const char* what) {
    if (!(a.mesh() == b.mesh())) throw ShapeError(std::string(what) + ": fields live on different meshes");
}

}  // namespace gammalim
