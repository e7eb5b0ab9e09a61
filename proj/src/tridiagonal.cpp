#include "tridiagonal.hpp"

#include <cmath>

#include "gammalim/errors.hpp"

namespace gammalim::detail {

namespace {

std::vector<double> thomas(std::span<const double> diag, std::span<const double> off, std::span<const double> rhs) {
    const std::size_t n = diag.size();
    std::vector<double> c(n), x(rhs.begin(), rhs.end());
    double pivot = diag[0];
    if (!(std::abs(pivot) > 0.0)) throw InternalError("singular tridiagonal system");
    x[0] /= pivot;
    for (std::size_t k = 1; k < n; ++k) {
        c[k - 1] = off[k - 1] / pivot;
        pivot = diag[k] - off[k - 1] * c[k - 1];
        if (!(std::abs(pivot) > 0.0) || !std::isfinite(pivot)) throw InternalError("singular tridiagonal system");
        x[k] = (x[k] - off[k - 1] * x[k - 1]) / pivot;
    }
    for (std::size_t k = n - 1; k-- > 0;) x[k] -= c[k] * x[k + 1];
    return x;
}

std::vector<double> dense_solve(const Tridiagonal& a, std::span<const double> rhs) {
    const std::size_t n = a.diag.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        m[k][k] += a.diag[k];
        m[k][n] = rhs[k];
    }
    const std::size_t edges = a.cyclic ? n : n - 1;
    for (std::size_t k = 0; k < edges; ++k) {
        const std::size_t j = (k + 1) % n;
        m[k][j] += a.off[k];
        m[j][k] += a.off[k];
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        std::swap(m[col], m[piv]);
        if (!(std::abs(m[col][col]) > 0.0)) throw InternalError("singular system");
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (std::size_t c = col; c <= n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = m[k][n] / m[k][k];
    return x;
}

}  // namespace

std::vector<double> solve(const Tridiagonal& a, std::span<const double> rhs) {
    const std::size_t n = a.diag.size();
    if (rhs.size() != n) throw InternalError("tridiagonal: size mismatch");
    if (n <= 3) return dense_solve(a, rhs);
    if (!a.cyclic) return thomas(a.diag, std::span<const double>(a.off).first(n - 1), rhs);

    // Sherman-Morrison on the corner coupling.
    const double corner = a.off[n - 1];
    const double gamma = -a.diag[0];
    std::vector<double> d(a.diag);
    d[0] -= gamma;
    d[n - 1] -= corner * corner / gamma;
    const auto off = std::span<const double>(a.off).first(n - 1);
    const auto y = thomas(d, off, rhs);
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = corner;
    const auto z = thomas(d, off, u);
    const double vy = y[0] + corner / gamma * y[n - 1];
    const double vz = z[0] + corner / gamma * z[n - 1];
    const double factor = vy / (1.0 + vz);
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = y[k] - factor * z[k];
    return x;
}

std::vector<double> multiply(const Tridiagonal& a, std::span<const double> x) {
    const std::size_t n = a.diag.size();
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = a.diag[k] * x[k];
    const std::size_t edges = a.cyclic ? n : n - 1;
    for (std::size_t k = 0; k < edges; ++k) {
        const std::size_t j = (k + 1) % n;
        y[k] += a.off[k] * x[j];
        y[j] += a.off[k] * x[k];
    }
    return y;
}

}  // namespace gammalim::detail
