#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace nkg {

// Uniform periodic mesh on [a, b): M nodes x_j = a + j h with h = (b - a)/M.
// Node M coincides with node 0 by periodicity and is never stored.
struct Grid1D {
    double a = 0.0;
    double b = 1.0;
    std::size_t M = 0;
    double h = 0.0;

    double node(std::size_t j) const { return a + h * static_cast<double>(j); }
};

inline Grid1D make_grid(double a, double b, std::size_t M) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        throw std::invalid_argument("make_grid: need finite a < b");
    if (M < 2)
        throw std::invalid_argument("make_grid: need at least two nodes");
    Grid1D g;
    g.a = a;
    g.b = b;
    g.M = M;
    g.h = (b - a) / static_cast<double>(M);
    return g;
}

// Real nodal values on a periodic mesh; difference operators wrap the index.
struct GridFunction {
    std::vector<double> v;

    GridFunction() = default;
    explicit GridFunction(std::size_t M, double fill = 0.0) : v(M, fill) {}

    std::size_t size() const { return v.size(); }
    double operator[](std::size_t j) const { return v[j]; }
    double& operator[](std::size_t j) { return v[j]; }
};

inline GridFunction sample(const Grid1D& g, const std::function<double(double)>& f) {
    GridFunction u(g.M);
    for (std::size_t j = 0; j < g.M; ++j) u.v[j] = f(g.node(j));
    return u;
}

inline void require_match(const Grid1D& g, const GridFunction& u, const char* who) {
    if (u.size() != g.M) throw std::invalid_argument(std::string(who) + ": grid size mismatch");
}

// Second central difference (u_{j+1} - 2 u_j + u_{j-1}) / h^2, wrapped.
// Grouped as a difference of first differences: for smooth u the rounding
// then sits at the h u' scale, so the pointwise noise stays near
// eps * |u'| / h instead of eps * |u| / h^2 on fine grids.
inline GridFunction d2x(const Grid1D& g, const GridFunction& u) {
    require_match(g, u, "d2x");
    const std::size_t M = g.M;
    GridFunction r(M);
    const double ih2 = 1.0 / (g.h * g.h);
    for (std::size_t j = 0; j < M; ++j) {
        const std::size_t jp = (j + 1 == M) ? 0 : j + 1;
        const std::size_t jm = (j == 0) ? M - 1 : j - 1;
        r.v[j] = ((u.v[jp] - u.v[j]) - (u.v[j] - u.v[jm])) * ih2;
    }
    return r;
}

// Forward difference (u_{j+1} - u_j) / h, wrapped.
inline GridFunction dplus_x(const Grid1D& g, const GridFunction& u) {
    require_match(g, u, "dplus_x");
    const std::size_t M = g.M;
    GridFunction r(M);
    const double ih = 1.0 / g.h;
    for (std::size_t j = 0; j < M; ++j) {
        const std::size_t jp = (j + 1 == M) ? 0 : j + 1;
        r.v[j] = (u.v[jp] - u.v[j]) * ih;
    }
    return r;
}

// Trapezoidal l2 pairing h * sum_j u_j v_j (exact for periodic grid sums).
inline double inner(const Grid1D& g, const GridFunction& u, const GridFunction& w) {
    require_match(g, u, "inner");
    require_match(g, w, "inner");
    double s = 0.0;
    for (std::size_t j = 0; j < g.M; ++j) s += u.v[j] * w.v[j];
    return g.h * s;
}

inline double norm_l2(const Grid1D& g, const GridFunction& u) {
    return std::sqrt(inner(g, u, u));
}

inline double norm_linf(const GridFunction& u) {
    double m = 0.0;
    for (double x : u.v) m = std::max(m, std::abs(x));
    return m;
}

// Discrete H1 seminorm |u|_1 = ||dplus_x u||_l2 without the intermediate vector.
inline double seminorm_h1(const Grid1D& g, const GridFunction& u) {
    require_match(g, u, "seminorm_h1");
    const std::size_t M = g.M;
    double s = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        const std::size_t jp = (j + 1 == M) ? 0 : j + 1;
        const double d = u.v[jp] - u.v[j];
        s += d * d;
    }
    return std::sqrt(s / g.h);  // h * sum (d/h)^2 = sum d^2 / h
}

// Sup norm with an explicit finiteness sweep; NaN never survives a max().
inline bool finite_linf(const GridFunction& u, double& out) {
    double m = 0.0;
    bool ok = true;
    for (double x : u.v) {
        if (!std::isfinite(x)) ok = false;
        m = std::max(m, std::abs(x));
    }
    out = m;
    return ok;
}

}  // namespace nkg
