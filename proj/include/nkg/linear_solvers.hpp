#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "nkg/fft.hpp"
#include "nkg/grid.hpp"

namespace nkg {

// Solvers for the shifted-Laplacian systems behind the implicit schemes:
//     (diag(alpha_j) - c * d2x) x = rhs,   alpha_j > 0, c >= 0,
// i.e. the cyclic tridiagonal matrix with diagonal alpha_j + 2c/h^2 and
// wrapped off-diagonal -c/h^2. Strict diagonal dominance makes unpivoted
// elimination safe.

namespace detail {

// Thomas elimination for tridiag(lo, d, up); overwrites d and rhs.
inline void tridiag_solve(std::vector<double>& d, double lo, double up,
                          std::vector<double>& rhs) {
    const std::size_t n = d.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = lo / d[i - 1];
        d[i] -= m * up;
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - up * rhs[i + 1]) / d[i];
}

}  // namespace detail

// Direct solve of (diag(alpha) - c * d2x) x = rhs through Sherman-Morrison on
// the cyclic corners. M in {2, 3} is handled as the small dense system that
// the wrapped stencil actually produces there.
inline GridFunction solve_shifted_laplacian(const Grid1D& g, const std::vector<double>& alpha,
                                            double c, const GridFunction& rhs) {
    require_match(g, rhs, "solve_shifted_laplacian");
    if (alpha.size() != g.M)
        throw std::invalid_argument("solve_shifted_laplacian: coefficient size mismatch");
    if (c < 0.0)
        throw std::invalid_argument("solve_shifted_laplacian: need c >= 0");
    const std::size_t M = g.M;
    const double ih2 = 1.0 / (g.h * g.h);
    const double o = -c * ih2;  // wrapped off-diagonal entry
    GridFunction x(M);

    if (c == 0.0) {
        for (std::size_t j = 0; j < M; ++j) x.v[j] = rhs.v[j] / alpha[j];
        return x;
    }
    if (M == 2) {
        // both neighbours of j are the other node: off-diagonal doubles
        const double d0 = alpha[0] + 2.0 * c * ih2, d1 = alpha[1] + 2.0 * c * ih2;
        const double q = 2.0 * o;
        const double det = d0 * d1 - q * q;
        x.v[0] = (rhs.v[0] * d1 - q * rhs.v[1]) / det;
        x.v[1] = (rhs.v[1] * d0 - q * rhs.v[0]) / det;
        return x;
    }
    if (M == 3) {
        // every pair of nodes is adjacent once; solve the 3x3 directly
        double A[3][3] = {{alpha[0] + 2.0 * c * ih2, o, o},
                          {o, alpha[1] + 2.0 * c * ih2, o},
                          {o, o, alpha[2] + 2.0 * c * ih2}};
        double b[3] = {rhs.v[0], rhs.v[1], rhs.v[2]};
        for (int k = 0; k < 2; ++k)
            for (int i = k + 1; i < 3; ++i) {
                const double m = A[i][k] / A[k][k];
                for (int jj = k; jj < 3; ++jj) A[i][jj] -= m * A[k][jj];
                b[i] -= m * b[k];
            }
        for (int i = 2; i >= 0; --i) {
            double s = b[i];
            for (int jj = i + 1; jj < 3; ++jj) s -= A[i][jj] * x.v[jj];
            x.v[i] = s / A[i][i];
        }
        return x;
    }

    std::vector<double> d(M), work(M), z(M);
    for (std::size_t j = 0; j < M; ++j) d[j] = alpha[j] + 2.0 * c * ih2;

    // corner rank-one update: A = B + u v^T with u = (gma, 0, .., o)^T,
    // v = (1, 0, .., o/gma)^T; gma = -d[0] keeps B diagonally dominant
    const double gma = -d[0];
    std::vector<double> db = d;
    db[0] = d[0] - gma;
    db[M - 1] = d[M - 1] - o * o / gma;

    std::vector<double> y(rhs.v);
    {
        std::vector<double> dtmp = db;
        detail::tridiag_solve(dtmp, o, o, y);
    }
    std::vector<double> u(M, 0.0);
    u[0] = gma;
    u[M - 1] = o;
    {
        std::vector<double> dtmp = db;
        detail::tridiag_solve(dtmp, o, o, u);
    }
    const double frac = (y[0] + (o / gma) * y[M - 1]) / (1.0 + u[0] + (o / gma) * u[M - 1]);
    for (std::size_t j = 0; j < M; ++j) x.v[j] = y[j] - frac * u[j];
    return x;
}

// Same system with constant alpha, diagonalized by the DFT: the second
// difference has eigenvalue -4 sin^2(pi l / M) / h^2 on mode l. Owns a plan
// and scratch, so keep one instance per mesh (and per thread).
class ShiftedLaplacianFft {
public:
    explicit ShiftedLaplacianFft(const Grid1D& g) : M_(g.M), plan_(g.M), lam_(g.M), buf_(g.M) {
        const double ih2 = 1.0 / (g.h * g.h);
        for (std::size_t l = 0; l < M_; ++l) {
            const double s = std::sin(3.141592653589793238462643383279502884 *
                                      static_cast<double>(l) / static_cast<double>(M_));
            lam_[l] = 4.0 * s * s * ih2;  // eigenvalue of -d2x
        }
    }

    std::size_t size() const { return M_; }

    GridFunction solve(double alpha, double c, const GridFunction& rhs) const {
        if (rhs.size() != M_)
            throw std::invalid_argument("ShiftedLaplacianFft: size mismatch");
        for (std::size_t j = 0; j < M_; ++j) buf_[j] = rhs.v[j];
        plan_.forward(buf_.data());
        for (std::size_t l = 0; l < M_; ++l) buf_[l] /= (alpha + c * lam_[l]);
        plan_.inverse(buf_.data());
        GridFunction x(M_);
        for (std::size_t j = 0; j < M_; ++j) x.v[j] = buf_[j].real();
        return x;
    }

private:
    std::size_t M_;
    Fft plan_;
    std::vector<double> lam_;
    mutable std::vector<cplx> buf_;
};

}  // namespace nkg
