#pragma once

#include <cfloat>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "nkg/errors.hpp"
#include "nkg/grid.hpp"
#include "nkg/linear_solvers.hpp"
#include "nkg/problem.hpp"

namespace nkg {

// Four three-level marches for  mass * u_tt - u_xx + u + eps^2 u^3 = 0
// written for the second time difference  dtt u^n = (u^{n+1} - 2u^n + u^{n-1}) / tau^2:
//
//   CNFD   mass dtt u - (1/2) d2x (u^{n+1} + u^{n-1}) + (1/2)(u^{n+1} + u^{n-1})
//                                        + eps^2 G(u^{n+1}, u^{n-1})  = 0
//   SIFD1  mass dtt u -       d2x u^n    + (1/2)(u^{n+1} + u^{n-1})
//                                        + eps^2 G(u^{n+1}, u^{n-1})  = 0
//   SIFD2  mass dtt u - (1/2) d2x (u^{n+1} + u^{n-1}) + (1/2)(u^{n+1} + u^{n-1})
//                                        + eps^2 (u^n)^3              = 0
//   LFFD   mass dtt u -       d2x u^n    + u^n + eps^2 (u^n)^3        = 0
//
// mass = 1 is the plain equation; mass = eps^{2 beta} reuses the same kernels
// for the rescaled oscillatory clock. CNFD couples all nodes through d2x and
// is solved by Newton on the periodic system; SIFD1 decouples into one strictly
// increasing scalar equation per node; SIFD2 and LFFD need no iteration.

enum class SchemeKind { CNFD, SIFD1, SIFD2, LFFD };

enum class LinearBackend { FFT, Dense };

inline const char* scheme_name(SchemeKind k) {
    switch (k) {
        case SchemeKind::CNFD: return "CNFD";
        case SchemeKind::SIFD1: return "SIFD1";
        case SchemeKind::SIFD2: return "SIFD2";
        case SchemeKind::LFFD: return "LFFD";
    }
    return "?";
}

inline SchemeKind parse_scheme(const std::string& name) {
    if (name == "CNFD") return SchemeKind::CNFD;
    if (name == "SIFD1") return SchemeKind::SIFD1;
    if (name == "SIFD2") return SchemeKind::SIFD2;
    if (name == "LFFD") return SchemeKind::LFFD;
    throw std::invalid_argument("parse_scheme: unknown scheme \"" + name + "\"");
}

struct SolverParams {
    double tol = 1e-12;  // l-inf residual target of the implicit stages
    int max_iter = 50;
    LinearBackend linear_backend = LinearBackend::FFT;
};

// Two live levels of a march; u_curr is level n, u_prev is level n - 1.
struct StepperState {
    SchemeKind scheme = SchemeKind::CNFD;
    Grid1D grid;
    double tau = 0.0;
    double mass = 1.0;
    double eps2 = 0.0;
    GridFunction u_prev, u_curr;
    long n = 0;
    SolverParams solver;

    // derived per-mesh resource, shared freely between copies
    mutable std::shared_ptr<ShiftedLaplacianFft> spectral;
};

namespace detail {

inline void validate_state(const StepperState& st, const char* who) {
    if (!(st.tau > 0.0) || !(st.mass > 0.0))
        throw std::invalid_argument(std::string(who) + ": need tau > 0 and mass > 0");
    if (st.u_prev.size() != st.grid.M || st.u_curr.size() != st.grid.M)
        throw std::invalid_argument(std::string(who) + ": level size mismatch");
}

inline const ShiftedLaplacianFft& spectral_solver(const StepperState& st) {
    if (!st.spectral || st.spectral->size() != st.grid.M)
        st.spectral = std::make_shared<ShiftedLaplacianFft>(st.grid);
    return *st.spectral;
}

// Machine-resolution stop: a correction this small cannot move the iterate.
inline bool negligible_step(double step_linf, double x_linf) {
    return step_linf <= 4.0 * DBL_EPSILON * (1.0 + x_linf);
}

}  // namespace detail

// Levels 0 and 1 from the initial data via the one-sided Taylor start
//   u^1 = phi + tau gamma + (tau^2 / 2)(d2x phi - phi - eps^2 phi^3),
// with d2x applied to the sampled vector. Exact to the order of the schemes.
inline std::pair<GridFunction, GridFunction> first_step(const ProblemSpec& spec,
                                                        const Grid1D& g, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("first_step: need tau > 0");
    const GridFunction u0 = sample(g, spec.phi);
    const GridFunction gam = sample(g, spec.gamma);
    const GridFunction lap = d2x(g, u0);
    const double eps2 = spec.eps * spec.eps;
    GridFunction u1(g.M);
    for (std::size_t j = 0; j < g.M; ++j) {
        const double p = u0.v[j];
        u1.v[j] = p + tau * gam.v[j] +
                  0.5 * tau * tau * (lap.v[j] - p - eps2 * p * p * p);
    }
    return {u0, u1};
}

inline GridFunction lffd_step(const StepperState& st) {
    detail::validate_state(st, "lffd_step");
    const Grid1D& g = st.grid;
    const GridFunction lap = d2x(g, st.u_curr);
    const double r = st.tau * st.tau / st.mass;
    GridFunction next(g.M);
    for (std::size_t j = 0; j < g.M; ++j) {
        const double u = st.u_curr.v[j];
        next.v[j] = 2.0 * u - st.u_prev.v[j] + r * (lap.v[j] - u - st.eps2 * u * u * u);
    }
    return next;
}

inline GridFunction sifd2_step(const StepperState& st) {
    detail::validate_state(st, "sifd2_step");
    const Grid1D& g = st.grid;
    const double it2 = st.mass / (st.tau * st.tau);
    const double alpha = it2 + 0.5;
    const GridFunction lap_prev = d2x(g, st.u_prev);
    GridFunction rhs(g.M);
    for (std::size_t j = 0; j < g.M; ++j) {
        const double u = st.u_curr.v[j];
        const double p = st.u_prev.v[j];
        rhs.v[j] = it2 * (2.0 * u - p) + 0.5 * lap_prev.v[j] - 0.5 * p -
                   st.eps2 * u * u * u;
    }
    if (st.solver.linear_backend == LinearBackend::FFT)
        return detail::spectral_solver(st).solve(alpha, 0.5, rhs);
    const std::vector<double> alpha_vec(g.M, alpha);
    return solve_shifted_laplacian(g, alpha_vec, 0.5, rhs);
}

// Scalar stage of SIFD1 at one node: the unique root of
//   psi(x) = a x + (eps2 / 4)(x + w)(x^2 + w^2) - rhs = 0,
// psi' = a + (eps2 / 4)(2 x^2 + (x + w)^2) >= a > 0. Newton clipped to a
// sign-change bracket, bisection step whenever the Newton point leaves it.
inline double sifd1_scalar_solve(double a, double eps2, double w, double rhs,
                                 double guess, const SolverParams& solver, long level) {
    if (eps2 == 0.0) return rhs / a;
    const auto psi = [&](double x) {
        return a * x + 0.25 * eps2 * (x + w) * (x * x + w * w) - rhs;
    };
    const auto dpsi = [&](double x) {
        return a + 0.25 * eps2 * (3.0 * x * x + 2.0 * w * x + w * w);
    };

    double x = guess;
    double fx = psi(x);
    if (std::abs(fx) <= solver.tol) return x;

    // psi is increasing with cubic growth both ways: expand to a sign change
    double lo = x, hi = x, step = 1.0 + std::abs(x);
    if (fx > 0.0) {
        for (int i = 0; psi(lo) > 0.0; ++i) {
            hi = lo;
            lo -= step;
            step *= 2.0;
            if (i > 300) throw convergence_error(level, fx);
        }
    } else {
        for (int i = 0; psi(hi) < 0.0; ++i) {
            lo = hi;
            hi += step;
            step *= 2.0;
            if (i > 300) throw convergence_error(level, fx);
        }
    }

    for (int it = 0; it < solver.max_iter; ++it) {
        fx = psi(x);
        if (std::abs(fx) <= solver.tol) return x;
        if (fx > 0.0) hi = x; else lo = x;
        double xn = x - fx / dpsi(x);
        // stagnation test before the safeguard: a sub-resolution Newton step
        // can land exactly on a bracket end and must not be replaced by a
        // midpoint jump
        if (detail::negligible_step(std::abs(xn - x), std::abs(x))) return xn;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        x = xn;
    }
    throw convergence_error(level, std::abs(fx));
}

inline GridFunction sifd1_step(const StepperState& st) {
    detail::validate_state(st, "sifd1_step");
    const Grid1D& g = st.grid;
    const double it2 = st.mass / (st.tau * st.tau);
    const double a = it2 + 0.5;
    const GridFunction lap = d2x(g, st.u_curr);
    GridFunction next(g.M);
    for (std::size_t j = 0; j < g.M; ++j) {
        const double u = st.u_curr.v[j];
        const double w = st.u_prev.v[j];
        const double rhs = it2 * (2.0 * u - w) + lap.v[j] - 0.5 * w;
        next.v[j] = sifd1_scalar_solve(a, st.eps2, w, rhs, 2.0 * u - w,
                                       st.solver, st.n + 1);
    }
    return next;
}

// Newton on the coupled CNFD system. The Jacobian
//   (mass / tau^2 + 1/2 + eps2 dG/dx) I - (1/2) d2x
// is strictly diagonally dominant, so the cyclic direct solve is safe. The
// residual cannot be evaluated below the roundoff of its own pieces (on fine
// grids the stencil terms alone contribute eps * |u'| / h per node), so the
// stop compares rn against the requested tolerance or a few ulps of the
// evaluation scale, whichever is larger; without the floor the iterate can
// cycle forever on sub-roundoff corrections.
inline GridFunction cnfd_step(const StepperState& st) {
    detail::validate_state(st, "cnfd_step");
    const Grid1D& g = st.grid;
    const std::size_t M = g.M;
    const double it2 = st.mass / (st.tau * st.tau);
    const double hih2 = 0.5 / (g.h * g.h);
    const GridFunction& u = st.u_curr;
    const GridFunction& p = st.u_prev;
    const GridFunction lap_prev = d2x(g, p);

    GridFunction x(M);
    for (std::size_t j = 0; j < M; ++j) x.v[j] = 2.0 * u.v[j] - p.v[j];

    GridFunction resid(M);
    std::vector<double> diag(M);
    double rn = 0.0;
    for (int it = 0;; ++it) {
        const GridFunction lap_x = d2x(g, x);
        rn = 0.0;
        double rscale = 0.0;  // abs-sum of the residual's pieces at the worst node
        for (std::size_t j = 0; j < M; ++j) {
            const std::size_t jp = (j + 1 == M) ? 0 : j + 1;
            const std::size_t jm = (j == 0) ? M - 1 : j - 1;
            const double r = it2 * ((x.v[j] - u.v[j]) - (u.v[j] - p.v[j])) -
                             0.5 * (lap_x.v[j] + lap_prev.v[j]) +
                             0.5 * (x.v[j] + p.v[j]) +
                             st.eps2 * eval_G(x.v[j], p.v[j]);
            resid.v[j] = -r;
            rn = std::max(rn, std::abs(r));
            const double s =
                it2 * (std::abs(x.v[j] - u.v[j]) + std::abs(u.v[j] - p.v[j])) +
                hih2 * (std::abs(x.v[jp] - x.v[j]) + std::abs(x.v[j] - x.v[jm]) +
                        std::abs(p.v[jp] - p.v[j]) + std::abs(p.v[j] - p.v[jm])) +
                0.5 * (std::abs(x.v[j]) + std::abs(p.v[j])) +
                st.eps2 * eval_G(std::abs(x.v[j]), std::abs(p.v[j]));
            rscale = std::max(rscale, s);
        }
        if (rn <= std::max(st.solver.tol, 16.0 * DBL_EPSILON * rscale)) return x;
        if (it >= st.solver.max_iter) break;

        for (std::size_t j = 0; j < M; ++j)
            diag[j] = it2 + 0.5 + st.eps2 * eval_G_dv(x.v[j], p.v[j]);
        const GridFunction delta = solve_shifted_laplacian(g, diag, 0.5, resid);
        double dn = 0.0, xn = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            x.v[j] += delta.v[j];
            dn = std::max(dn, std::abs(delta.v[j]));
            xn = std::max(xn, std::abs(x.v[j]));
        }
        if (detail::negligible_step(dn, xn)) return x;
    }
    throw convergence_error(st.n + 1, rn);
}

inline GridFunction scheme_step(const StepperState& st) {
    switch (st.scheme) {
        case SchemeKind::CNFD: return cnfd_step(st);
        case SchemeKind::SIFD1: return sifd1_step(st);
        case SchemeKind::SIFD2: return sifd2_step(st);
        case SchemeKind::LFFD: return lffd_step(st);
    }
    throw std::invalid_argument("scheme_step: bad scheme");
}

// Rotates in the next level after a blow-up check.
inline void advance(StepperState& st, GridFunction next) {
    double linf = 0.0;
    const bool finite = finite_linf(next, linf);
    if (!finite || linf > blow_up_threshold)
        throw blow_up_error(st.n + 1, finite ? linf : std::numeric_limits<double>::quiet_NaN());
    st.u_prev = std::move(st.u_curr);
    st.u_curr = std::move(next);
    ++st.n;
}

struct RunOutcome {
    StepperState state;
    double sigma_max = 0.0;  // running max of |u^n|_inf^2 over every level seen
};

// Gets (level, values) at the configured stride; level 0 and 1 included.
using SnapshotSink = std::function<void(long, const GridFunction&)>;

inline StepperState make_state(SchemeKind scheme, const Grid1D& g, double tau, double mass,
                               double eps2, GridFunction u0, GridFunction u1,
                               const SolverParams& solver = {}) {
    StepperState st;
    st.scheme = scheme;
    st.grid = g;
    st.tau = tau;
    st.mass = mass;
    st.eps2 = eps2;
    st.u_prev = std::move(u0);
    st.u_curr = std::move(u1);
    st.n = 1;
    st.solver = solver;
    detail::validate_state(st, "make_state");
    return st;
}

inline void run_steps(StepperState& st, long n_target, double& sigma_max,
                      long snapshot_stride = 0, const SnapshotSink& sink = {}) {
    while (st.n < n_target) {
        advance(st, scheme_step(st));
        const double linf = norm_linf(st.u_curr);
        sigma_max = std::max(sigma_max, linf * linf);
        if (snapshot_stride > 0 && sink && st.n % snapshot_stride == 0)
            sink(st.n, st.u_curr);
    }
}

// Full march: Taylor start, then n_steps - 1 scheme steps; u_curr ends at
// level n_steps, final time n_steps * tau.
inline RunOutcome run(const ProblemSpec& spec, SchemeKind scheme, const Grid1D& g,
                      double tau, long n_steps, const SolverParams& solver = {},
                      long snapshot_stride = 0, const SnapshotSink& sink = {}) {
    if (n_steps < 1) throw std::invalid_argument("run: need at least one step");
    auto [u0, u1] = first_step(spec, g, tau);
    RunOutcome out;
    {
        const double l0 = norm_linf(u0), l1 = norm_linf(u1);
        out.sigma_max = std::max(l0 * l0, l1 * l1);
    }
    if (snapshot_stride > 0 && sink) {
        sink(0, u0);
        if (1 % snapshot_stride == 0) sink(1, u1);
    }
    out.state = make_state(scheme, g, tau, 1.0, spec.eps * spec.eps,
                           std::move(u0), std::move(u1), solver);
    run_steps(out.state, n_steps, out.sigma_max, snapshot_stride, sink);
    return out;
}

}  // namespace nkg
