#pragma once

#include <cmath>
#include <utility>

#include "nkg/grid.hpp"
#include "nkg/problem.hpp"
#include "nkg/schemes.hpp"

namespace nkg {

// Rescaled clock s = eps^beta t. On the slow clock the equation becomes
//   eps^{2 beta} v_ss - v_xx + v + eps^2 v^3 = 0,
// so the standard kernels apply verbatim with mass = eps^{2 beta}; a march of
// step k on the slow clock retraces the standard march of step tau = k eps^{-beta}
// node for node. Fixed slow horizons (s = T0) stand in for the long unscaled
// horizons (t = T0 eps^{-beta}).

struct OscProblemSpec {
    ProblemSpec base;
};

inline OscProblemSpec make_osc_problem(ProblemSpec base) {
    return OscProblemSpec{std::move(base)};
}

// Symmetric interval (-pad - eps^{-beta}, pad + eps^{-beta}): wide enough that
// data decaying like the built-in bump cannot reach the boundary over the slow
// horizon, so the periodic wrap emulates the whole line.
inline std::pair<double, double> truncate_whole_space(double eps, double beta, double pad = 4.0) {
    if (!(eps > 0.0)) throw std::invalid_argument("truncate_whole_space: need eps > 0");
    if (!(pad >= 0.0)) throw std::invalid_argument("truncate_whole_space: need pad >= 0");
    const double half = pad + std::pow(eps, -beta);
    return {-half, half};
}

// Slow-clock Taylor start. With lam = eps^{-beta},
//   v^1 = phi + A gamma + (B / 2)(d2x phi - phi - eps^2 phi^3),
//   A = k lam,      B = k^2 lam^2     consistent start, retraces the plain one
//   A = sin(k lam), B = k sin(k lam^2)  regularized start, bounded as lam grows
// The two differ by O(k^3 lam^3); the regularized form tames the start when
// k lam is not small.
inline std::pair<GridFunction, GridFunction> osc_first_step(const OscProblemSpec& osc,
                                                            const Grid1D& g, double k,
                                                            bool regularized) {
    if (!(k > 0.0)) throw std::invalid_argument("osc_first_step: need k > 0");
    const ProblemSpec& spec = osc.base;
    const double lam = std::pow(spec.eps, -spec.beta);
    const double A = regularized ? std::sin(k * lam) : k * lam;
    const double B = regularized ? k * std::sin(k * lam * lam) : k * k * lam * lam;
    const GridFunction v0 = sample(g, spec.phi);
    const GridFunction gam = sample(g, spec.gamma);
    const GridFunction lap = d2x(g, v0);
    const double eps2 = spec.eps * spec.eps;
    GridFunction v1(g.M);
    for (std::size_t j = 0; j < g.M; ++j) {
        const double p = v0.v[j];
        v1.v[j] = p + A * gam.v[j] + 0.5 * B * (lap.v[j] - p - eps2 * p * p * p);
    }
    return {v0, v1};
}

inline StepperState make_oscillatory_state(const OscProblemSpec& osc, const Grid1D& g,
                                           double k, SchemeKind scheme,
                                           const SolverParams& solver = {},
                                           bool regularized = false) {
    auto [v0, v1] = osc_first_step(osc, g, k, regularized);
    const double eps = osc.base.eps;
    const double mass = std::pow(eps, 2.0 * osc.base.beta);
    return make_state(scheme, g, k, mass, eps * eps, std::move(v0), std::move(v1), solver);
}

// Full slow-clock march to level n_steps (slow time n_steps * k).
inline RunOutcome osc_run(const OscProblemSpec& osc, SchemeKind scheme, const Grid1D& g,
                          double k, long n_steps, const SolverParams& solver = {},
                          bool regularized = false, long snapshot_stride = 0,
                          const SnapshotSink& sink = {}) {
    if (n_steps < 1) throw std::invalid_argument("osc_run: need at least one step");
    RunOutcome out;
    out.state = make_oscillatory_state(osc, g, k, scheme, solver, regularized);
    {
        const double l0 = norm_linf(out.state.u_prev), l1 = norm_linf(out.state.u_curr);
        out.sigma_max = std::max(l0 * l0, l1 * l1);
    }
    if (snapshot_stride > 0 && sink) {
        sink(0, out.state.u_prev);
        if (1 % snapshot_stride == 0) sink(1, out.state.u_curr);
    }
    run_steps(out.state, n_steps, out.sigma_max, snapshot_stride, sink);
    return out;
}

}  // namespace nkg
