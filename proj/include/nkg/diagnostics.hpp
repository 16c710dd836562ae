#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "nkg/grid.hpp"
#include "nkg/schemes.hpp"

namespace nkg {

// Conserved discrete functionals, a posteriori stability verdicts, and the
// l2 + H1-seminorm error measure used by the convergence tables.

// Level-pair energy conserved exactly by CNFD and SIFD2 (mass = 1 or not):
//   E^n = mass ||dt+ u||^2 + (1/2) sum_{k=n}^{n+1} ( |u^k|_1^2 + ||u^k||^2 )
//         + (eps2 h / 4) sum_j ( (u^n_j)^4 + (u^{n+1}_j)^4 ).
inline double energy_cnfd(const Grid1D& g, const GridFunction& u_n, const GridFunction& u_np1,
                          double tau, double eps2, double mass = 1.0) {
    require_match(g, u_n, "energy_cnfd");
    require_match(g, u_np1, "energy_cnfd");
    const std::size_t M = g.M;
    double dt2 = 0.0, grad = 0.0, l2 = 0.0, quart = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        const std::size_t jp = (j + 1 == M) ? 0 : j + 1;
        const double dt = (u_np1.v[j] - u_n.v[j]) / tau;
        dt2 += dt * dt;
        const double gn = (u_n.v[jp] - u_n.v[j]) / g.h;
        const double gp = (u_np1.v[jp] - u_np1.v[j]) / g.h;
        grad += gn * gn + gp * gp;
        l2 += u_n.v[j] * u_n.v[j] + u_np1.v[j] * u_np1.v[j];
        const double a2 = u_n.v[j] * u_n.v[j], b2 = u_np1.v[j] * u_np1.v[j];
        quart += a2 * a2 + b2 * b2;
    }
    return g.h * (mass * dt2 + 0.5 * grad + 0.5 * l2 + 0.25 * eps2 * quart);
}

// SIFD1 conserves the variant whose gradient part is the cross product of the
// two levels; that term is sign-indefinite, which is why SIFD1's verdict is
// conditional on coarse meshes.
inline double energy_sifd1(const Grid1D& g, const GridFunction& u_n, const GridFunction& u_np1,
                           double tau, double eps2, double mass = 1.0) {
    require_match(g, u_n, "energy_sifd1");
    require_match(g, u_np1, "energy_sifd1");
    const std::size_t M = g.M;
    double dt2 = 0.0, cross = 0.0, l2 = 0.0, quart = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        const std::size_t jp = (j + 1 == M) ? 0 : j + 1;
        const double dt = (u_np1.v[j] - u_n.v[j]) / tau;
        dt2 += dt * dt;
        cross += (u_n.v[jp] - u_n.v[j]) * (u_np1.v[jp] - u_np1.v[j]) / (g.h * g.h);
        l2 += u_n.v[j] * u_n.v[j] + u_np1.v[j] * u_np1.v[j];
        const double a2 = u_n.v[j] * u_n.v[j], b2 = u_np1.v[j] * u_np1.v[j];
        quart += a2 * a2 + b2 * b2;
    }
    return g.h * (mass * dt2 + cross + 0.5 * l2 + 0.25 * eps2 * quart);
}

// Quadrature of the continuous invariant |u_t|^2 + |u_x|^2 + |u|^2 + (eps2/2)|u|^4
// with the forward difference standing in for u_x. Monitor only.
inline double continuous_energy(const Grid1D& g, const GridFunction& u, const GridFunction& u_t,
                                double eps2) {
    require_match(g, u, "continuous_energy");
    require_match(g, u_t, "continuous_energy");
    const std::size_t M = g.M;
    double s = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        const std::size_t jp = (j + 1 == M) ? 0 : j + 1;
        const double gx = (u.v[jp] - u.v[j]) / g.h;
        const double u2 = u.v[j] * u.v[j];
        s += u_t.v[j] * u_t.v[j] + gx * gx + u2 + 0.5 * eps2 * u2 * u2;
    }
    return g.h * s;
}

// A posteriori time step restriction of each scheme given the running sup
// bound sigma_max >= max_n |u^n|_inf^2. bound is empty when the scheme is
// unconditionally stable in that configuration; otherwise the step must stay
// strictly below it. mass_exponent_beta = 0 is the plain clock; the rescaled
// clock multiplies every conditional bound by eps^beta.
struct StabilityVerdict {
    SchemeKind scheme = SchemeKind::CNFD;
    std::optional<double> bound;  // empty: unconditional
    double tau = 0.0;
    bool stable = false;
    double sigma_max_used = 0.0;
};

inline StabilityVerdict stability_bound(SchemeKind scheme, double h, double eps,
                                        double sigma_max, double mass_exponent_beta,
                                        double tau) {
    if (!(h > 0.0) || !(eps > 0.0) || sigma_max < 0.0 || !(tau > 0.0))
        throw std::invalid_argument("stability_bound: bad arguments");
    const double scale = std::pow(eps, mass_exponent_beta);
    StabilityVerdict v;
    v.scheme = scheme;
    v.tau = tau;
    v.sigma_max_used = sigma_max;
    const double e2s = eps * eps * sigma_max;
    switch (scheme) {
        case SchemeKind::CNFD:
            break;  // unconditional
        case SchemeKind::SIFD1:
            if (h < 2.0) v.bound = scale * 2.0 * h / std::sqrt(4.0 - h * h);
            break;
        case SchemeKind::SIFD2:
            if (e2s > 1.0) v.bound = scale * 2.0 / std::sqrt(e2s - 1.0);
            break;
        case SchemeKind::LFFD:
            v.bound = scale * 2.0 * h / std::sqrt(4.0 + h * h * (1.0 + e2s));
            break;
    }
    v.stable = !v.bound || tau < *v.bound;
    return v;
}

// sqrt( ||d||^2 + |d|_1^2 ) for d = exact - num: the l2 x H1 mix in which the
// second-order rates are measured.
inline double error_norm(const Grid1D& g, const GridFunction& exact, const GridFunction& num) {
    require_match(g, exact, "error_norm");
    require_match(g, num, "error_norm");
    const std::size_t M = g.M;
    double l2 = 0.0, h1 = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        const std::size_t jp = (j + 1 == M) ? 0 : j + 1;
        const double d = exact.v[j] - num.v[j];
        const double dd = (exact.v[jp] - num.v[jp]) - d;
        l2 += d * d;
        h1 += dd * dd / (g.h * g.h);
    }
    return std::sqrt(g.h * (l2 + h1));
}

enum class EnergyKind { cnfd_discrete, sifd1_discrete, continuous, osc_cnfd_discrete, osc_sifd1_discrete };

inline const char* energy_kind_name(EnergyKind k) {
    switch (k) {
        case EnergyKind::cnfd_discrete: return "CNFD_discrete";
        case EnergyKind::sifd1_discrete: return "SIFD1_discrete";
        case EnergyKind::continuous: return "continuous";
        case EnergyKind::osc_cnfd_discrete: return "osc_CNFD_discrete";
        case EnergyKind::osc_sifd1_discrete: return "osc_SIFD1_discrete";
    }
    return "?";
}

struct EnergyReport {
    long n = 0;
    double t = 0.0;
    EnergyKind kind = EnergyKind::continuous;
    double value = 0.0;
};

}  // namespace nkg
