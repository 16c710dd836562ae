#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "nkg/grid.hpp"

namespace nkg {

using ScalarField = std::function<double(double)>;

// Continuous problem data for the cubic wave equation
//     u_tt - u_xx + u + eps^2 u^3 = 0
// on [a, b) with periodic continuation. eps = 0 is the linear calibration
// limit; horizons are read as T0 * eps^{-beta} in unscaled time.
struct ProblemSpec {
    double a = 0.0;
    double b = 1.0;
    double eps = 1.0;
    double beta = 0.0;
    ScalarField phi;    // initial displacement
    ScalarField gamma;  // initial velocity
};

inline ProblemSpec make_problem(double a, double b, double eps, double beta,
                                ScalarField phi, ScalarField gamma) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        throw std::invalid_argument("make_problem: need finite a < b");
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::invalid_argument("make_problem: eps outside [0, 1]");
    if (!(beta >= 0.0 && beta <= 2.0))
        throw std::invalid_argument("make_problem: beta outside [0, 2]");
    if (!phi || !gamma)
        throw std::invalid_argument("make_problem: missing initial data");
    return ProblemSpec{a, b, eps, beta, std::move(phi), std::move(gamma)};
}

// Quartic potential density.
inline double eval_F(double v) { return 0.25 * v * v * v * v; }

// Symmetric difference quotient of eval_F, continued through v == w:
//   G(v, w) = (F(v) - F(w)) / (v - w) = (v + w)(v^2 + w^2) / 4.
// The closed form is finite everywhere and symmetric in its arguments.
inline double eval_G(double v, double w) {
    return 0.25 * (v + w) * (v * v + w * w);
}

// Partial derivative of eval_G in its first argument,
//   (3 v^2 + 2 v w + w^2) / 4 = (2 v^2 + (v + w)^2) / 4 >= 0,
// which is what makes the implicit stages monotone.
inline double eval_G_dv(double v, double w) {
    return 0.25 * (3.0 * v * v + 2.0 * v * w + w * w);
}

// Pointwise map u -> eps * u. Scaling a trajectory this way turns a solution
// of the weak-coupling form above into a solution of the small-amplitude form
//     w_tt - w_xx + w + w^3 = 0  with data (eps phi, eps gamma);
// the cubic is degree-3 homogeneous, so the identity is exact, and the tests
// lean on it to cross-check both formulations.
inline GridFunction rescale_small_data(const ProblemSpec& spec, const GridFunction& u) {
    GridFunction r(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) r.v[j] = spec.eps * u.v[j];
    return r;
}

struct InitialData {
    ScalarField phi;
    ScalarField gamma;
};

// Built-in initial data sets used by the convergence harness.
//   paper-4.1: two-mode cosine displacement with a sine velocity, meant for [0, 2pi)
//   paper-5.1: rapidly decaying even bump with zero velocity, meant for wide
//              boxes that emulate the whole line
inline InitialData initial_data_preset(std::string_view id) {
    if (id == "paper-4.1") {
        return InitialData{
            [](double x) { return std::cos(x) + std::cos(2.0 * x); },
            [](double x) { return std::sin(x); },
        };
    }
    if (id == "paper-5.1") {
        return InitialData{
            [](double x) { return 2.0 / (std::exp(x * x) + std::exp(-x * x)); },
            [](double) { return 0.0; },
        };
    }
    throw std::invalid_argument("initial_data_preset: unknown id '" + std::string(id) + "'");
}

}  // namespace nkg
