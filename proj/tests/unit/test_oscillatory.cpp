#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nkg/diagnostics.hpp"
#include "nkg/grid.hpp"
#include "nkg/oscillatory.hpp"
#include "nkg/problem.hpp"
#include "nkg/schemes.hpp"

using namespace nkg;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

OscProblemSpec osc_problem(double eps, double beta) {
    const auto id = initial_data_preset("paper-4.1");
    return make_osc_problem(make_problem(0.0, 2.0 * kPi, eps, beta, id.phi, id.gamma));
}
}  // namespace

TEST_CASE("whole-line box widens with the slow horizon", "[oscillatory]") {
    auto [a1, b1] = truncate_whole_space(1.0, 1.0);
    REQUIRE(a1 == -5.0);
    REQUIRE(b1 == 5.0);
    auto [a2, b2] = truncate_whole_space(0.5, 1.0);
    REQUIRE(a2 == -6.0);
    REQUIRE(b2 == 6.0);
    auto [a3, b3] = truncate_whole_space(0.25, 2.0);
    REQUIRE(b3 == Catch::Approx(20.0));
    auto [a4, b4] = truncate_whole_space(0.37, 0.0);
    REQUIRE(b4 == 5.0);  // beta = 0 keeps the unit horizon
    REQUIRE_THROWS_AS(truncate_whole_space(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("slow-clock start without regularization retraces the plain start", "[oscillatory]") {
    // with k = tau eps^beta the slow-clock coefficients collapse to the plain ones
    const double eps = 0.25, beta = 1.0, tau = 0.01;
    const double k = tau * std::pow(eps, beta);
    const OscProblemSpec osc = osc_problem(eps, beta);
    const Grid1D g = make_grid(0.0, 2.0 * kPi, 32);
    const auto [v0, v1] = osc_first_step(osc, g, k, false);
    const auto [u0, u1] = first_step(osc.base, g, tau);
    for (std::size_t j = 0; j < g.M; ++j) {
        REQUIRE(v0.v[j] == u0.v[j]);
        REQUIRE(std::abs(v1.v[j] - u1.v[j]) <= 1e-14);
    }
}

TEST_CASE("slow-clock march retraces the plain march node for node", "[oscillatory]") {
    const double eps = 0.25, tau = 0.01;
    const long steps = 50;
    for (double beta : {1.0, 2.0}) {
        const OscProblemSpec osc = osc_problem(eps, beta);
        const Grid1D g = make_grid(0.0, 2.0 * kPi, 32);
        const double k = tau * std::pow(eps, beta);
        for (SchemeKind s :
             {SchemeKind::CNFD, SchemeKind::SIFD1, SchemeKind::SIFD2, SchemeKind::LFFD}) {
            const RunOutcome slow = osc_run(osc, s, g, k, steps);
            const RunOutcome plain = run(osc.base, s, g, tau, steps);
            for (std::size_t j = 0; j < g.M; ++j)
                REQUIRE(std::abs(slow.state.u_curr.v[j] - plain.state.u_curr.v[j]) <= 1e-10);
        }
    }
}

TEST_CASE("regularized start deviates at third order in the step", "[oscillatory]") {
    const double eps = 0.5, beta = 1.0;
    const OscProblemSpec osc = osc_problem(eps, beta);
    const Grid1D g = make_grid(0.0, 2.0 * kPi, 64);

    const auto start_gap = [&](double k) {
        const auto [v0r, v1r] = osc_first_step(osc, g, k, true);
        const auto [v0p, v1p] = osc_first_step(osc, g, k, false);
        double worst = 0.0;
        for (std::size_t j = 0; j < g.M; ++j)
            worst = std::max(worst, std::abs(v1r.v[j] - v1p.v[j]));
        return worst;
    };

    const double k = 0.0025;
    const double ratio = start_gap(k) / start_gap(k / 2.0);
    REQUIRE(ratio >= 6.4);   // k^3 scaling up to the k^4 tail: 8 +- 20%
    REQUIRE(ratio <= 9.6);
}

TEST_CASE("slow-clock energies are conserved with the scaled mass", "[oscillatory]") {
    const double eps = 0.5, beta = 1.0;
    const OscProblemSpec osc = osc_problem(eps, beta);
    const Grid1D g = make_grid(0.0, 2.0 * kPi, 16);
    const double k = 0.005;
    const double mass = std::pow(eps, 2.0 * beta);

    for (SchemeKind s : {SchemeKind::CNFD, SchemeKind::SIFD1}) {
        StepperState st = make_oscillatory_state(osc, g, k, s);
        const auto energy = (s == SchemeKind::CNFD) ? energy_cnfd : energy_sifd1;
        const double e0 = energy(g, st.u_prev, st.u_curr, k, eps * eps, mass);
        double sig = 0.0;
        run_steps(st, 1000, sig);
        const double e1 = energy(g, st.u_prev, st.u_curr, k, eps * eps, mass);
        REQUIRE(std::abs(e1 - e0) / std::abs(e0) <= 1e-10);
    }
}

TEST_CASE("slow-clock state carries the scaled mass", "[oscillatory]") {
    const OscProblemSpec osc = osc_problem(0.5, 2.0);
    const Grid1D g = make_grid(0.0, 2.0 * kPi, 16);
    const StepperState st = make_oscillatory_state(osc, g, 0.01, SchemeKind::LFFD);
    REQUIRE(st.mass == Catch::Approx(std::pow(0.5, 4.0)).epsilon(1e-15));
    REQUIRE(st.eps2 == Catch::Approx(0.25).epsilon(1e-15));
    REQUIRE(st.n == 1);
}
