#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nkg/problem.hpp"
#include "nkg/schemes.hpp"

using namespace nkg;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("potential and its difference quotient", "[problem]") {
    REQUIRE(eval_F(2.0) == 4.0);
    REQUIRE(eval_F(-1.0) == 0.25);
    REQUIRE(eval_G(1.0, 1.0) == 1.0);     // diagonal continuation is v^3
    REQUIRE(eval_G(-2.0, -2.0) == -8.0);
    REQUIRE(eval_G(3.0, 0.0) == Catch::Approx(eval_F(3.0) / 3.0));
}

TEST_CASE("closed-form quotient matches the raw quotient away from the diagonal", "[problem]") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(-4.0, 4.0);
    for (int rep = 0; rep < 20000; ++rep) {
        const double v = d(rng);
        double w = d(rng);
        if (std::abs(v - w) < 1e-3) continue;
        const double raw = (eval_F(v) - eval_F(w)) / (v - w);
        const double scale = std::max(1.0, std::max(std::abs(v), std::abs(w)));
        REQUIRE(std::abs(eval_G(v, w) - raw) <= 1e-10 * scale * scale * scale);
        REQUIRE(eval_G(v, w) == eval_G(w, v));
    }
}

TEST_CASE("quotient derivative against central differences", "[problem]") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int rep = 0; rep < 1000; ++rep) {
        const double v = d(rng), w = d(rng);
        const double hfd = 1e-6;
        const double fd = (eval_G(v + hfd, w) - eval_G(v - hfd, w)) / (2.0 * hfd);
        REQUIRE(eval_G_dv(v, w) == Catch::Approx(fd).margin(1e-7));
        REQUIRE(eval_G_dv(v, w) >= 0.0);
    }
}

TEST_CASE("make_problem validates its ranges", "[problem]") {
    const auto id = initial_data_preset("paper-4.1");
    REQUIRE_NOTHROW(make_problem(0.0, 1.0, 1.0, 0.0, id.phi, id.gamma));
    REQUIRE_NOTHROW(make_problem(0.0, 1.0, 0.0, 2.0, id.phi, id.gamma));  // linear limit
    REQUIRE_THROWS_AS(make_problem(0.0, 1.0, 1.5, 0.0, id.phi, id.gamma), std::invalid_argument);
    REQUIRE_THROWS_AS(make_problem(0.0, 1.0, -0.1, 0.0, id.phi, id.gamma), std::invalid_argument);
    REQUIRE_THROWS_AS(make_problem(0.0, 1.0, 1.0, 2.5, id.phi, id.gamma), std::invalid_argument);
    REQUIRE_THROWS_AS(make_problem(1.0, 0.0, 1.0, 0.0, id.phi, id.gamma), std::invalid_argument);
    REQUIRE_THROWS_AS(make_problem(0.0, 1.0, 1.0, 0.0, nullptr, id.gamma), std::invalid_argument);
}

TEST_CASE("built-in initial data", "[problem]") {
    const auto a = initial_data_preset("paper-4.1");
    REQUIRE(a.phi(0.0) == Catch::Approx(2.0));
    REQUIRE(a.phi(kPi) == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(a.gamma(kPi / 2.0) == Catch::Approx(1.0));

    const auto b = initial_data_preset("paper-5.1");
    REQUIRE(b.phi(0.0) == Catch::Approx(1.0));
    REQUIRE(b.phi(3.0) == Catch::Approx(b.phi(-3.0)));
    REQUIRE(b.phi(3.0) < 3e-4);  // fast decay is what makes box truncation viable
    REQUIRE(b.gamma(0.7) == 0.0);

    REQUIRE_THROWS_AS(initial_data_preset("nope"), std::invalid_argument);
}

TEST_CASE("eps-scaling maps between the two formulations discretely", "[problem]") {
    // Degree-3 homogeneity: running the weak-coupling form and scaling by eps
    // equals running the unit-coefficient form on eps-scaled data. Exact for
    // every scheme, so agreement is at solver-tolerance level.
    const double eps = 0.5;
    const auto id = initial_data_preset("paper-4.1");
    const ProblemSpec base = make_problem(0.0, 2.0 * kPi, eps, 0.0, id.phi, id.gamma);
    const ProblemSpec scaled = make_problem(
        0.0, 2.0 * kPi, 1.0, 0.0,
        [&, eps](double x) { return eps * id.phi(x); },
        [&, eps](double x) { return eps * id.gamma(x); });
    const Grid1D g = make_grid(0.0, 2.0 * kPi, 32);
    const double tau = 0.05;
    const long steps = 10;

    for (SchemeKind k : {SchemeKind::CNFD, SchemeKind::SIFD1, SchemeKind::SIFD2, SchemeKind::LFFD}) {
        const RunOutcome u = run(base, k, g, tau, steps);
        const RunOutcome w = run(scaled, k, g, tau, steps);
        const GridFunction scaled_u = rescale_small_data(base, u.state.u_curr);
        for (std::size_t j = 0; j < g.M; ++j) {
            const double ref = std::max(1.0, std::abs(w.state.u_curr.v[j]));
            REQUIRE(std::abs(scaled_u.v[j] - w.state.u_curr.v[j]) <= 1e-13 * ref);
        }
    }
}
