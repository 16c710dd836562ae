// Acceptance gate: every contract point runs as a numbered criterion and
// prints exactly one [PASS]/[FAIL] line. Reference solutions land in the
// shared nkg_ref_cache directory under the working directory, so reruns and
// neighbouring criteria reuse them.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nkg/csv.hpp>
#include <nkg/diagnostics.hpp>
#include <nkg/errors.hpp>
#include <nkg/oscillatory.hpp>
#include <nkg/presets.hpp>
#include <nkg/schemes.hpp>
#include <nkg/spectral.hpp>
#include <nkg/sweep.hpp>

namespace {

using namespace nkg;

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double rel_dev(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

ProblemSpec standard_problem(double eps, double beta) {
    auto data = initial_data_preset("paper-4.1");
    return make_problem(0.0, 2.0 * kPi, eps, beta, std::move(data.phi),
                        std::move(data.gamma));
}

using Result = std::pair<bool, std::string>;

// Spatial ladder at eps = 1: errors against the published second-order row,
// orders against the published increments.
Result criterion1() {
    auto def = table_preset("table-1");
    def.config.eps_list = {1.0};
    def.config.h_list.resize(4);
    const auto rec = run_sweep(def.config);
    const double want_err[4] = {3.77e-2, 9.65e-3, 2.43e-3, 6.09e-4};
    const double want_ord[3] = {1.97, 1.99, 2.00};
    double edev = 0.0, odev = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (rec[i].status != PointStatus::ok) return {false, fmt("point %d failed", i)};
        edev = std::max(edev, rel_dev(rec[i].error, want_err[i]));
        if (i > 0) {
            if (!rec[i].order) return {false, fmt("order missing at point %d", i)};
            odev = std::max(odev, std::abs(*rec[i].order - want_ord[i - 1]));
        }
    }
    return {edev <= 0.10 && odev <= 0.10,
            fmt("spatial ladder at eps 1: error deviation %.2f%% (allow 10%%), "
                "order deviation %.3f (allow 0.10)",
                100.0 * edev, odev)};
}

// Temporal ladder at eps = 1.
Result criterion2() {
    auto def = table_preset("table-2");
    def.config.eps_list = {1.0};
    def.config.tau_list.resize(3);
    const auto rec = run_sweep(def.config);
    const double want_err[3] = {3.27e-2, 8.57e-3, 2.19e-3};
    const double want_ord[2] = {1.93, 1.97};
    double edev = 0.0, odev = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (rec[i].status != PointStatus::ok) return {false, fmt("point %d failed", i)};
        edev = std::max(edev, rel_dev(rec[i].error, want_err[i]));
        if (i > 0) {
            if (!rec[i].order) return {false, fmt("order missing at point %d", i)};
            odev = std::max(odev, std::abs(*rec[i].order - want_ord[i - 1]));
        }
    }
    return {edev <= 0.10 && odev <= 0.10,
            fmt("temporal ladder at eps 1: error deviation %.2f%% (allow 10%%), "
                "order deviation %.3f (allow 0.10)",
                100.0 * edev, odev)};
}

// Long-horizon tables: the eps-matched diagonal reproduces the published
// values and the resolved side of each row stays second order.
Result criterion3() {
    struct Table {
        const char* id;
        double diag[4];
    };
    const Table tables[2] = {{"table-5", {3.77e-2, 9.56e-3, 4.55e-2, 3.92e-2}},
                             {"table-6", {3.27e-2, 6.32e-3, 2.46e-2, 2.03e-2}}};
    double ddev = 0.0, odev = 0.0;
    for (const auto& t : tables) {
        const auto def = table_preset(t.id);
        const auto rec = run_sweep(def.config);
        const std::size_t rows = def.config.eps_list.size();
        const std::size_t cols = std::max(def.config.h_list.size(),
                                          def.config.tau_list.size());
        if (rec.size() != rows * cols) return {false, fmt("%s: ragged sweep", t.id)};
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                const auto& r = rec[i * cols + j];
                if (r.status != PointStatus::ok)
                    return {false, fmt("%s: point (%zu, %zu) failed", t.id, i, j)};
                if (j == i) ddev = std::max(ddev, rel_dev(r.error, t.diag[i]));
                if (j >= i + 1) {
                    if (!r.order)
                        return {false, fmt("%s: order missing at (%zu, %zu)", t.id, i, j)};
                    odev = std::max(odev, std::abs(*r.order - 2.0));
                }
            }
        }
    }
    return {ddev <= 0.15 && odev <= 0.15,
            fmt("eps-matched diagonals of the beta 2 pair: diagonal deviation %.2f%% "
                "(allow 15%%), resolved-side order deviation %.3f (allow 0.15)",
                100.0 * ddev, odev)};
}

double march_drift(StepperState st, long n_steps, bool sifd1_form, double eps2,
                   double mass) {
    const Grid1D& g = st.grid;
    const auto energy = [&](const GridFunction& a, const GridFunction& b) {
        return sifd1_form ? energy_sifd1(g, a, b, st.tau, eps2, mass)
                          : energy_cnfd(g, a, b, st.tau, eps2, mass);
    };
    const double e0 = energy(st.u_prev, st.u_curr);
    double drift = 0.0;
    while (st.n < n_steps) {
        advance(st, scheme_step(st));
        drift = std::max(drift, std::abs(energy(st.u_prev, st.u_curr) - e0));
    }
    return drift / std::abs(e0);
}

// Exact conservation of the two discrete energies, plain and rescaled clock.
Result criterion4() {
    const long n = 10000;
    const Grid1D g = make_grid(0.0, 2.0 * kPi, 16);
    const ProblemSpec plain = standard_problem(1.0, 0.0);
    double worst = 0.0;
    {
        auto [u0, u1] = first_step(plain, g, 0.01);
        worst = std::max(worst, march_drift(make_state(SchemeKind::CNFD, g, 0.01, 1.0, 1.0,
                                                       u0, u1),
                                            n, false, 1.0, 1.0));
        worst = std::max(worst, march_drift(make_state(SchemeKind::SIFD1, g, 0.01, 1.0, 1.0,
                                                       u0, u1),
                                            n, true, 1.0, 1.0));
    }
    {
        const OscProblemSpec osc = make_osc_problem(standard_problem(0.5, 1.0));
        const double mass = 0.25, eps2 = 0.25, k = 0.005;
        worst = std::max(worst,
                         march_drift(make_oscillatory_state(osc, g, k, SchemeKind::CNFD),
                                     n, false, eps2, mass));
        worst = std::max(worst,
                         march_drift(make_oscillatory_state(osc, g, k, SchemeKind::SIFD1),
                                     n, true, eps2, mass));
    }
    return {worst <= 1e-10,
            fmt("largest relative energy drift over %ld conserving steps: %.2e "
                "(allow 1e-10)",
                n, worst)};
}

// Explicit scheme dichotomy around its own a posteriori step limit: the limit
// is re-evaluated with the amplitude the pilot march actually reached. At
// eps = 0.25 the amplitude term still enters the limit while the slow
// nonlinear modulation stays too weak to blur a one-percent margin.
Result criterion5() {
    const double eps = 0.25;
    const Grid1D g = make_grid(0.0, 2.0 * kPi, 32);
    const ProblemSpec spec = standard_problem(eps, 0.0);
    const double sigma0 = [&] {
        const double l = norm_linf(sample(g, spec.phi));
        return l * l;
    }();
    const auto bound_for = [&](double sigma) {
        return *stability_bound(SchemeKind::LFFD, g.h, eps, sigma, 0.0, 1.0).bound;
    };
    const long n = 10000;
    const auto pilot = run(spec, SchemeKind::LFFD, g, 0.9 * bound_for(sigma0), n);
    const double limit = bound_for(pilot.sigma_max);

    try {
        run(spec, SchemeKind::LFFD, g, 0.99 * limit, n);
    } catch (const blow_up_error&) {
        return {false, fmt("diverged below the limit %.5f", limit)};
    }
    bool blew = false;
    long blow_level = 0;
    try {
        run(spec, SchemeKind::LFFD, g, 1.05 * limit, n);
    } catch (const blow_up_error& e) {
        blew = true;
        blow_level = e.level();
    }
    return {blew, blew ? fmt("step limit %.5f: stable 1%% below across %ld steps, "
                             "diverged 5%% above at level %ld",
                             limit, n, blow_level)
                       : fmt("no divergence 5%% above the limit %.5f", limit)};
}

// The rescaled clock must retrace the plain march node for node.
Result criterion6() {
    const Grid1D g = make_grid(0.0, 2.0 * kPi, 32);
    const double tau = 0.05;
    const long n = 50;
    double worst = 0.0;
    for (const double beta : {1.0, 2.0}) {
        const ProblemSpec spec = standard_problem(0.25, beta);
        const OscProblemSpec osc = make_osc_problem(spec);
        const double k = tau * std::pow(0.25, beta);
        for (const SchemeKind s : {SchemeKind::CNFD, SchemeKind::SIFD1, SchemeKind::SIFD2,
                                   SchemeKind::LFFD}) {
            const auto a = run(spec, s, g, tau, n);
            const auto b = osc_run(osc, s, g, k, n);
            double d = 0.0;
            for (std::size_t j = 0; j < g.M; ++j)
                d = std::max(d, std::abs(a.state.u_curr.v[j] - b.state.u_curr.v[j]));
            worst = std::max(worst, d);
        }
    }
    return {worst <= 1e-10,
            fmt("plain versus rescaled march, all four schemes, beta 1 and 2: "
                "largest node deviation %.2e (allow 1e-10)",
                worst)};
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Independent oracles for each implicit stage.
Result criterion7() {
    // decoupled scalar stage against plain bisection
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> ua(0.0, 6.0), uw(-3.0, 3.0), ur(-8.0, 8.0),
        ue(0.0, 1.0);
    const SolverParams solver;
    double scalar_dev = 0.0;
    for (int i = 0; i < 1000000; ++i) {
        const double a = std::exp(ua(rng));  // it2 + 1/2 over a wide step range
        const double eps2 = ue(rng);
        const double w = uw(rng);
        const double rhs = a * ur(rng);
        const double x = sifd1_scalar_solve(a, eps2, w, rhs, rhs / a, solver, 0);
        const auto psi = [&](double v) {
            return a * v + 0.25 * eps2 * (v + w) * (v * v + w * w) - rhs;
        };
        double lo = -1.0, hi = 1.0;
        while (psi(lo) > 0.0) lo *= 2.0;
        while (psi(hi) < 0.0) hi *= 2.0;
        const double xb = bisect_root(psi, lo, hi);
        scalar_dev = std::max(scalar_dev, std::abs(x - xb) / std::max(1.0, std::abs(xb)));
    }

    // spectral and cyclic-elimination backends must agree
    const ProblemSpec spec = standard_problem(1.0, 0.0);
    double backend_dev = 0.0;
    for (const std::size_t M : {std::size_t{4}, std::size_t{6}, std::size_t{16},
                                std::size_t{64}}) {
        const Grid1D g = make_grid(0.0, 2.0 * kPi, M);
        SolverParams fft, dense;
        fft.linear_backend = LinearBackend::FFT;
        dense.linear_backend = LinearBackend::Dense;
        const auto a = run(spec, SchemeKind::SIFD2, g, 0.05, 20, fft);
        const auto b = run(spec, SchemeKind::SIFD2, g, 0.05, 20, dense);
        for (std::size_t j = 0; j < M; ++j)
            backend_dev = std::max(backend_dev,
                                   std::abs(a.state.u_curr.v[j] - b.state.u_curr.v[j]));
    }

    // spatially uniform data reduces the coupled stage to a scalar recursion
    const Grid1D g = make_grid(0.0, 2.0 * kPi, 16);
    const ProblemSpec flat = make_problem(0.0, 2.0 * kPi, 1.0, 0.0,
                                          [](double) { return 0.7; },
                                          [](double) { return 0.0; });
    const double tau = 0.05;
    auto out = run(flat, SchemeKind::CNFD, g, tau, 100);
    double p = 0.7;
    double u = 0.7 + 0.5 * tau * tau * (-0.7 - 0.7 * 0.7 * 0.7);
    const double it2 = 1.0 / (tau * tau);
    for (long level = 1; level < 100; ++level) {
        const auto f = [&](double x) {
            return it2 * (x - 2.0 * u + p) + 0.5 * (x + p) + eval_G(x, p);
        };
        const double next = bisect_root(f, -8.0, 8.0);
        p = u;
        u = next;
    }
    double flat_dev = 0.0;
    for (std::size_t j = 0; j < g.M; ++j)
        flat_dev = std::max(flat_dev, std::abs(out.state.u_curr.v[j] - u));

    const bool ok = scalar_dev <= 1e-12 && backend_dev <= 1e-12 && flat_dev <= 1e-12;
    return {ok, fmt("scalar stage vs bisection over 1e6 draws %.2e, spectral vs "
                    "cyclic backend %.2e, uniform-state recursion %.2e (allow 1e-12)",
                    scalar_dev, backend_dev, flat_dev)};
}

// The error yardstick itself: refining the reference in space and time moves
// it by far less than the tolerances the tables are read at, and the linear
// limit hits the closed-form solution.
Result criterion8() {
    const ProblemSpec spec = standard_problem(0.5, 0.0);
    const Grid1D target = make_grid(0.0, 2.0 * kPi, 4096);
    const GridFunction a = reference_solve(spec, 1.0, target, 4096, 1e-4);
    const GridFunction b = reference_solve(spec, 1.0, target, 8192, 5e-5);
    const double self = error_norm(target, a, b);

    const ProblemSpec lin = make_problem(0.0, 2.0 * kPi, 0.0, 0.0,
                                         [](double x) { return std::cos(x); },
                                         [](double) { return 0.0; });
    const Grid1D g64 = make_grid(0.0, 2.0 * kPi, 64);
    const GridFunction num = reference_solve(lin, 1.0, g64, 64, 1e-3);
    GridFunction exact(64);
    const double amp = std::cos(std::sqrt(2.0));
    for (std::size_t j = 0; j < 64; ++j) exact.v[j] = amp * std::cos(g64.node(j));
    const double linear = error_norm(g64, exact, num);

    return {self <= 1e-7 && linear <= 1e-12,
            fmt("refinement moves the reference by %.2e (allow 1e-7); "
                "closed-form linear mode off by %.2e (allow 1e-12)",
                self, linear)};
}

// Published-depth ladders exist behind --full; executing them is an offline
// job, so this criterion checks the declarations and reports them.
Result criterion9() {
    for (int n = 1; n <= 10; ++n) {
        const auto def = table_preset("table-" + std::to_string(n), true);
        const std::size_t cols = std::max(def.config.h_list.size(),
                                          def.config.tau_list.size());
        if (def.config.eps_list.size() != 5 || cols != 6)
            return {false, fmt("table-%d full ladder is %zu x %zu, want 5 x 6", n,
                               def.config.eps_list.size(), cols)};
        const bool osc = n >= 7;
        const double want_tau_e = osc ? 2e-6 : 1e-5;
        if (std::abs(def.config.tau_e - want_tau_e) > 1e-18)
            return {false, fmt("table-%d full reference step is %g", n, def.config.tau_e)};
    }
    return {true, "DECLARED: published-depth 5 x 6 ladders for table-1 .. table-10 "
                  "are built in behind sweep --table <id> --full and are not executed "
                  "by this gate"};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            only = std::atoi(argv[++i]);
    }
    using Fn = Result (*)();
    const std::pair<int, Fn> criteria[] = {
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
        {5, criterion5}, {6, criterion6}, {7, criterion7}, {8, criterion8},
        {9, criterion9}};
    bool all_ok = true;
    for (const auto& [n, fn] : criteria) {
        if (only != 0 && n != only) continue;
        bool ok = false;
        std::string note;
        try {
            auto r = fn();
            ok = r.first;
            note = r.second;
        } catch (const std::exception& e) {
            note = fmt("unexpected error: %s", e.what());
        }
        std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", n, note.c_str());
        std::fflush(stdout);
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
