// Command line front end: single marches with field and energy recording,
// convergence sweeps over resolution ladders, and pass/fail checks over the
// recorded outputs.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <nkg/csv.hpp>
#include <nkg/diagnostics.hpp>
#include <nkg/errors.hpp>
#include <nkg/oscillatory.hpp>
#include <nkg/presets.hpp>
#include <nkg/schemes.hpp>
#include <nkg/sweep.hpp>

namespace {

using namespace nkg;

struct RunArgs {
    std::string scheme = "CNFD";
    std::string mode = "standard";
    std::string preset = "paper-4.1";
    double eps = 1.0;
    double beta = 0.0;
    double h = 0.0;
    double tau = 0.0;
    double t0 = 1.0;
    bool regularized = false;
    long snapshot_every = 0;
    long energy_every = 0;
    std::string out_dir = ".";
    std::string run_id = "run";
    double tol = 1e-12;
    int max_iter = 50;
    std::string backend = "fft";
};

SolverParams solver_from(double tol, int max_iter, const std::string& backend) {
    SolverParams s;
    s.tol = tol;
    s.max_iter = max_iter;
    if (backend == "fft") s.linear_backend = LinearBackend::FFT;
    else if (backend == "dense") s.linear_backend = LinearBackend::Dense;
    else throw std::invalid_argument("backend must be fft or dense");
    return s;
}

int do_run(const RunArgs& a) {
    const SchemeKind scheme = parse_scheme(a.scheme);
    const RunMode mode = parse_run_mode(a.mode);
    const bool osc = mode == RunMode::oscillatory;
    if (!(a.h > 0.0)) throw std::invalid_argument("--h is required and must be positive");
    if (!(a.tau > 0.0)) throw std::invalid_argument("--tau is required and must be positive");
    if (!(a.t0 > 0.0)) throw std::invalid_argument("--t0 must be positive");

    auto [dom_a, dom_b] = (a.preset == "paper-5.1")
                              ? truncate_whole_space(a.eps, a.beta)
                              : std::pair<double, double>{0.0, 2.0 * std::numbers::pi};
    auto data = initial_data_preset(a.preset);
    const ProblemSpec spec = make_problem(dom_a, dom_b, a.eps, a.beta,
                                          std::move(data.phi), std::move(data.gamma));

    const std::size_t M = detail::nodes_for(dom_b - dom_a, a.h, "--h");
    const Grid1D g = make_grid(dom_a, dom_b, M);
    // the oscillatory march lives on the slow clock: horizon t0 with step tau
    const double horizon = osc ? a.t0 : a.t0 * std::pow(a.eps, -a.beta);
    const long n_steps = detail::steps_for(horizon, a.tau, "--tau");
    const SolverParams solver = solver_from(a.tol, a.max_iter, a.backend);

    const std::filesystem::path dir(a.out_dir);
    std::filesystem::create_directories(dir);
    SnapshotSink sink;
    if (a.snapshot_every > 0) sink = csv::make_snapshot_sink(dir, a.run_id, g);

    std::optional<csv::EnergyTraceWriter> trace;
    if (a.energy_every > 0) trace.emplace(dir / (a.run_id + "_energy.csv"));
    const EnergyKind kind =
        osc ? (scheme == SchemeKind::SIFD1 ? EnergyKind::osc_sifd1_discrete
                                           : EnergyKind::osc_cnfd_discrete)
            : (scheme == SchemeKind::SIFD1 ? EnergyKind::sifd1_discrete
                                           : EnergyKind::cnfd_discrete);
    const double eps2 = a.eps * a.eps;
    const double mass = osc ? std::pow(a.eps, 2.0 * a.beta) : 1.0;
    const auto emit_energy = [&](long n, const GridFunction& lo, const GridFunction& hi) {
        if (!trace || n % a.energy_every != 0) return;
        const double value = (scheme == SchemeKind::SIFD1)
                                 ? energy_sifd1(g, lo, hi, a.tau, eps2, mass)
                                 : energy_cnfd(g, lo, hi, a.tau, eps2, mass);
        trace->add(n, static_cast<double>(n) * a.tau, kind, value);
    };

    StepperState st = osc ? make_oscillatory_state(make_osc_problem(spec), g, a.tau, scheme,
                                                   solver, a.regularized)
                          : [&] {
                                auto [u0, u1] = first_step(spec, g, a.tau);
                                return make_state(scheme, g, a.tau, 1.0, eps2,
                                                  std::move(u0), std::move(u1), solver);
                            }();
    double sigma_max;
    {
        const double l0 = norm_linf(st.u_prev), l1 = norm_linf(st.u_curr);
        sigma_max = std::max(l0 * l0, l1 * l1);
    }
    if (sink) {
        sink(0, st.u_prev);
        if (a.snapshot_every == 1) sink(1, st.u_curr);
    }
    emit_energy(0, st.u_prev, st.u_curr);

    while (st.n < n_steps) {
        advance(st, scheme_step(st));
        const double linf = norm_linf(st.u_curr);
        sigma_max = std::max(sigma_max, linf * linf);
        if (sink && st.n % a.snapshot_every == 0) sink(st.n, st.u_curr);
        emit_energy(st.n - 1, st.u_prev, st.u_curr);
    }
    csv::write_snapshot_file(dir / (a.run_id + "_final.csv"), g, st.u_curr);

    std::printf("scheme %s  mode %s  preset %s  eps %g  beta %g\n", scheme_name(scheme),
                run_mode_name(mode), a.preset.c_str(), a.eps, a.beta);
    std::printf("grid M=%zu h=%g on [%g, %g)\n", g.M, g.h, dom_a, dom_b);
    std::printf("march: %ld steps of %s %g, final %s %g, sigma_max %.6g\n", n_steps,
                osc ? "k" : "tau", a.tau, osc ? "s" : "t",
                static_cast<double>(n_steps) * a.tau, sigma_max);
    if (a.eps > 0.0) {
        const auto verdict =
            stability_bound(scheme, g.h, a.eps, sigma_max, osc ? a.beta : 0.0, a.tau);
        if (!verdict.bound)
            std::printf("stability: unconditional\n");
        else
            std::printf("stability: step limit %g, running at %g -> %s\n", *verdict.bound,
                        a.tau, verdict.stable ? "inside" : "EXCEEDED");
    }
    std::printf("wrote %s\n", (dir / (a.run_id + "_final.csv")).string().c_str());
    if (trace) std::printf("wrote %s\n", (dir / (a.run_id + "_energy.csv")).string().c_str());
    return 0;
}

void print_records(const std::vector<ConvergenceRecord>& records) {
    for (const auto& r : records) {
        char line[160];
        if (r.status == PointStatus::ok)
            std::snprintf(line, sizeof line, "eps %-12g h %-12g tau %-12g error %-12.4e %s",
                          r.eps, r.h, r.tau, r.error,
                          r.order ? (std::string("order ") + csv::num(*r.order)).c_str() : "");
        else
            std::snprintf(line, sizeof line, "eps %-12g h %-12g tau %-12g %s", r.eps, r.h,
                          r.tau, point_status_name(r.status));
        std::printf("%s\n", line);
    }
}

int do_sweep(const std::string& config_path, const std::string& table_id, bool full,
             const std::string& out_override, const std::string& cache_override, int jobs) {
    if (config_path.empty() == table_id.empty())
        throw std::invalid_argument("pass exactly one of --config and --table");
    TableDefinition def =
        config_path.empty() ? table_preset(table_id, full) : load_sweep_config(config_path);
    if (!out_override.empty()) def.config.out_path = out_override;
    if (def.config.out_path.empty()) def.config.out_path = "sweep.csv";
    if (!cache_override.empty()) def.config.cache_dir = cache_override;
    if (jobs > 0) def.config.workers = static_cast<unsigned>(jobs);

    const auto records = run_sweep(def.config);
    print_records(records);
    csv::write_sweep_file(def.config.out_path, records);
    std::printf("wrote %s (%zu rows)\n", def.config.out_path.c_str(), records.size());

    try {
        const auto rep = check_scalability(records, def.config.beta, def.scalability);
        std::printf("%s", rep.detail.c_str());
        std::printf("resolution-tracking verdict: %s\n", rep.passed() ? "PASS" : "FAIL");
    } catch (const std::invalid_argument& e) {
        std::printf("resolution-tracking verdict skipped: %s\n", e.what());
    }
    return 0;
}

int do_check_scalability(const std::string& in_path, double beta, double exponent,
                         double diagonal_factor, double growth_factor) {
    const auto records = csv::read_sweep_file(in_path);
    if (records.empty()) throw std::invalid_argument(in_path + ": no records");
    ScalabilityOptions opt;
    opt.diagonal_factor = diagonal_factor;
    opt.growth_factor = growth_factor;
    opt.exponent = exponent;
    const double b = std::isnan(beta) ? records[0].beta : beta;
    const auto rep = check_scalability(records, b, opt);
    std::printf("%s", rep.detail.c_str());
    std::printf("resolution-tracking verdict: %s\n", rep.passed() ? "PASS" : "FAIL");
    return rep.passed() ? 0 : 3;
}

int do_check_energy(const std::string& in_path, double rel_tol) {
    const auto rows = csv::read_energy_file(in_path);
    if (rows.empty()) throw std::invalid_argument(in_path + ": no energy rows");
    std::map<std::string, std::vector<double>> by_kind;
    for (const auto& r : rows) by_kind[r.kind].push_back(r.value);
    bool ok = true;
    for (const auto& [kind, values] : by_kind) {
        const double e0 = values.front();
        double drift = 0.0;
        for (const double v : values) drift = std::max(drift, std::abs(v - e0));
        const double rel = drift / (std::abs(e0) > 0.0 ? std::abs(e0) : 1.0);
        const bool kind_ok = rel <= rel_tol;
        ok = ok && kind_ok;
        std::printf("%s: %zu samples, start %.12g, max relative drift %.3e -> %s\n",
                    kind.c_str(), values.size(), e0, rel, kind_ok ? "conserved" : "DRIFTS");
    }
    return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite difference workbench for the weakly nonlinear wave equation"};
    app.require_subcommand(1);

    RunArgs ra;
    auto* run_cmd = app.add_subcommand("run", "march one configuration, record fields");
    run_cmd->set_help_flag("--help", "print usage");  // frees -h for the mesh size
    run_cmd->add_option("--scheme", ra.scheme, "CNFD, SIFD1, SIFD2 or LFFD");
    run_cmd->add_option("--mode", ra.mode, "standard or oscillatory");
    run_cmd->add_option("--preset", ra.preset, "initial data id");
    run_cmd->add_option("--eps", ra.eps, "nonlinearity strength in [0, 1]");
    run_cmd->add_option("--beta", ra.beta, "horizon exponent in [0, 2]");
    run_cmd->add_option("--h", ra.h, "mesh size, must tile the domain")->required();
    run_cmd->add_option("--tau", ra.tau, "time step, must tile the horizon")->required();
    run_cmd->add_option("--t0", ra.t0, "horizon scale: t = t0 eps^-beta, or slow s = t0");
    run_cmd->add_flag("--regularized-first-step", ra.regularized,
                      "bounded Taylor start for the oscillatory clock");
    run_cmd->add_option("--snapshot-every", ra.snapshot_every, "field dump stride in levels");
    run_cmd->add_option("--energy-every", ra.energy_every, "energy sample stride in levels");
    run_cmd->add_option("--out", ra.out_dir, "output directory");
    run_cmd->add_option("--run-id", ra.run_id, "file name stem");
    run_cmd->add_option("--tol", ra.tol, "implicit stage residual target");
    run_cmd->add_option("--max-iter", ra.max_iter, "implicit stage iteration cap");
    run_cmd->add_option("--backend", ra.backend, "linear solver: fft or dense");

    std::string sw_config, sw_table, sw_out, sw_cache;
    bool sw_full = false;
    int sw_jobs = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "error table over a resolution ladder");
    auto* cfg_opt = sweep_cmd->add_option("--config", sw_config, "key = value study file");
    sweep_cmd->add_option("--table", sw_table, "named study preset, table-1 .. table-10")
        ->excludes(cfg_opt);
    sweep_cmd->add_flag("--full", sw_full, "published depth instead of the trimmed ladder");
    sweep_cmd->add_option("--out", sw_out, "records file to write");
    sweep_cmd->add_option("--cache-dir", sw_cache, "reference solution cache directory");
    sweep_cmd->add_option("--jobs", sw_jobs, "worker threads for the table points");

    std::string ck_in;
    double ck_beta = std::numeric_limits<double>::quiet_NaN();
    double ck_exponent = std::numeric_limits<double>::quiet_NaN();
    double ck_diag = 4.0, ck_growth = 2.0, ck_rel_tol = 1e-10;
    std::string ce_in;
    auto* check_cmd = app.add_subcommand("check", "verdicts over recorded outputs");
    check_cmd->require_subcommand(1);
    auto* scal_cmd = check_cmd->add_subcommand(
        "scalability", "does the matched diagonal stay resolution-uniform in eps");
    scal_cmd->add_option("--in", ck_in, "sweep records file")->required();
    scal_cmd->add_option("--beta", ck_beta, "horizon exponent, default from the records");
    scal_cmd->add_option("--exponent", ck_exponent, "diagonal slope override");
    scal_cmd->add_option("--diagonal-factor", ck_diag, "allowed diagonal spread");
    scal_cmd->add_option("--growth-factor", ck_growth, "required under-resolved growth");
    auto* energy_cmd =
        check_cmd->add_subcommand("energy", "is each recorded energy kind conserved");
    energy_cmd->add_option("--in", ce_in, "energy trace file")->required();
    energy_cmd->add_option("--rel-tol", ck_rel_tol, "allowed relative drift");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) return do_run(ra);
        if (sweep_cmd->parsed())
            return do_sweep(sw_config, sw_table, sw_full, sw_out, sw_cache, sw_jobs);
        if (scal_cmd->parsed())
            return do_check_scalability(ck_in, ck_beta, ck_exponent, ck_diag, ck_growth);
        if (energy_cmd->parsed()) return do_check_energy(ce_in, ck_rel_tol);
    } catch (const blow_up_error& e) {
        std::fprintf(stderr, "aborted: %s\n", e.what());
        return 3;
    } catch (const convergence_error& e) {
        std::fprintf(stderr, "aborted: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
