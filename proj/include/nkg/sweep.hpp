#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nkg/diagnostics.hpp"
#include "nkg/errors.hpp"
#include "nkg/grid.hpp"
#include "nkg/oscillatory.hpp"
#include "nkg/pool.hpp"
#include "nkg/problem.hpp"
#include "nkg/reference_cache.hpp"
#include "nkg/schemes.hpp"

namespace nkg {

enum class RunMode { standard, oscillatory };
enum class SweepAxis { spatial, temporal };
enum class PointStatus { ok, blowup, nonconvergence };

inline const char* run_mode_name(RunMode m) {
    return m == RunMode::standard ? "standard" : "oscillatory";
}

inline RunMode parse_run_mode(const std::string& name) {
    if (name == "standard") return RunMode::standard;
    if (name == "oscillatory") return RunMode::oscillatory;
    throw std::invalid_argument("parse_run_mode: unknown mode \"" + name + "\"");
}

inline const char* point_status_name(PointStatus s) {
    switch (s) {
        case PointStatus::ok: return "ok";
        case PointStatus::blowup: return "blowup";
        case PointStatus::nonconvergence: return "nonconvergence";
    }
    return "?";
}

inline PointStatus parse_point_status(const std::string& name) {
    if (name == "ok") return PointStatus::ok;
    if (name == "blowup") return PointStatus::blowup;
    if (name == "nonconvergence") return PointStatus::nonconvergence;
    throw std::invalid_argument("parse_point_status: unknown status \"" + name + "\"");
}

// One refinement study: rows are the eps values, columns the entries of the
// single active resolution list. Spatial sweeps march every column with the
// fixed step tau_e; temporal sweeps fix the mesh h_e and march each column's
// step. The reference solver reuses tau_e as its own step and runs on a mesh
// refining every column, so one cached solve serves a whole row across both
// axes. For oscillatory mode the swept steps live on the slow clock and the
// horizon is t0 there; the plain-clock horizon behind the reference is always
// t0 * eps^{-beta}.
struct SweepConfig {
    SchemeKind scheme = SchemeKind::CNFD;
    RunMode mode = RunMode::standard;
    double beta = 0.0;
    std::vector<double> eps_list;
    std::vector<double> h_list;    // active for spatial sweeps
    std::vector<double> tau_list;  // active for temporal sweeps
    double tau_e = 1e-4;           // fixed step (spatial) and reference step, plain clock
    double h_e = 0.0;              // fixed mesh (temporal sweeps only)
    double t0 = 1.0;
    std::string preset_id = "paper-4.1";
    bool regularized_first_step = false;
    SolverParams solver;
    std::string out_path;
    std::string cache_dir = "nkg_ref_cache";
    std::size_t ref_fine_M = 0;  // 0: finest sweep mesh refined ref_margin times
    unsigned ref_margin = 2;
    unsigned workers = 0;  // 0: hardware concurrency

    SweepAxis axis() const {
        return h_list.empty() ? SweepAxis::temporal : SweepAxis::spatial;
    }
};

struct ConvergenceRecord {
    SchemeKind scheme = SchemeKind::CNFD;
    RunMode mode = RunMode::standard;
    double beta = 0.0;
    double eps = 1.0;
    double h = 0.0;
    double tau = 0.0;
    double t_final = 0.0;
    double error = 0.0;  // meaningful only when status == ok
    std::optional<double> order;
    PointStatus status = PointStatus::ok;
};

inline double estimate_order(double e_coarse, double e_fine, double ratio = 2.0) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0) || !(ratio > 0.0) || ratio == 1.0)
        return std::numeric_limits<double>::quiet_NaN();
    return std::log(e_coarse / e_fine) / std::log(ratio);
}

namespace detail {

inline void require_decreasing(const std::vector<double>& v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0) || !std::isfinite(v[i]))
            throw std::invalid_argument(std::string("run_sweep: ") + what +
                                        " entries must be positive and finite");
        if (i > 0 && !(v[i] < v[i - 1]))
            throw std::invalid_argument(std::string("run_sweep: ") + what +
                                        " must be strictly decreasing");
    }
}

inline std::size_t nodes_for(double length, double h, const char* what) {
    const double ratio = length / h;
    const auto M = static_cast<std::size_t>(std::llround(ratio));
    if (M < 2 || std::abs(static_cast<double>(M) * h - length) > 1e-6 * length)
        throw std::invalid_argument(std::string(what) + " does not tile the domain");
    return M;
}

inline long steps_for(double horizon, double step, const char* what) {
    const long n = std::llround(horizon / step);
    if (n < 1 || std::abs(static_cast<double>(n) * step - horizon) >
                     1e-6 * std::max(1.0, horizon))
        throw std::invalid_argument(std::string(what) +
                                    " not commensurate with the horizon");
    return n;
}

}  // namespace detail

inline std::vector<ConvergenceRecord> run_sweep(const SweepConfig& cfg,
                                                ReferenceProvider& refs) {
    if (cfg.eps_list.empty())
        throw std::invalid_argument("run_sweep: eps_list is empty");
    if (cfg.h_list.empty() == cfg.tau_list.empty())
        throw std::invalid_argument("run_sweep: exactly one of h_list / tau_list must be set");
    detail::require_decreasing(cfg.eps_list, "eps_list");
    detail::require_decreasing(cfg.h_list.empty() ? cfg.tau_list : cfg.h_list,
                               cfg.h_list.empty() ? "tau_list" : "h_list");
    for (const double eps : cfg.eps_list)
        if (!(eps > 0.0) || eps > 1.0)
            throw std::invalid_argument("run_sweep: eps values must lie in (0, 1]");
    if (!(cfg.t0 > 0.0)) throw std::invalid_argument("run_sweep: need t0 > 0");
    if (!(cfg.tau_e > 0.0)) throw std::invalid_argument("run_sweep: need tau_e > 0");

    const SweepAxis axis = cfg.axis();
    if (axis == SweepAxis::temporal && !(cfg.h_e > 0.0))
        throw std::invalid_argument("run_sweep: temporal sweeps need h_e > 0");

    const InitialData data = initial_data_preset(cfg.preset_id);
    const bool whole_space = cfg.preset_id == "paper-5.1";
    const std::size_t n_cols =
        axis == SweepAxis::spatial ? cfg.h_list.size() : cfg.tau_list.size();
    const std::size_t n_rows = cfg.eps_list.size();

    struct Point {
        ProblemSpec spec;       // plain-clock problem on the row's domain
        std::size_t M = 0;
        double step = 0.0;      // sweep clock: plain for standard, slow for oscillatory
        long n_steps = 0;
        double h = 0.0;
        double t_final = 0.0;   // sweep-clock horizon
    };
    std::vector<Point> points(n_rows * n_cols);
    std::vector<const GridFunction*> row_ref(n_rows, nullptr);
    std::vector<std::size_t> row_fine_M(n_rows, 0);

    for (std::size_t i = 0; i < n_rows; ++i) {
        const double eps = cfg.eps_list[i];
        double a = 0.0, b = 2.0 * std::numbers::pi;
        if (whole_space) std::tie(a, b) = truncate_whole_space(eps, cfg.beta);
        const ProblemSpec spec = make_problem(a, b, eps, cfg.beta, data.phi, data.gamma);

        const double T_plain = cfg.t0 * std::pow(eps, -cfg.beta);
        const double horizon = cfg.mode == RunMode::standard ? T_plain : cfg.t0;
        // slow-clock equivalent of the fixed plain-clock step
        const double clock = cfg.mode == RunMode::standard ? 1.0 : std::pow(eps, cfg.beta);

        std::size_t finest_M = 0;
        for (std::size_t j = 0; j < n_cols; ++j) {
            Point& p = points[i * n_cols + j];
            p.spec = spec;
            p.t_final = horizon;
            if (axis == SweepAxis::spatial) {
                p.h = cfg.h_list[j];
                p.M = detail::nodes_for(b - a, p.h, "h_list entry");
                p.step = cfg.tau_e * clock;
            } else {
                p.h = cfg.h_e;
                p.M = detail::nodes_for(b - a, cfg.h_e, "h_e");
                p.step = cfg.tau_list[j];
                // swept steps live on the sweep clock; compare on the plain one
                if (!(cfg.tau_e < p.step / clock))
                    throw std::invalid_argument(
                        "run_sweep: reference step tau_e must be finer than every swept step");
            }
            p.n_steps = detail::steps_for(horizon, p.step, "sweep step");
            finest_M = std::max(finest_M, p.M);
        }

        std::size_t fine_M = cfg.ref_fine_M;
        if (fine_M == 0) fine_M = finest_M << cfg.ref_margin;
        for (std::size_t j = 0; j < n_cols; ++j) {
            const std::size_t M = points[i * n_cols + j].M;
            if (fine_M < 2 * M && fine_M != M)
                throw std::invalid_argument("run_sweep: reference mesh is not finer than the sweep");
            if (fine_M % M != 0)
                throw std::invalid_argument("run_sweep: sweep mesh must divide the reference mesh");
        }
        row_fine_M[i] = fine_M;
        // serial prefetch: worker tasks only read these entries
        row_ref[i] = &refs.fine(spec, cfg.preset_id, T_plain, fine_M, cfg.tau_e);
    }

    std::vector<ConvergenceRecord> records(points.size());
    const unsigned workers =
        cfg.workers == 0 ? default_worker_count() : cfg.workers;

    parallel_for_indexed(points.size(), workers, [&](std::size_t idx) {
        const Point& p = points[idx];
        const std::size_t row = idx / n_cols;
        ConvergenceRecord& rec = records[idx];
        rec.scheme = cfg.scheme;
        rec.mode = cfg.mode;
        rec.beta = cfg.beta;
        rec.eps = p.spec.eps;
        rec.h = p.h;
        rec.tau = p.step;
        rec.t_final = p.t_final;

        const Grid1D g = make_grid(p.spec.a, p.spec.b, p.M);
        try {
            RunOutcome out =
                cfg.mode == RunMode::standard
                    ? run(p.spec, cfg.scheme, g, p.step, p.n_steps, cfg.solver)
                    : osc_run(make_osc_problem(p.spec), cfg.scheme, g, p.step,
                              p.n_steps, cfg.solver, cfg.regularized_first_step);

            const std::size_t stride = row_fine_M[row] / p.M;
            const GridFunction& fine = *row_ref[row];
            GridFunction ref(p.M);
            for (std::size_t j = 0; j < p.M; ++j) ref.v[j] = fine.v[j * stride];
            rec.error = error_norm(g, ref, out.state.u_curr);
            rec.status = PointStatus::ok;
        } catch (const blow_up_error&) {
            rec.status = PointStatus::blowup;
        } catch (const convergence_error&) {
            rec.status = PointStatus::nonconvergence;
        }
    });

    // fill the order column pairwise along each row, exactly as the study
    // tables do; a failed neighbour leaves the cell empty
    for (std::size_t i = 0; i < n_rows; ++i) {
        for (std::size_t j = 1; j < n_cols; ++j) {
            ConvergenceRecord& fine_rec = records[i * n_cols + j];
            const ConvergenceRecord& coarse_rec = records[i * n_cols + j - 1];
            if (fine_rec.status != PointStatus::ok || coarse_rec.status != PointStatus::ok)
                continue;
            const double ratio = axis == SweepAxis::spatial
                                     ? cfg.h_list[j - 1] / cfg.h_list[j]
                                     : cfg.tau_list[j - 1] / cfg.tau_list[j];
            const double ord = estimate_order(coarse_rec.error, fine_rec.error, ratio);
            if (std::isfinite(ord)) fine_rec.order = ord;
        }
    }
    return records;
}

inline std::vector<ConvergenceRecord> run_sweep(const SweepConfig& cfg) {
    ReferenceProvider refs(cfg.cache_dir);
    return run_sweep(cfg, refs);
}

// -------------------------------------------------------------------------
// scalability verdicts over a finished (eps x resolution) record matrix

struct ScalabilityOptions {
    double diagonal_factor = 4.0;
    double growth_factor = 2.0;
    // resolution ~ eps^exponent along the matched diagonal; NaN derives the
    // standard choice from the records: beta/2, except 3 beta/2 for
    // slow-clock temporal sweeps
    double exponent = std::numeric_limits<double>::quiet_NaN();
};

struct ScalabilityReport {
    std::vector<double> diagonal;
    double spread = 1.0;
    bool diagonal_ok = false;
    bool growth_ok = false;
    std::string detail;
    bool passed() const { return diagonal_ok && growth_ok; }
};

inline ScalabilityReport check_scalability(const std::vector<ConvergenceRecord>& records,
                                           double beta,
                                           ScalabilityOptions opt = {}) {
    if (records.empty()) throw std::invalid_argument("check_scalability: no records");

    // recover the matrix layout: rows keyed by eps, columns in file order
    std::vector<double> eps_rows;
    for (const auto& r : records)
        if (eps_rows.empty() || r.eps != eps_rows.back()) eps_rows.push_back(r.eps);
    const std::size_t n_rows = eps_rows.size();
    if (records.size() % n_rows != 0)
        throw std::invalid_argument("check_scalability: ragged record matrix");
    const std::size_t n_cols = records.size() / n_rows;
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::size_t j = 0; j < n_cols; ++j)
            if (records[i * n_cols + j].eps != eps_rows[i])
                throw std::invalid_argument("check_scalability: rows are not contiguous");
    for (std::size_t i = 1; i < n_rows; ++i)
        if (!(eps_rows[i] < eps_rows[i - 1]))
            throw std::invalid_argument("check_scalability: eps rows must decrease");

    const bool spatial = n_cols >= 2 &&
                         records[0].h != records[1].h;
    auto resolution = [&](std::size_t i, std::size_t j) {
        const ConvergenceRecord& r = records[i * n_cols + j];
        return spatial ? r.h : r.tau;
    };
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::size_t j = 1; j < n_cols; ++j)
            if (!(resolution(i, j) < resolution(i, j - 1)))
                throw std::invalid_argument("check_scalability: resolutions must decrease per row");

    double exponent = opt.exponent;
    if (std::isnan(exponent)) {
        const bool slow_clock_temporal =
            !spatial && records[0].mode == RunMode::oscillatory;
        exponent = (slow_clock_temporal ? 1.5 : 0.5) * beta;
    }

    // diagonal column index per row from the refinement ratios
    std::vector<std::size_t> diag_col(n_rows, 0);
    if (n_rows >= 2 && n_cols >= 2 && exponent != 0.0) {
        const double r_eps = eps_rows[0] / eps_rows[1];
        const double r_res = resolution(0, 0) / resolution(0, 1);
        for (std::size_t i = 1; i < n_rows; ++i) {
            const double want =
                static_cast<double>(i) * exponent * std::log(r_eps) / std::log(r_res);
            const double rounded = std::round(want);
            if (std::abs(want - rounded) > 0.3)
                throw std::invalid_argument(
                    "check_scalability: eps and resolution ratios do not admit a matched diagonal");
            diag_col[i] = static_cast<std::size_t>(rounded);
        }
    }

    ScalabilityReport rep;
    char line[160];

    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool diag_all_ok = true;
    std::vector<std::optional<std::size_t>> diag_row_of_col(n_cols);
    for (std::size_t i = 0; i < n_rows; ++i) {
        if (diag_col[i] >= n_cols) {
            std::snprintf(line, sizeof line,
                          "row eps=%.6g: diagonal column %zu beyond the sweep, skipped\n",
                          eps_rows[i], diag_col[i]);
            rep.detail += line;
            continue;
        }
        const ConvergenceRecord& r = records[i * n_cols + diag_col[i]];
        if (r.status != PointStatus::ok) {
            diag_all_ok = false;
            std::snprintf(line, sizeof line, "row eps=%.6g: diagonal point failed (%s)\n",
                          eps_rows[i], point_status_name(r.status));
            rep.detail += line;
            continue;
        }
        diag_row_of_col[diag_col[i]] = i;
        rep.diagonal.push_back(r.error);
        lo = std::min(lo, r.error);
        hi = std::max(hi, r.error);
    }
    if (rep.diagonal.empty())
        throw std::invalid_argument("check_scalability: no usable diagonal entries");

    rep.spread = hi / lo;
    rep.diagonal_ok = diag_all_ok && rep.spread <= opt.diagonal_factor;
    std::snprintf(line, sizeof line,
                  "diagonal spread %.3g (allowed %.3g): %s\n", rep.spread,
                  opt.diagonal_factor, rep.diagonal_ok ? "ok" : "FAIL");
    rep.detail += line;

    // under-resolved side: each column's worst entry must sit well above the
    // matched-diagonal error of that column
    bool growth_ok = true;
    bool any_growth_checked = false;
    for (std::size_t j = 0; j < n_cols; ++j) {
        if (!diag_row_of_col[j]) continue;
        const double diag_err = records[*diag_row_of_col[j] * n_cols + j].error;
        double worst = 0.0;
        bool have_sub = false;
        for (std::size_t i = 0; i < n_rows; ++i) {
            if (diag_col[i] <= j) continue;  // row resolved at this column
            const ConvergenceRecord& r = records[i * n_cols + j];
            if (r.status != PointStatus::ok) continue;
            worst = std::max(worst, r.error);
            have_sub = true;
        }
        if (!have_sub) continue;
        any_growth_checked = true;
        const bool ok = worst >= opt.growth_factor * diag_err;
        if (!ok) growth_ok = false;
        std::snprintf(line, sizeof line,
                      "column %zu: under-resolved max %.3g vs diagonal %.3g: %s\n", j,
                      worst, diag_err, ok ? "grows" : "FAIL");
        rep.detail += line;
    }
    rep.growth_ok = growth_ok;
    if (!any_growth_checked) rep.detail += "no under-resolved cells to check\n";

    return rep;
}

}  // namespace nkg
