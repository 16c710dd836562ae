#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nkg/diagnostics.hpp"
#include "nkg/grid.hpp"
#include "nkg/schemes.hpp"
#include "nkg/sweep.hpp"

namespace nkg::csv {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    return in;
}

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

inline void expect_header(std::istream& in, const char* header, const char* what) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(std::string(what) + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header)
        throw std::runtime_error(std::string(what) + ": expected header \"" + header + "\"");
}

}  // namespace detail

// ---- field snapshots: one file per time level, rows "x,u" ----------------

inline void write_snapshot(std::ostream& os, const Grid1D& g, const GridFunction& u) {
    require_match(g, u, "write_snapshot");
    os << "x,u\n";
    for (std::size_t j = 0; j < g.M; ++j)
        os << num(g.node(j)) << ',' << num(u.v[j]) << '\n';
}

inline void write_snapshot_file(const std::filesystem::path& path, const Grid1D& g,
                                const GridFunction& u) {
    auto os = detail::open_out(path);
    write_snapshot(os, g, u);
    if (!os) throw std::runtime_error("short write: " + path.string());
}

// sink writing {run_id}_step{n}.csv into dir, one file per emitted level
inline SnapshotSink make_snapshot_sink(std::filesystem::path dir, std::string run_id,
                                       Grid1D g) {
    return [dir = std::move(dir), run_id = std::move(run_id),
            g = std::move(g)](long n, const GridFunction& u) {
        const std::filesystem::path path =
            dir / (run_id + "_step" + std::to_string(n) + ".csv");
        write_snapshot_file(path, g, u);
    };
}

// ---- energy traces: rows "n,t,kind,value" --------------------------------

class EnergyTraceWriter {
  public:
    explicit EnergyTraceWriter(const std::filesystem::path& path)
        : os_(detail::open_out(path)) {
        os_ << "n,t,kind,value\n";
    }

    void add(long n, double t, EnergyKind kind, double value) {
        os_ << n << ',' << num(t) << ',' << energy_kind_name(kind) << ','
            << num(value) << '\n';
    }

    void add(const EnergyReport& r) { add(r.n, r.t, r.kind, r.value); }

  private:
    std::ofstream os_;
};

struct EnergyRow {
    long n = 0;
    double t = 0.0;
    std::string kind;
    double value = 0.0;
};

inline std::vector<EnergyRow> read_energy_rows(std::istream& in) {
    detail::expect_header(in, "n,t,kind,value", "energy trace");
    std::vector<EnergyRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = detail::split_line(line);
        if (cells.size() != 4) throw std::runtime_error("energy trace: malformed row: " + line);
        EnergyRow r;
        r.n = std::stol(cells[0]);
        r.t = std::stod(cells[1]);
        r.kind = cells[2];
        r.value = std::stod(cells[3]);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::vector<EnergyRow> read_energy_file(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    return read_energy_rows(in);
}

// ---- sweep records: the study-table record matrix ------------------------

inline constexpr const char* sweep_header =
    "scheme,mode,beta,eps,h,tau,t_final,error,order,status";

inline void write_sweep_records(std::ostream& os,
                                const std::vector<ConvergenceRecord>& records) {
    os << sweep_header << '\n';
    for (const auto& r : records) {
        os << scheme_name(r.scheme) << ',' << run_mode_name(r.mode) << ','
           << num(r.beta) << ',' << num(r.eps) << ',' << num(r.h) << ','
           << num(r.tau) << ',' << num(r.t_final) << ',';
        if (r.status == PointStatus::ok) os << num(r.error);
        os << ',';
        if (r.order) os << num(*r.order);
        os << ',' << point_status_name(r.status) << '\n';
    }
}

inline void write_sweep_file(const std::filesystem::path& path,
                             const std::vector<ConvergenceRecord>& records) {
    auto os = detail::open_out(path);
    write_sweep_records(os, records);
    if (!os) throw std::runtime_error("short write: " + path.string());
}

inline std::vector<ConvergenceRecord> read_sweep_records(std::istream& in) {
    detail::expect_header(in, sweep_header, "sweep table");
    std::vector<ConvergenceRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = detail::split_line(line);
        if (cells.size() != 10) throw std::runtime_error("sweep table: malformed row: " + line);
        ConvergenceRecord r;
        r.scheme = parse_scheme(cells[0]);
        r.mode = parse_run_mode(cells[1]);
        r.beta = std::stod(cells[2]);
        r.eps = std::stod(cells[3]);
        r.h = std::stod(cells[4]);
        r.tau = std::stod(cells[5]);
        r.t_final = std::stod(cells[6]);
        r.status = parse_point_status(cells[9]);
        r.error = cells[7].empty() ? 0.0 : std::stod(cells[7]);
        if (!cells[8].empty()) r.order = std::stod(cells[8]);
        records.push_back(std::move(r));
    }
    return records;
}

inline std::vector<ConvergenceRecord> read_sweep_file(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    return read_sweep_records(in);
}

}  // namespace nkg::csv
