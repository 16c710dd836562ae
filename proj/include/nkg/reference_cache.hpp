#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "nkg/grid.hpp"
#include "nkg/problem.hpp"
#include "nkg/spectral.hpp"

namespace nkg {

namespace detail {

inline std::uint64_t fnv1a(const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

// filesystem-safe rendering of a double for cache file names
inline std::string cache_token(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    std::string s(buf);
    for (char& c : s) {
        if (c == '.') c = 'p';
        else if (c == '+') c = 'q';
        else if (c == '-') c = 'm';
    }
    return s;
}

}  // namespace detail

// Disk-backed store of fine exponential-integrator solutions, keyed by
// (data preset, eps, beta, horizon, fine mesh, reference step). A spatial
// sweep, the matching temporal sweep, and the slow-clock variant of either
// all resolve to the same key, so each row's reference is integrated once
// and reread afterwards. Files carry the key fields and a checksum so a
// stale or torn entry is recomputed instead of trusted, and writes go to a
// temporary name followed by an atomic rename.
class ReferenceProvider {
  public:
    explicit ReferenceProvider(std::filesystem::path dir = "nkg_ref_cache")
        : dir_(std::move(dir)) {}

    const std::filesystem::path& directory() const { return dir_; }

    // fine-mesh solution at time T of the plain-clock equation for `spec`
    const GridFunction& fine(const ProblemSpec& spec, const std::string& preset_id,
                             double T, std::size_t fine_M, double tau_e) {
        const std::scoped_lock lock(mutex_);
        const std::string name = file_name(preset_id, spec, T, fine_M, tau_e);
        if (const auto hit = memo_.find(name); hit != memo_.end()) return hit->second;

        GridFunction u(fine_M);
        if (!load(name, spec, T, fine_M, tau_e, u)) {
            const Grid1D fine_grid = make_grid(spec.a, spec.b, fine_M);
            u = reference_solve(spec, T, fine_grid, fine_M, tau_e);
            save(name, spec, T, tau_e, u);
        }
        return memo_.emplace(name, std::move(u)).first->second;
    }

    // the same solution restricted to a coarse grid sharing the fine nodes
    GridFunction on_grid(const ProblemSpec& spec, const std::string& preset_id,
                         double T, const Grid1D& target, std::size_t fine_M,
                         double tau_e) {
        if (target.a != spec.a || target.b != spec.b)
            throw std::invalid_argument("ReferenceProvider: target domain mismatch");
        if (target.M == 0 || fine_M % target.M != 0)
            throw std::invalid_argument("ReferenceProvider: target mesh must divide the fine mesh");
        const GridFunction& u = fine(spec, preset_id, T, fine_M, tau_e);
        const std::size_t stride = fine_M / target.M;
        GridFunction out(target.M);
        for (std::size_t j = 0; j < target.M; ++j) out.v[j] = u.v[j * stride];
        return out;
    }

  private:
    static constexpr std::uint64_t magic_ = 0x3146455247304b4eull;  // "NK0GREF1"

    struct Header {
        std::uint64_t magic;
        std::uint64_t M;
        double a, b, eps, beta, T, tau_e;
    };

    std::string file_name(const std::string& preset_id, const ProblemSpec& spec,
                          double T, std::size_t fine_M, double tau_e) const {
        std::string s = preset_id;
        for (char& c : s)
            if (c == '/' || c == '\\' || c == ' ') c = '_';
        s += "_e" + detail::cache_token(spec.eps);
        s += "_b" + detail::cache_token(spec.beta);
        s += "_T" + detail::cache_token(T);
        s += "_M" + std::to_string(fine_M);
        s += "_te" + detail::cache_token(tau_e);
        return s + ".ref";
    }

    bool load(const std::string& name, const ProblemSpec& spec, double T,
              std::size_t fine_M, double tau_e, GridFunction& out) const {
        std::ifstream in(dir_ / name, std::ios::binary);
        if (!in) return false;

        Header hd{};
        if (!in.read(reinterpret_cast<char*>(&hd), sizeof hd)) return false;
        if (hd.magic != magic_ || hd.M != fine_M) return false;
        if (hd.a != spec.a || hd.b != spec.b || hd.eps != spec.eps ||
            hd.beta != spec.beta || hd.T != T || hd.tau_e != tau_e)
            return false;

        std::vector<double> payload(fine_M);
        if (!in.read(reinterpret_cast<char*>(payload.data()),
                     static_cast<std::streamsize>(fine_M * sizeof(double))))
            return false;
        std::uint64_t sum = 0;
        if (!in.read(reinterpret_cast<char*>(&sum), sizeof sum)) return false;
        if (sum != detail::fnv1a(payload.data(), fine_M * sizeof(double))) return false;

        out.v = std::move(payload);
        return true;
    }

    void save(const std::string& name, const ProblemSpec& spec, double T,
              double tau_e, const GridFunction& u) const {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);

        std::random_device rd;
        const std::string tmp_name =
            name + ".tmp" + std::to_string(rd()) + std::to_string(rd());
        const std::filesystem::path tmp = dir_ / tmp_name;
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) return;  // cache is best-effort; the caller keeps its copy
            Header hd{magic_, u.size(), spec.a, spec.b, spec.eps, spec.beta, T, tau_e};
            out.write(reinterpret_cast<const char*>(&hd), sizeof hd);
            out.write(reinterpret_cast<const char*>(u.v.data()),
                      static_cast<std::streamsize>(u.size() * sizeof(double)));
            const std::uint64_t sum = detail::fnv1a(u.v.data(), u.size() * sizeof(double));
            out.write(reinterpret_cast<const char*>(&sum), sizeof sum);
            if (!out) {
                out.close();
                std::filesystem::remove(tmp, ec);
                return;
            }
        }
        std::filesystem::rename(tmp, dir_ / name, ec);
        if (ec) std::filesystem::remove(tmp, ec);
    }

    std::filesystem::path dir_;
    std::map<std::string, GridFunction> memo_;
    std::mutex mutex_;
};

}  // namespace nkg
