#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "nkg/errors.hpp"
#include "nkg/fft.hpp"
#include "nkg/grid.hpp"
#include "nkg/problem.hpp"

namespace nkg {

// Trigonometric integrator in Fourier space, used as the reference march.
//
// With mu_l = 2 pi l / (b - a) and omega_l = sqrt(1 + mu_l^2), each mode of
// u_tt + omega_l^2 u = -f, f = eps^2 u^3, advances by variation of constants
// with f frozen (displacement) and trapezoidal (velocity):
//   uhat+ = cos(tau w) uhat + sin(tau w)/w vhat - (1 - cos(tau w))/w^2 fhat
//   vhat+ = -w sin(tau w) uhat + cos(tau w) vhat - sin(tau w)/w (fhat + fhat+)/2
// Exact when eps = 0; second order in tau otherwise; spectral in space.
// fhat+ comes from the already-updated displacement, so one step costs one
// inverse and one forward transform.

struct SpectralState {
    Grid1D grid;
    std::vector<cplx> u_hat, v_hat;
};

class EwiIntegrator {
public:
    EwiIntegrator(const Grid1D& g, double eps2)
        : grid_(g), eps2_(eps2), plan_(g.M), omega_(g.M),
          u_hat_(g.M), v_hat_(g.M), f_hat_(g.M), u_phys_(g.M), work_(g.M) {
        const double L = g.b - g.a;
        const double pi = 3.141592653589793238462643383279502884;
        for (std::size_t l = 0; l < g.M; ++l) {
            const double signed_l =
                (l <= g.M / 2) ? static_cast<double>(l)
                               : static_cast<double>(l) - static_cast<double>(g.M);
            const double mu = 2.0 * pi * signed_l / L;
            omega_[l] = std::sqrt(1.0 + mu * mu);
        }
    }

    void init(const ScalarField& phi, const ScalarField& gamma) {
        for (std::size_t j = 0; j < grid_.M; ++j) {
            u_phys_[j] = phi(grid_.node(j));
            work_[j] = u_phys_[j];
        }
        plan_.forward(work_.data());
        u_hat_ = work_;
        for (std::size_t j = 0; j < grid_.M; ++j) work_[j] = gamma(grid_.node(j));
        plan_.forward(work_.data());
        v_hat_ = work_;
        refresh_force();
        steps_ = 0;
    }

    void load(const SpectralState& s) {
        if (s.grid.M != grid_.M) throw std::invalid_argument("EwiIntegrator: state size mismatch");
        u_hat_ = s.u_hat;
        v_hat_ = s.v_hat;
        work_ = u_hat_;
        plan_.inverse(work_.data());
        for (std::size_t j = 0; j < grid_.M; ++j) u_phys_[j] = work_[j].real();
        refresh_force();
        steps_ = 0;
    }

    void step(double tau) {
        if (!(tau > 0.0)) throw std::invalid_argument("EwiIntegrator: need tau > 0");
        if (tau != trig_tau_) build_trig(tau);
        const std::size_t M = grid_.M;
        // displacement update, then its force, then the trapezoidal velocity
        for (std::size_t l = 0; l < M; ++l) {
            work_[l] = cos_[l] * u_hat_[l] + sinw_[l] * v_hat_[l] - omc_[l] * f_hat_[l];
        }
        std::vector<cplx> u_next = work_;
        plan_.inverse(work_.data());
        for (std::size_t j = 0; j < M; ++j) {
            u_phys_[j] = work_[j].real();
            const double u = u_phys_[j];
            work_[j] = eps2_ * u * u * u;
        }
        plan_.forward(work_.data());  // work_ now holds fhat+
        for (std::size_t l = 0; l < M; ++l) {
            v_hat_[l] = -omega_[l] * sin_[l] * u_hat_[l] + cos_[l] * v_hat_[l] -
                        sinw_[l] * 0.5 * (f_hat_[l] + work_[l]);
        }
        u_hat_ = std::move(u_next);
        f_hat_ = work_;
        ++steps_;
    }

    const Grid1D& grid() const { return grid_; }
    long steps() const { return steps_; }

    // physical displacement at the current level
    GridFunction solution() const {
        GridFunction u(grid_.M);
        for (std::size_t j = 0; j < grid_.M; ++j) u.v[j] = u_phys_[j];
        return u;
    }

    GridFunction velocity() const {
        work_ = v_hat_;
        plan_.inverse(work_.data());
        GridFunction ut(grid_.M);
        for (std::size_t j = 0; j < grid_.M; ++j) ut.v[j] = work_[j].real();
        return ut;
    }

    SpectralState state() const { return SpectralState{grid_, u_hat_, v_hat_}; }

private:
    void refresh_force() {
        for (std::size_t j = 0; j < grid_.M; ++j) {
            const double u = u_phys_[j];
            work_[j] = eps2_ * u * u * u;
        }
        plan_.forward(work_.data());
        f_hat_ = work_;
    }

    void build_trig(double tau) {
        const std::size_t M = grid_.M;
        cos_.resize(M);
        sin_.resize(M);
        sinw_.resize(M);
        omc_.resize(M);
        for (std::size_t l = 0; l < M; ++l) {
            const double w = omega_[l];
            cos_[l] = std::cos(tau * w);
            sin_[l] = std::sin(tau * w);
            sinw_[l] = sin_[l] / w;
            omc_[l] = (1.0 - cos_[l]) / (w * w);
        }
        trig_tau_ = tau;
    }

    Grid1D grid_;
    double eps2_;
    Fft plan_;
    std::vector<double> omega_;
    std::vector<cplx> u_hat_, v_hat_, f_hat_;
    std::vector<double> u_phys_;
    mutable std::vector<cplx> work_;
    std::vector<double> cos_, sin_, sinw_, omc_;
    double trig_tau_ = -1.0;
    long steps_ = 0;
};

// One step in pure state form; builds a throwaway plan, meant for tests.
inline SpectralState ewi_step(const SpectralState& s, double tau, double eps2) {
    EwiIntegrator integ(s.grid, eps2);
    integ.load(s);
    integ.step(tau);
    return integ.state();
}

// Fine-mesh march restricted onto a coarse target mesh by exact subsampling;
// fine_M must be a multiple of target.M so coarse nodes are fine nodes.
inline GridFunction reference_solve(const ProblemSpec& spec, double T_final,
                                    const Grid1D& target, std::size_t fine_M, double tau_e) {
    if (!(tau_e > 0.0)) throw std::invalid_argument("reference_solve: need tau_e > 0");
    if (T_final < 0.0) throw std::invalid_argument("reference_solve: need T_final >= 0");
    if (fine_M < target.M || fine_M % target.M != 0)
        throw std::invalid_argument("reference_solve: target mesh must divide the fine mesh");
    if (target.a != spec.a || target.b != spec.b)
        throw std::invalid_argument("reference_solve: target domain mismatch");

    const Grid1D fine = make_grid(spec.a, spec.b, fine_M);
    EwiIntegrator integ(fine, spec.eps * spec.eps);
    integ.init(spec.phi, spec.gamma);
    const long n = std::llround(T_final / tau_e);
    if (std::abs(static_cast<double>(n) * tau_e - T_final) > 1e-6 * std::max(1.0, T_final))
        throw std::invalid_argument("reference_solve: T_final not commensurate with tau_e");
    for (long i = 0; i < n; ++i) integ.step(tau_e);

    const GridFunction u_fine = integ.solution();
    double linf = 0.0;
    if (!finite_linf(u_fine, linf) || linf > blow_up_threshold)
        throw blow_up_error(n, linf);

    const std::size_t stride = fine_M / target.M;
    GridFunction out(target.M);
    for (std::size_t j = 0; j < target.M; ++j) out.v[j] = u_fine.v[j * stride];
    return out;
}

}  // namespace nkg
