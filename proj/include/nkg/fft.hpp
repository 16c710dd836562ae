#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <cmath>

namespace nkg {

using cplx = std::complex<double>;

// Discrete Fourier transform plan for a fixed length N.
//
// Convention: forward  X_k = sum_j x_j exp(-2*pi*i*j*k/N)   (unscaled)
//             inverse  x_j = (1/N) sum_k X_k exp(+2*pi*i*j*k/N)
//
// Powers of two run through an iterative radix-2 kernel; other lengths go
// through a recursive mixed-radix decomposition whose prime combine step is
// a direct DFT, so any N is handled exactly (cost O(N * largest prime factor)
// at the worst level).  A plan owns scratch space: one plan per thread.
class Fft {
public:
    explicit Fft(std::size_t n) : n_(n) {
        if (n == 0) throw std::invalid_argument("Fft: length must be positive");
        pow2_ = (n & (n - 1)) == 0;
        twiddle_.resize(n);
        const double step = -2.0 * pi() / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k)
            twiddle_[k] = std::polar(1.0, step * static_cast<double>(k));
        if (pow2_) {
            rev_.resize(n);
            std::size_t bits = 0;
            while ((std::size_t{1} << bits) < n) ++bits;
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t r = 0;
                for (std::size_t b = 0; b < bits; ++b)
                    if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
                rev_[i] = r;
            }
        } else {
            scratch_.resize(n);
        }
    }

    std::size_t size() const { return n_; }

    void forward(cplx* x) const {
        if (pow2_) radix2(x);
        else { mixed(x, scratch_.data(), n_, 1); std::copy(scratch_.begin(), scratch_.end(), x); }
    }

    // Conjugation trick: inv(x) = conj(fwd(conj(x)))/N.
    void inverse(cplx* x) const {
        for (std::size_t i = 0; i < n_; ++i) x[i] = std::conj(x[i]);
        forward(x);
        const double s = 1.0 / static_cast<double>(n_);
        for (std::size_t i = 0; i < n_; ++i) x[i] = std::conj(x[i]) * s;
    }

    void forward(std::vector<cplx>& x) const { check(x); forward(x.data()); }
    void inverse(std::vector<cplx>& x) const { check(x); inverse(x.data()); }

private:
    static double pi() { return 3.141592653589793238462643383279502884; }

    void check(const std::vector<cplx>& x) const {
        if (x.size() != n_) throw std::invalid_argument("Fft: length mismatch");
    }

    void radix2(cplx* x) const {
        const std::size_t n = n_;
        for (std::size_t i = 0; i < n; ++i)
            if (rev_[i] > i) std::swap(x[i], x[rev_[i]]);
        for (std::size_t len = 2; len <= n; len <<= 1) {
            const std::size_t half = len >> 1;
            const std::size_t tstep = n / len;
            for (std::size_t s = 0; s < n; s += len) {
                const cplx* w = twiddle_.data();
                for (std::size_t j = 0; j < half; ++j, w += tstep) {
                    const cplx t = *w * x[s + j + half];
                    const cplx u = x[s + j];
                    x[s + j] = u + t;
                    x[s + j + half] = u - t;
                }
            }
        }
    }

    static std::size_t smallest_factor(std::size_t n) {
        for (std::size_t p = 2; p * p <= n; ++p)
            if (n % p == 0) return p;
        return n;
    }

    // out[0..n) <- DFT of in[0], in[stride], ..., length n.
    void mixed(const cplx* in, cplx* out, std::size_t n, std::size_t stride) const {
        if (n == 1) { out[0] = in[0]; return; }
        const std::size_t r = smallest_factor(n);
        if (r > 64) { direct_strided(in, out, n, stride); return; }
        const std::size_t m = n / r;
        for (std::size_t c = 0; c < r; ++c)
            mixed(in + c * stride, out + c * m, m, stride * r);
        const std::size_t root = n_ / n;  // current length's unit root as an index into twiddle_
        cplx t[64];
        for (std::size_t u = 0; u < m; ++u) {
            for (std::size_t c = 0; c < r; ++c)
                t[c] = out[c * m + u] * twiddle_[(u * c * root) % n_];
            for (std::size_t v = 0; v < r; ++v) {
                cplx acc = t[0];
                const std::size_t vr = (v * m * root) % n_;
                std::size_t idx = 0;
                for (std::size_t c = 1; c < r; ++c) {
                    idx += vr;
                    if (idx >= n_) idx -= n_;
                    acc += t[c] * twiddle_[idx];
                }
                out[u + v * m] = acc;
            }
        }
    }

    // O(n^2) fallback for a prime block too large for the stack buffer.
    void direct_strided(const cplx* in, cplx* out, std::size_t n, std::size_t stride) const {
        const std::size_t root = n_ / n;
        for (std::size_t k = 0; k < n; ++k) {
            cplx acc = 0.0;
            std::size_t idx = 0;
            const std::size_t kr = (k * root) % n_;
            for (std::size_t j = 0; j < n; ++j) {
                acc += in[j * stride] * twiddle_[idx];
                idx += kr;
                if (idx >= n_) idx -= n_;
            }
            out[k] = acc;
        }
    }

    std::size_t n_;
    bool pow2_ = false;
    std::vector<cplx> twiddle_;
    std::vector<std::size_t> rev_;
    mutable std::vector<cplx> scratch_;
};

}  // namespace nkg
