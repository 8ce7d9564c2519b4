#pragma once

// Transform-based evaluation of the 2D nonlinear term,
// N_k = -2 pi i k . (u w)_k, with u and w synthesized on an M x M grid.
// M >= 3 floor(K_max) + 1 makes the quadratic product alias-free on Z, so the
// result equals the direct convolution up to roundoff. Requires FFTW3.

#include "galerkin/dynamics.hpp"
#include "galerkin/errors.hpp"
#include "galerkin/state.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace galerkin {

class FastNonlinearity2D final : public NonlinearEvaluator2D {
public:
    static int minimum_grid(const TruncationSet<2>& z) { return 3 * z.half_width() + 1; }

    explicit FastNonlinearity2D(TruncationPtr<2> z, int grid = 0) : z_(std::move(z)) {
        m_ = grid == 0 ? minimum_grid(*z_) : grid;
        if (m_ < minimum_grid(*z_))
            throw Error(ErrorCode::Configuration, "grid side " + std::to_string(m_) +
                                                      " is too small for exact dealiasing (need " +
                                                      std::to_string(minimum_grid(*z_)) + ")");
        mh_ = m_ / 2 + 1;
        const std::size_t nr = static_cast<std::size_t>(m_) * m_;
        const std::size_t nc = static_cast<std::size_t>(m_) * mh_;
        for (auto& b : spec_) b = fftw_alloc_complex(nc);
        for (auto& b : phys_) b = fftw_alloc_real(nr);
        std::lock_guard<std::mutex> lock(planner_mutex());
        inverse_ = fftw_plan_dft_c2r_2d(m_, m_, spec_[0], phys_[0], FFTW_ESTIMATE);
        forward_ = fftw_plan_dft_r2c_2d(m_, m_, phys_[0], spec_[0], FFTW_ESTIMATE);
    }

    FastNonlinearity2D(const FastNonlinearity2D&) = delete;
    FastNonlinearity2D& operator=(const FastNonlinearity2D&) = delete;

    ~FastNonlinearity2D() override {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(inverse_);
        fftw_destroy_plan(forward_);
        for (auto b : spec_) fftw_free(b);
        for (auto b : phys_) fftw_free(b);
    }

    int grid() const { return m_; }

    void evaluate(const Spectrum2D& s, Spectrum2D& out) const override {
        if (!s.truncation().same_as(*z_)) throw Error(ErrorCode::DimensionMismatch, "state lives on another truncation");
        const std::size_t nc = static_cast<std::size_t>(m_) * mh_;
        const std::size_t nr = static_cast<std::size_t>(m_) * m_;
        const double two_pi = 2.0 * std::numbers::pi;

        // fields: 0 = w, 1 = u1, 2 = u2
        for (auto b : spec_) std::fill(reinterpret_cast<double*>(b), reinterpret_cast<double*>(b) + 2 * nc, 0.0);
        for (const auto& k : z_->members()) {
            if (k[1] < 0) continue;
            const Complex w = s.at(k);
            const Complex f = w / Complex(0.0, two_pi * static_cast<double>(k.norm2()));
            const std::size_t idx = cell(k);
            put(spec_[0], idx, w);
            put(spec_[1], idx, f * static_cast<double>(k[1]));
            put(spec_[2], idx, -f * static_cast<double>(k[0]));
        }
        for (int f = 0; f < 3; ++f) fftw_execute_dft_c2r(inverse_, spec_[f], phys_[f]);
        // products u1 w, u2 w (c2r overwrote the inputs)
        for (std::size_t j = 0; j < nr; ++j) {
            const double w = phys_[0][j];
            phys_[1][j] *= w;
            phys_[2][j] *= w;
        }
        fftw_execute_dft_r2c(forward_, phys_[1], spec_[1]);
        fftw_execute_dft_r2c(forward_, phys_[2], spec_[2]);
        const double scale = 1.0 / static_cast<double>(nr);
        for (std::size_t i = 0; i < out.size(); ++i) {
            const auto& k = out.wave(i);
            // r2c stores k2 >= 0; fetch conj(-k) otherwise
            const bool flip = k[1] < 0;
            const WaveVector2 q = flip ? -k : k;
            const std::size_t idx = cell(q);
            Complex a(spec_[1][idx][0], spec_[1][idx][1]);
            Complex b(spec_[2][idx][0], spec_[2][idx][1]);
            if (flip) {
                a = std::conj(a);
                b = std::conj(b);
            }
            const Complex div = static_cast<double>(k[0]) * a + static_cast<double>(k[1]) * b;
            out[i] = Complex(0.0, -two_pi) * (div * scale);
        }
    }

private:
    static std::mutex& planner_mutex() {
        static std::mutex m;
        return m;
    }

    std::size_t cell(const WaveVector2& k) const {
        const int r = ((k[0] % m_) + m_) % m_;
        return static_cast<std::size_t>(r) * mh_ + static_cast<std::size_t>(k[1]);
    }

    static void put(fftw_complex* b, std::size_t idx, Complex v) {
        b[idx][0] = v.real();
        b[idx][1] = v.imag();
    }

    TruncationPtr<2> z_;
    int m_ = 0;
    int mh_ = 0;
    // evaluate() reuses these buffers, so one instance must not be shared
    // between threads that evaluate concurrently
    mutable fftw_complex* spec_[3] = {nullptr, nullptr, nullptr};
    mutable double* phys_[3] = {nullptr, nullptr, nullptr};
    fftw_plan inverse_ = nullptr;
    fftw_plan forward_ = nullptr;
};

inline Spectrum2D nonlinear_2d_fast(const Spectrum2D& s) {
    FastNonlinearity2D fast(s.truncation_ptr());
    Spectrum2D out(s.truncation_ptr());
    fast.evaluate(s, out);
    return out;
}

} // namespace galerkin
