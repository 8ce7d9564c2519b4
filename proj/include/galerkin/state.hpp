#pragma once

// Fourier coefficient states. Only the canonical half of Z is stored, so the
// reality condition w_{-k} = conj(w_k) holds by construction.
//
// 2D sign convention: w = du1/dx2 - du2/dx1 (opposite to the usual curl),
// which gives w_k = 2 pi i (k2 u_{k,1} - k1 u_{k,2}).

#include "galerkin/errors.hpp"
#include "galerkin/lattice.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace galerkin {

using Complex = std::complex<double>;

template <int N>
using CVec = std::array<Complex, static_cast<std::size_t>(N)>;

using CVec2 = CVec<2>;
using CVec3 = CVec<3>;

template <std::size_t N>
constexpr std::array<Complex, N> operator+(const std::array<Complex, N>& a, const std::array<Complex, N>& b) {
    std::array<Complex, N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + b[i];
    return r;
}
template <std::size_t N>
constexpr std::array<Complex, N> operator-(const std::array<Complex, N>& a, const std::array<Complex, N>& b) {
    std::array<Complex, N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
    return r;
}
template <std::size_t N>
constexpr std::array<Complex, N> operator*(Complex s, const std::array<Complex, N>& a) {
    std::array<Complex, N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = s * a[i];
    return r;
}
template <std::size_t N>
constexpr std::array<Complex, N> operator*(double s, const std::array<Complex, N>& a) {
    std::array<Complex, N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = s * a[i];
    return r;
}
template <std::size_t N>
constexpr std::array<Complex, N>& operator+=(std::array<Complex, N>& a, const std::array<Complex, N>& b) {
    for (std::size_t i = 0; i < N; ++i) a[i] += b[i];
    return a;
}

template <std::size_t N>
std::array<Complex, N> conj(const std::array<Complex, N>& a) {
    std::array<Complex, N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = std::conj(a[i]);
    return r;
}

inline Complex conj(const Complex& a) { return std::conj(a); }

inline double norm2(const Complex& a) { return std::norm(a); }

template <std::size_t N>
double norm2(const std::array<Complex, N>& a) {
    double s = 0.0;
    for (const auto& v : a) s += std::norm(v);
    return s;
}

inline double magnitude(const Complex& a) { return std::abs(a); }

template <std::size_t N>
double magnitude(const std::array<Complex, N>& a) {
    return std::sqrt(norm2(a));
}

template <std::size_t N>
Complex dot(const std::array<Complex, N>& a, const WaveVector<int(N)>& k) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += a[i] * static_cast<double>(k[i]);
    return s;
}

/// Bilinear (non-conjugating) dot product.
template <std::size_t N>
Complex dot(const std::array<Complex, N>& a, const std::array<Complex, N>& b) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
    return s;
}

inline CVec3 cross(const WaveVector3& k, const CVec3& v) {
    const double k0 = k[0], k1 = k[1], k2 = k[2];
    return CVec3{k1 * v[2] - k2 * v[1], k2 * v[0] - k0 * v[2], k0 * v[1] - k1 * v[0]};
}

inline CVec3 cross(const CVec3& a, const CVec3& b) {
    return CVec3{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Removes the component of v along k.
inline CVec3 project_transverse(const WaveVector3& k, const CVec3& v) {
    const Complex along = dot(v, k) / static_cast<double>(k.norm2());
    CVec3 r = v;
    for (int i = 0; i < 3; ++i) r[i] -= along * static_cast<double>(k[i]);
    return r;
}

/// Real and imaginary parts of an amplitude, measured as in the trapping sets:
/// |Re w|, |Im w| for scalars and the Euclidean norms of Re w, Im w for vectors.
inline std::array<double, 2> part_magnitudes(const Complex& a) { return {std::abs(a.real()), std::abs(a.imag())}; }

inline std::array<double, 2> part_magnitudes(const CVec3& a) {
    double re = 0.0, im = 0.0;
    for (const auto& v : a) {
        re += v.real() * v.real();
        im += v.imag() * v.imag();
    }
    return {std::sqrt(re), std::sqrt(im)};
}

template <int D>
struct AmplitudeOf;
template <>
struct AmplitudeOf<2> {
    using type = Complex;
};
template <>
struct AmplitudeOf<3> {
    using type = CVec3;
};

template <int D>
using Amplitude = typename AmplitudeOf<D>::type;

template <int D>
inline Amplitude<D> zero_amplitude() {
    return Amplitude<D>{};
}

template <int D>
using TruncationPtr = std::shared_ptr<const TruncationSet<D>>;

template <int D>
TruncationPtr<D> make_truncation(TruncationShape shape, double k_max) {
    return std::make_shared<const TruncationSet<D>>(shape, k_max);
}

/// Vorticity coefficients on the canonical half of Z (scalar in 2D, complex
/// 3-vector in 3D).
template <int D>
class Spectrum {
public:
    using Value = Amplitude<D>;

    explicit Spectrum(TruncationPtr<D> z) : z_(std::move(z)), values_(z_->canonical_count(), Value{}) {}

    const TruncationSet<D>& truncation() const { return *z_; }
    const TruncationPtr<D>& truncation_ptr() const { return z_; }

    std::size_t size() const { return values_.size(); }
    const WaveVector<D>& wave(std::size_t slot) const { return z_->canonical(slot); }

    const Value& operator[](std::size_t slot) const { return values_[slot]; }
    Value& operator[](std::size_t slot) { return values_[slot]; }

    std::span<Value> values() { return values_; }
    std::span<const Value> values() const { return values_; }

    /// Full-map lookup: conj for -k, zero for k outside Z (including k = 0).
    Value at(const WaveVector<D>& k) const {
        auto m = z_->index_of(k);
        if (!m) return Value{};
        const auto& slot = z_->slot_of(*m);
        return slot.conjugate ? conj(values_[slot.index]) : values_[slot.index];
    }

    /// Sets w_k (and implicitly w_{-k}); k must be a member of Z.
    void set(const WaveVector<D>& k, const Value& v) {
        auto m = z_->index_of(k);
        if (!m) throw Error(ErrorCode::Domain, "wave vector " + to_string(k) + " is not in the truncation");
        const auto& slot = z_->slot_of(*m);
        values_[slot.index] = slot.conjugate ? conj(v) : v;
    }

private:
    TruncationPtr<D> z_;
    std::vector<Value> values_;
};

using Spectrum2D = Spectrum<2>;
using Spectrum3D = Spectrum<3>;

/// Velocity coefficients aligned with the canonical slots of a spectrum.
template <int D>
struct VelocitySpectrum {
    TruncationPtr<D> truncation;
    std::vector<CVec<D>> values;
};

inline constexpr double kTransversalityTolerance = 1e-12;

/// Largest |(k, w_k)| / (|k| |w_k|) over the state.
inline double transversality_defect(const Spectrum3D& s) {
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double m = magnitude(s[i]);
        if (m == 0.0) continue;
        const auto& k = s.wave(i);
        worst = std::max(worst, std::abs(dot(s[i], k)) / (k.norm() * m));
    }
    return worst;
}

inline void require_transversal(const Spectrum3D& s) {
    const double defect = transversality_defect(s);
    if (defect > kTransversalityTolerance)
        throw Error(ErrorCode::InvalidState, "vorticity not transversal to k (defect " + std::to_string(defect) + ")");
}

/// u_k = w_k (k2, -k1) / (2 pi i |k|^2).
inline VelocitySpectrum<2> velocity_from_vorticity_2d(const Spectrum2D& s) {
    VelocitySpectrum<2> u{s.truncation_ptr(), std::vector<CVec2>(s.size())};
    const Complex two_pi_i(0.0, 2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& k = s.wave(i);
        const Complex f = s[i] / (two_pi_i * static_cast<double>(k.norm2()));
        u.values[i] = CVec2{f * static_cast<double>(k[1]), -f * static_cast<double>(k[0])};
    }
    return u;
}

/// u_k = i (k x w_k) / (2 pi |k|^2); inverse of w_k = 2 pi i k x u_k on
/// transversal states.
inline VelocitySpectrum<3> velocity_from_vorticity_3d(const Spectrum3D& s) {
    require_transversal(s);
    VelocitySpectrum<3> u{s.truncation_ptr(), std::vector<CVec3>(s.size())};
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& k = s.wave(i);
        const Complex f(0.0, 1.0 / (2.0 * std::numbers::pi * static_cast<double>(k.norm2())));
        u.values[i] = f * cross(k, s[i]);
    }
    return u;
}

/// Copy onto another truncation: shared modes kept, the rest zero.
template <int D>
Spectrum<D> restrict_to(const Spectrum<D>& s, TruncationPtr<D> target) {
    Spectrum<D> out(std::move(target));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = s.at(out.wave(i));
    return out;
}

} // namespace galerkin
