#pragma once

// Right-hand sides of the truncated systems
//
//   2D:  dw_k/dt = N_k - 4 pi^2 nu |k|^alpha w_k + g_k,
//        N_k = sum_{l1+l2=k} w_{l1} w_{l2} (k, l2^perp) / |l2|^2
//   3D:  dw_k/dt = N_k - 4 pi^2 nu |k|^alpha w_k + g_k,
//        N_k = -2 pi i sum_{l1+l2=k} [(u_{l1}, k) w_{l2} - (w_{l1}, k) u_{l2}]
//
// All sums run over l1, l2 in Z. The 2D coefficient (k, l2^perp)/|l2|^2 is
// real, so N_{-k} = conj(N_k) and the truncated nonlinearity conserves both
// enstrophy and energy.

#include "galerkin/errors.hpp"
#include "galerkin/forcing.hpp"
#include "galerkin/lattice.hpp"
#include "galerkin/state.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <vector>

namespace galerkin {

struct PhysicalParams {
    double nu = 1.0;
    double alpha = 2.0;

    void validate() const {
        if (!(nu > 0.0)) throw Error(ErrorCode::Configuration, "nu must be positive");
        if (!(alpha > 1.0)) throw Error(ErrorCode::Configuration, "alpha must exceed 1");
    }
};

/// 4 pi^2 nu |k|^alpha, with |k|^alpha = exp(alpha ln |k|).
template <int D>
double dissipation_rate(const PhysicalParams& p, const WaveVector<D>& k) {
    return 4.0 * std::numbers::pi * std::numbers::pi * p.nu *
           std::exp(p.alpha * std::log(static_cast<double>(k.norm())));
}

/// One ordered pair (l1, l2) feeding an output slot, referenced through the
/// canonical storage: value(l) = conj ? conj(s[slot]) : s[slot].
struct Triad {
    std::uint32_t s1;
    std::uint32_t s2;
    bool c1;
    bool c2;
    double coef; ///< 2D: (k, l2^perp)/|l2|^2; unused in 3D
    std::int32_t m1; ///< member index of l1
    std::int32_t m2; ///< member index of l2
};

/// Interaction table of a truncation: for every canonical k, all ordered
/// pairs l1 + l2 = k in Z, ordered by l1.
template <int D>
class TriadTable {
public:
    explicit TriadTable(const TruncationSet<D>& z) {
        offsets_.reserve(z.canonical_count() + 1);
        offsets_.push_back(0);
        for (std::size_t i = 0; i < z.canonical_count(); ++i) {
            const auto& k = z.canonical(i);
            for (std::size_t m1 = 0; m1 < z.size(); ++m1) {
                const auto& l1 = z.member(m1);
                const auto m2 = z.index_of(k - l1);
                if (!m2) continue;
                const auto& l2 = z.member(*m2);
                const auto& a = z.slot_of(m1);
                const auto& b = z.slot_of(*m2);
                double coef = 0.0;
                if constexpr (D == 2) {
                    const auto lp = perp(l2);
                    coef = static_cast<double>(dot(k, lp)) / static_cast<double>(l2.norm2());
                }
                triads_.push_back(Triad{static_cast<std::uint32_t>(a.index), static_cast<std::uint32_t>(b.index),
                                        a.conjugate, b.conjugate, coef, static_cast<std::int32_t>(m1),
                                        static_cast<std::int32_t>(*m2)});
            }
            offsets_.push_back(triads_.size());
        }
    }

    std::size_t slots() const { return offsets_.size() - 1; }
    std::size_t size() const { return triads_.size(); }
    const Triad* begin(std::size_t slot) const { return triads_.data() + offsets_[slot]; }
    const Triad* end(std::size_t slot) const { return triads_.data() + offsets_[slot + 1]; }

private:
    std::vector<std::size_t> offsets_;
    std::vector<Triad> triads_;
};

namespace detail {

template <class T>
inline T fetch(const std::vector<T>& v, std::uint32_t slot, bool c) {
    return c ? conj(v[slot]) : v[slot];
}

template <class T>
inline T fetch(std::span<const T> v, std::uint32_t slot, bool c) {
    return c ? conj(v[slot]) : v[slot];
}

} // namespace detail

/// Alternative evaluator of the 2D nonlinear term (e.g. a transform-based one).
class NonlinearEvaluator2D {
public:
    virtual ~NonlinearEvaluator2D() = default;
    virtual void evaluate(const Spectrum2D& s, Spectrum2D& out) const = 0;
};

/// A truncated system: truncation, parameters, forcing, interaction table and
/// dissipation rates. Evaluation never mutates the input state.
template <int D>
class GalerkinSystem {
public:
    GalerkinSystem(TruncationPtr<D> z, PhysicalParams p, ForcingSpec f)
        : z_(std::move(z)), params_(p), forcing_(f, *z_), triads_(*z_) {
        params_.validate();
        rates_.resize(z_->canonical_count());
        for (std::size_t i = 0; i < rates_.size(); ++i) rates_[i] = dissipation_rate(params_, z_->canonical(i));
    }

    const TruncationSet<D>& truncation() const { return *z_; }
    const TruncationPtr<D>& truncation_ptr() const { return z_; }
    const PhysicalParams& params() const { return params_; }
    const ForcingField<D>& forcing() const { return forcing_; }
    const TriadTable<D>& triads() const { return triads_; }
    /// 4 pi^2 nu |k|^alpha per canonical slot.
    const std::vector<double>& rates() const { return rates_; }

    void set_fast_path(std::shared_ptr<const NonlinearEvaluator2D> fast) { fast_ = std::move(fast); }
    bool uses_fast_path() const { return fast_ != nullptr; }

    /// Direct O(|Z|^2) evaluation of the nonlinear term.
    void nonlinear_direct(const Spectrum<D>& s, Spectrum<D>& out) const {
        const auto w = s.values();
        if constexpr (D == 2) {
            for (std::size_t i = 0; i < triads_.slots(); ++i) {
                Complex acc = 0.0;
                for (const Triad* t = triads_.begin(i); t != triads_.end(i); ++t) {
                    if (t->coef == 0.0) continue;
                    acc += t->coef * (detail::fetch(w, t->s1, t->c1) * detail::fetch(w, t->s2, t->c2));
                }
                out[i] = acc;
            }
        } else {
            const auto u = velocity_from_vorticity_3d(s);
            const std::span<const CVec3> uv(u.values);
            const Complex minus_two_pi_i(0.0, -2.0 * std::numbers::pi);
            for (std::size_t i = 0; i < triads_.slots(); ++i) {
                const auto& k = z_->canonical(i);
                CVec3 acc{};
                for (const Triad* t = triads_.begin(i); t != triads_.end(i); ++t) {
                    const CVec3 u1 = detail::fetch(uv, t->s1, t->c1);
                    const CVec3 w1 = detail::fetch(w, t->s1, t->c1);
                    const CVec3 u2 = detail::fetch(uv, t->s2, t->c2);
                    const CVec3 w2 = detail::fetch(w, t->s2, t->c2);
                    acc += dot(u1, k) * w2 - dot(w1, k) * u2;
                }
                out[i] = minus_two_pi_i * acc;
            }
        }
    }

    void nonlinear(const Spectrum<D>& s, Spectrum<D>& out) const;

    /// N + dissipation + forcing at time t, assembled in that order. The 3D
    /// tendency is projected onto the plane orthogonal to k.
    void rhs(const Spectrum<D>& s, double t, Spectrum<D>& out) const {
        nonlinear(s, out);
        const bool forced = forcing_.active();
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = out[i] + (-rates_[i]) * s[i];
            if (forced) out[i] = out[i] + forcing_.at(i, t);
            if constexpr (D == 3) out[i] = project_transverse(z_->canonical(i), out[i]);
        }
    }

    Spectrum<D> zero() const { return Spectrum<D>(z_); }

private:
    TruncationPtr<D> z_;
    PhysicalParams params_;
    ForcingField<D> forcing_;
    TriadTable<D> triads_;
    std::vector<double> rates_;
    std::shared_ptr<const NonlinearEvaluator2D> fast_;
};

using System2D = GalerkinSystem<2>;
using System3D = GalerkinSystem<3>;

template <int D>
void GalerkinSystem<D>::nonlinear(const Spectrum<D>& s, Spectrum<D>& out) const {
    if constexpr (D == 2) {
        if (fast_) {
            fast_->evaluate(s, out);
            return;
        }
    }
    nonlinear_direct(s, out);
}

// Free-function forms; each builds the interaction table of s's truncation.

inline Spectrum2D nonlinear_2d(const Spectrum2D& s) {
    GalerkinSystem<2> sys(s.truncation_ptr(), PhysicalParams{}, ForcingSpec{});
    Spectrum2D out(s.truncation_ptr());
    sys.nonlinear_direct(s, out);
    return out;
}

inline Spectrum3D nonlinear_3d(const Spectrum3D& s) {
    GalerkinSystem<3> sys(s.truncation_ptr(), PhysicalParams{}, ForcingSpec{});
    Spectrum3D out(s.truncation_ptr());
    sys.nonlinear_direct(s, out);
    return out;
}

inline Spectrum2D rhs_2d(const Spectrum2D& s, const PhysicalParams& p, const ForcingSpec& f, double t) {
    GalerkinSystem<2> sys(s.truncation_ptr(), p, f);
    Spectrum2D out(s.truncation_ptr());
    sys.rhs(s, t, out);
    return out;
}

inline Spectrum3D rhs_3d(const Spectrum3D& s, const PhysicalParams& p, const ForcingSpec& f, double t) {
    GalerkinSystem<3> sys(s.truncation_ptr(), p, f);
    Spectrum3D out(s.truncation_ptr());
    sys.rhs(s, t, out);
    return out;
}

/// Real and imaginary parts of a 2D spectrum, slot by slot.
struct SplitSpectrum {
    std::vector<double> re;
    std::vector<double> im;
};

inline SplitSpectrum split(const Spectrum2D& s) {
    SplitSpectrum out{std::vector<double>(s.size()), std::vector<double>(s.size())};
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.re[i] = s[i].real();
        out.im[i] = s[i].imag();
    }
    return out;
}

/// The 2D system written for w = w1 + i w2 in real arithmetic:
///   dw1/dt = sum c (w1 w1' - w2 w2') - 4 pi^2 nu |k|^alpha w1 + Re g
///   dw2/dt = sum c (w1 w2' + w2 w1') - 4 pi^2 nu |k|^alpha w2 + Im g
/// where a conjugated slot flips the sign of its w2.
inline SplitSpectrum rhs_2d_real_split(const System2D& sys, const SplitSpectrum& w, double t) {
    const auto& tri = sys.triads();
    const std::size_t n = tri.slots();
    if (w.re.size() != n || w.im.size() != n) throw Error(ErrorCode::DimensionMismatch, "split arrays do not match Z");
    SplitSpectrum out{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        double nr = 0.0, ni = 0.0;
        for (const Triad* t3 = tri.begin(i); t3 != tri.end(i); ++t3) {
            if (t3->coef == 0.0) continue;
            const double a1 = w.re[t3->s1], b1 = t3->c1 ? -w.im[t3->s1] : w.im[t3->s1];
            const double a2 = w.re[t3->s2], b2 = t3->c2 ? -w.im[t3->s2] : w.im[t3->s2];
            nr += t3->coef * (a1 * a2 - b1 * b2);
            ni += t3->coef * (a1 * b2 + b1 * a2);
        }
        const double lam = sys.rates()[i];
        const Complex g = sys.forcing().at(i, t);
        out.re[i] = nr - lam * w.re[i] + g.real();
        out.im[i] = ni - lam * w.im[i] + g.imag();
    }
    return out;
}

inline SplitSpectrum rhs_2d_real_split(const SplitSpectrum& w, TruncationPtr<2> z, const PhysicalParams& p,
                                       const ForcingSpec& f, double t) {
    System2D sys(std::move(z), p, f);
    return rhs_2d_real_split(sys, w, t);
}

} // namespace galerkin
