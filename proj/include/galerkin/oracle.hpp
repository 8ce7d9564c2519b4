#pragma once

// Brute-force reference computations: shell sums by direct enumeration,
// single-mode tendencies, boundary-state construction for the inward audit,
// and conservation rates of the truncated nonlinearity.

#include "galerkin/dynamics.hpp"
#include "galerkin/envelopes.hpp"
#include "galerkin/errors.hpp"
#include "galerkin/estimates.hpp"
#include "galerkin/forcing.hpp"
#include "galerkin/lattice.hpp"
#include "galerkin/state.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

namespace galerkin {

// ---------------------------------------------------------------------------
// Shell sums
// ---------------------------------------------------------------------------

struct ShellSums {
    double near = 0.0;
    double mid = 0.0;
    double far = 0.0;
    double total = 0.0; ///< unpartitioned sum over all pairs
    double sum() const { return near + mid + far; }
};

/// sum |a_{l1}| |b_{l2}| |k|/|l2| over l1 + l2 = k, split by the shell of l2.
/// a and b are indexed by member index of Z.
template <int D>
ShellSums brute_shell_sums(const std::vector<double>& a, const std::vector<double>& b, const WaveVector<D>& k,
                           const TruncationSet<D>& z) {
    if (a.size() != z.size() || b.size() != z.size())
        throw Error(ErrorCode::DimensionMismatch, "sequences must cover Z");
    ShellSums out;
    const double kn = k.norm();
    const auto part = shell_partition(k, convolution_pairs(k, z));
    auto add = [&](const std::vector<ConvolutionPair<D>>& pairs) {
        double s = 0.0;
        for (const auto& [l1, l2] : pairs)
            s += std::abs(a[*z.index_of(l1)]) * std::abs(b[*z.index_of(l2)]) * kn / l2.norm();
        return s;
    };
    out.near = add(part.near);
    out.mid = add(part.mid);
    out.far = add(part.far);
    for (std::size_t m1 = 0; m1 < z.size(); ++m1)
        for (std::size_t m2 = 0; m2 < z.size(); ++m2) {
            if (z.member(m1) + z.member(m2) != k) continue;
            out.total += std::abs(a[m1]) * std::abs(b[m2]) * kn / z.member(m2).norm();
        }
    return out;
}

/// Same as brute_shell_sums but the unpartitioned total uses a single loop
/// with a membership lookup (for large Z).
template <int D>
ShellSums shell_sums_lookup(const std::vector<double>& a, const std::vector<double>& b, const WaveVector<D>& k,
                            const TruncationSet<D>& z) {
    ShellSums out;
    const double kn = k.norm();
    for (std::size_t m1 = 0; m1 < z.size(); ++m1) {
        const auto l2 = k - z.member(m1);
        const auto m2 = z.index_of(l2);
        if (!m2) continue;
        const double term = std::abs(a[m1]) * std::abs(b[*m2]) * kn / l2.norm();
        out.total += term;
        switch (classify_shell(k, l2)) {
        case Shell::Near: out.near += term; break;
        case Shell::Mid: out.mid += term; break;
        case Shell::Far: out.far += term; break;
        }
    }
    return out;
}

/// u C/|l|^r with u uniform in [0, 1], per member of Z.
template <int D>
std::vector<double> random_envelope_sequence(const TruncationSet<D>& z, double C, double r, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> out(z.size());
    for (std::size_t m = 0; m < z.size(); ++m) out[m] = u(rng) * C / std::pow(z.member(m).norm(), r);
    return out;
}

// ---------------------------------------------------------------------------
// Reference nonlinearities by double loops over Z x Z
// ---------------------------------------------------------------------------

inline Spectrum2D nonlinear_2d_brute(const Spectrum2D& s) {
    const auto& z = s.truncation();
    Spectrum2D out(s.truncation_ptr());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& k = out.wave(i);
        Complex acc = 0.0;
        for (const auto& l1 : z.members())
            for (const auto& l2 : z.members()) {
                if (l1 + l2 != k) continue;
                const double c = static_cast<double>(dot(k, perp(l2))) / static_cast<double>(l2.norm2());
                acc += c * s.at(l1) * s.at(l2);
            }
        out[i] = acc;
    }
    return out;
}

/// -2 pi i sum [(u_{l1}, l2) w_{l2} - (w_{l1}, l2) u_{l2}], the form before
/// (u_l, l) = (w_l, l) = 0 is used to replace l2 by k.
inline Spectrum3D nonlinear_3d_unreduced(const Spectrum3D& s) {
    const auto& z = s.truncation();
    const auto u = velocity_from_vorticity_3d(s);
    auto u_at = [&](const WaveVector3& l) {
        const auto m = z.index_of(l);
        const auto& sl = z.slot_of(*m);
        return sl.conjugate ? conj(u.values[sl.index]) : u.values[sl.index];
    };
    Spectrum3D out(s.truncation_ptr());
    const Complex minus_two_pi_i(0.0, -2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& k = out.wave(i);
        CVec3 acc{};
        for (const auto& l1 : z.members())
            for (const auto& l2 : z.members()) {
                if (l1 + l2 != k) continue;
                acc += dot(u_at(l1), l2) * s.at(l2) - dot(s.at(l1), l2) * u_at(l2);
            }
        out[i] = minus_two_pi_i * acc;
    }
    return out;
}

/// Full tendency of one mode, from the defining sums (O(|Z|)).
template <int D>
Amplitude<D> tendency_at(const Spectrum<D>& s, const PhysicalParams& p, const ForcingSpec& f, double t,
                         const WaveVector<D>& k) {
    const auto& z = s.truncation();
    if (!z.contains(k)) throw Error(ErrorCode::Domain, "mode " + to_string(k) + " is not in Z");
    Amplitude<D> n{};
    if constexpr (D == 2) {
        for (const auto& l1 : z.members()) {
            const auto l2 = k - l1;
            if (!z.contains(l2)) continue;
            const double c = static_cast<double>(dot(k, perp(l2))) / static_cast<double>(l2.norm2());
            n += c * s.at(l1) * s.at(l2);
        }
    } else {
        auto vel = [](const WaveVector3& l, const CVec3& w) {
            return Complex(0.0, 1.0 / (2.0 * std::numbers::pi * static_cast<double>(l.norm2()))) * cross(l, w);
        };
        CVec3 acc{};
        for (const auto& l1 : z.members()) {
            const auto l2 = k - l1;
            if (!z.contains(l2)) continue;
            const CVec3 w1 = s.at(l1), w2 = s.at(l2);
            acc += dot(vel(l1, w1), k) * w2 - dot(w1, k) * vel(l2, w2);
        }
        n = Complex(0.0, -2.0 * std::numbers::pi) * acc;
    }
    Amplitude<D> out = n + (-dissipation_rate(p, k)) * s.at(k) + sample_forcing(f, k, t);
    if constexpr (D == 3) out = project_transverse(k, out);
    return out;
}

// ---------------------------------------------------------------------------
// Inward audit
// ---------------------------------------------------------------------------

struct InwardCheck {
    double margin = 0.0; ///< -sign * (d/dt of the boundary component, weighted frame)
    bool holds = false;
    std::optional<double> sufficient_margin; ///< (rhs - lhs) env x^scale, if a condition was given
};

/// Checks the vector field at a boundary point: the (part, sign) component of
/// w_{k_bar} equals sign * env(k_bar, t), all other constrained components lie
/// within the envelope. In 3D the part is a vector and its norm is on the
/// boundary; sign must be +1 and the margin is measured along that vector.
template <int D>
InwardCheck verify_inward(const Spectrum<D>& s, const Envelope& env, const PhysicalParams& p, const ForcingSpec& f,
                          double t, const WaveVector<D>& k_bar, Part part, int sign,
                          const InwardCondition* condition = nullptr) {
    if (sign != 1 && sign != -1) throw Error(ErrorCode::Precondition, "sign must be +1 or -1");
    const double kn = k_bar.norm();
    if (!(kn > env.K0)) throw Error(ErrorCode::Precondition, "boundary mode must satisfy |k| > K0");
    const double e = env.value(kn, t);
    const auto w = s.at(k_bar);
    double comp = 0.0;
    if constexpr (D == 2) {
        comp = part == Part::Re ? w.real() : w.imag();
        if (std::abs(comp - sign * e) > 1e-12 * e)
            throw Error(ErrorCode::Precondition, "designated component is not on the envelope");
    } else {
        if (sign != 1) throw Error(ErrorCode::Precondition, "3D boundary components are norms; sign must be +1");
        comp = part_magnitudes(w)[part == Part::Re ? 0 : 1];
        if (std::abs(comp - e) > 1e-12 * e) throw Error(ErrorCode::Precondition, "designated part is not on the envelope");
    }
    if (!membership(s, env, t).inside) throw Error(ErrorCode::Precondition, "state leaves the envelope");

    const auto dw = tendency_at(s, p, f, t, k_bar);
    const double rate = env.kind == EnvelopeKind::Gevrey ? env.gamma * kn : 0.0;
    double speed = 0.0;
    if constexpr (D == 2) {
        const double d = part == Part::Re ? dw.real() : dw.imag();
        speed = d + rate * comp;
    } else {
        double proj = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double wc = part == Part::Re ? w[i].real() : w[i].imag();
            const double dc = part == Part::Re ? dw[i].real() : dw[i].imag();
            proj += wc * dc;
        }
        speed = proj / comp + rate * comp;
    }
    InwardCheck out;
    out.margin = -static_cast<double>(sign) * speed;
    out.holds = out.margin > 0.0;
    if (condition) out.sufficient_margin = condition->margin(kn) * e * std::pow(kn, condition->scale_exponent);
    return out;
}

namespace detail {

/// Contribution of |w_k|^2 (for both k and -k) to the bounded quadratic
/// quantity: enstrophy in 2D, energy in 3D.
template <int D>
double budget_weight(const WaveVector<D>& k) {
    if constexpr (D == 2) return 2.0;
    else return 2.0 / (4.0 * std::numbers::pi * std::numbers::pi * static_cast<double>(k.norm2()));
}

} // namespace detail

/// Canonical modes usable as boundary points: |k| >= k_min, |k| > K0, and a
/// saturated mode costs at most half of the bound E* (enstrophy in 2D,
/// energy in 3D).
template <int D>
std::vector<WaveVector<D>> boundary_candidates(const TruncationSet<D>& z, const Envelope& env, double e_star,
                                               double k_min, double t = 0.0) {
    std::vector<WaveVector<D>> out;
    for (std::size_t i = 0; i < z.canonical_count(); ++i) {
        const auto& k = z.canonical(i);
        const double kn = k.norm();
        if (kn < k_min || !(kn > env.K0)) continue;
        const double e = env.value(kn, t);
        if (detail::budget_weight(k) * 2.0 * e * e <= 0.5 * e_star) out.push_back(k);
    }
    return out;
}

namespace detail {

inline CVec3 random_transverse_real(const WaveVector3& k, double bound, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CVec3 v{Complex(g(rng), 0.0), Complex(g(rng), 0.0), Complex(g(rng), 0.0)};
    v = project_transverse(k, v);
    const double n = magnitude(v);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double target = u(rng) * bound;
    return n > 0.0 ? (target / n) * v : v;
}

} // namespace detail

/// Random state within E* (enstrophy in 2D, energy in 3D) whose (part, sign) component at
/// k_bar sits exactly on the envelope; all other components are drawn inside
/// the envelope and rescaled into the remaining enstrophy budget.
template <int D>
Spectrum<D> boundary_state(TruncationPtr<D> z, const Envelope& env, double e_star, const WaveVector<D>& k_bar, Part part,
                           int sign, std::uint64_t seed, double t = 0.0) {
    Spectrum<D> s(z);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto m = z->index_of(k_bar);
    if (!m) throw Error(ErrorCode::Domain, "boundary mode is not in Z");
    const std::size_t bar = z->slot_of(*m).index;

    for (std::size_t i = 0; i < s.size(); ++i) {
        const double e = env.value(s.wave(i), t);
        if constexpr (D == 2) {
            s[i] = Complex(u(rng) * e, u(rng) * e);
        } else {
            const CVec3 re = detail::random_transverse_real(s.wave(i), e, rng);
            const CVec3 im = detail::random_transverse_real(s.wave(i), e, rng);
            s[i] = re + Complex(0.0, 1.0) * im;
        }
    }
    // boundary component
    const double e = env.value(s.wave(bar), t);
    const WaveVector<D> kc = s.wave(bar);
    const bool flip = !(kc == k_bar); // k_bar given as the conjugate representative
    if constexpr (D == 2) {
        Complex w = flip ? std::conj(s[bar]) : s[bar];
        if (part == Part::Re) w.real(sign * e);
        else w.imag(sign * e);
        s[bar] = flip ? std::conj(w) : w;
    } else {
        CVec3 w = flip ? conj(s[bar]) : s[bar];
        const auto parts = part_magnitudes(w);
        const double cur = parts[part == Part::Re ? 0 : 1];
        CVec3 dir{};
        if (cur > 0.0) {
            for (int j = 0; j < 3; ++j)
                dir[j] = Complex(part == Part::Re ? w[j].real() / cur : w[j].imag() / cur, 0.0);
        } else {
            dir = detail::transverse_direction(seed, kc);
        }
        for (int j = 0; j < 3; ++j) {
            if (part == Part::Re) w[j].real(e * dir[j].real());
            else w[j].imag(e * dir[j].real());
        }
        s[bar] = flip ? conj(w) : w;
    }
    // budget of E* left for the remaining modes
    const double own = detail::budget_weight(kc) * norm2(s[bar]);
    double rest = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (i != bar) rest += detail::budget_weight(s.wave(i)) * norm2(s[i]);
    const double budget = e_star - own;
    if (budget < 0.0) throw Error(ErrorCode::Precondition, "boundary mode alone exceeds E*");
    if (rest > budget) {
        const double scale = std::sqrt(budget / rest) * (1.0 - 1e-12);
        for (std::size_t i = 0; i < s.size(); ++i)
            if (i != bar) s[i] = scale * s[i];
    }
    return s;
}

// ---------------------------------------------------------------------------
// Conservation
// ---------------------------------------------------------------------------

struct ConservationRates {
    double d_enstrophy = 0.0; ///< Re sum conj(w_k) N_k (2D)
    double enstrophy_scale = 0.0; ///< sum |w_k| |N_k|
    double d_energy = 0.0; ///< 2D: Re sum conj(w_k) N_k / (4 pi^2 |k|^2); 3D: Re sum conj(u_k) . du_k
    double energy_scale = 0.0;
};

/// Rates of the quadratic invariants under the nonlinear term alone, summed
/// over all of Z.
template <int D>
ConservationRates conservation_rates(const GalerkinSystem<D>& sys, const Spectrum<D>& s) {
    Spectrum<D> n(s.truncation_ptr());
    sys.nonlinear(s, n);
    ConservationRates out;
    const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& k = s.wave(i);
        const double k2 = static_cast<double>(k.norm2());
        if constexpr (D == 2) {
            const double rate = (std::conj(s[i]) * n[i]).real();
            const double scale = std::abs(s[i]) * std::abs(n[i]);
            out.d_enstrophy += 2.0 * rate;
            out.enstrophy_scale += 2.0 * scale;
            out.d_energy += 2.0 * rate / (four_pi2 * k2);
            out.energy_scale += 2.0 * scale / (four_pi2 * k2);
        } else {
            const Complex f(0.0, 1.0 / (2.0 * std::numbers::pi * k2));
            const CVec3 u = f * cross(k, s[i]);
            const CVec3 du = f * cross(k, n[i]);
            double rate = 0.0;
            for (int j = 0; j < 3; ++j) rate += (std::conj(u[j]) * du[j]).real();
            out.d_energy += 2.0 * rate;
            out.energy_scale += 2.0 * magnitude(u) * magnitude(du);
            double wr = 0.0;
            for (int j = 0; j < 3; ++j) wr += (std::conj(s[i][j]) * n[i][j]).real();
            out.d_enstrophy += 2.0 * wr;
            out.enstrophy_scale += 2.0 * magnitude(s[i]) * magnitude(n[i]);
        }
    }
    return out;
}

template <int D>
ConservationRates conservation_rates(const Spectrum<D>& s) {
    GalerkinSystem<D> sys(s.truncation_ptr(), PhysicalParams{}, ForcingSpec{});
    return conservation_rates(sys, s);
}

// ---------------------------------------------------------------------------
// Random states
// ---------------------------------------------------------------------------

/// Components uniform in [-scale/|k|^r, scale/|k|^r] (3D: transversal).
template <int D>
Spectrum<D> random_state(TruncationPtr<D> z, std::uint64_t seed, double scale = 1.0, double r = 0.0) {
    Spectrum<D> s(std::move(z));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double e = scale / std::pow(s.wave(i).norm(), r);
        if constexpr (D == 2) {
            s[i] = Complex(u(rng) * e, u(rng) * e);
        } else {
            CVec3 v{Complex(u(rng), u(rng)), Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};
            s[i] = e * project_transverse(s.wave(i), v);
        }
    }
    return s;
}

} // namespace galerkin
