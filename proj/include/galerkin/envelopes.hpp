#pragma once

// Decay envelopes and trapping-set diagnostics.
//
//   algebraic    D / |k|^r
//   exponential  D e^{-gamma |k|} / |k|^r
//   gevrey       D e^{-rate t |k|} / |k|^r   (the weighted variable
//                v_k = w_k e^{rate t |k|} stays under D / |k|^r)
//
// The trapping sets bound Re and Im parts separately for |k| > K0; modes with
// |k| <= K0 are exempt.

#include "galerkin/errors.hpp"
#include "galerkin/forcing.hpp"
#include "galerkin/lattice.hpp"
#include "galerkin/state.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace galerkin {

enum class EnvelopeKind { Algebraic, Exponential, Gevrey };

inline const char* to_string(EnvelopeKind k) {
    switch (k) {
    case EnvelopeKind::Algebraic: return "algebraic";
    case EnvelopeKind::Exponential: return "exponential";
    case EnvelopeKind::Gevrey: return "gevrey";
    }
    return "algebraic";
}

inline EnvelopeKind parse_envelope_kind(const std::string& s) {
    if (s == "algebraic") return EnvelopeKind::Algebraic;
    if (s == "exponential") return EnvelopeKind::Exponential;
    if (s == "gevrey") return EnvelopeKind::Gevrey;
    throw Error(ErrorCode::Configuration, "unknown envelope kind '" + s + "'");
}

inline constexpr double kMembershipSlack = 1e-9;
inline constexpr double kWeightExponentLimit = 700.0;

struct Envelope {
    EnvelopeKind kind = EnvelopeKind::Algebraic;
    double D = 1.0;
    double r = 1.0;
    double gamma = 0.0; ///< exponential rate, or the growth rate of the gevrey weight
    double K0 = 0.0;

    static Envelope algebraic(double D, double r, double K0 = 0.0) { return {EnvelopeKind::Algebraic, D, r, 0.0, K0}; }
    static Envelope exponential(double D, double r, double gamma, double K0 = 0.0) {
        return {EnvelopeKind::Exponential, D, r, gamma, K0};
    }
    static Envelope gevrey(double D, double r, double rate, double K0 = 0.0) {
        return {EnvelopeKind::Gevrey, D, r, rate, K0};
    }

    /// Exponent e with env = D e^{-e} / |k|^r.
    double decay(double kn, double t) const {
        switch (kind) {
        case EnvelopeKind::Algebraic: return 0.0;
        case EnvelopeKind::Exponential: return gamma * kn;
        case EnvelopeKind::Gevrey: return gamma * t * kn;
        }
        return 0.0;
    }

    double value(double kn, double t = 0.0) const { return D * std::exp(-decay(kn, t)) / std::pow(kn, r); }

    template <int Dim>
    double value(const WaveVector<Dim>& k, double t = 0.0) const {
        return value(k.norm(), t);
    }

    /// |x| / env(k, t); switches to log form once the envelope underflows.
    double ratio(double x, double kn, double t = 0.0) const {
        x = std::abs(x);
        if (x == 0.0) return 0.0;
        const double v = value(kn, t);
        if (v > 1e-280) return x / v;
        return std::exp(std::log(x) + decay(kn, t) + r * std::log(kn) - std::log(D));
    }
};

/// v_k = w_k e^{rate t |k|}; negative rates undo the transform.
template <int D>
Spectrum<D> weighted_transform(const Spectrum<D>& s, double rate, double t = 1.0) {
    Spectrum<D> out(s.truncation_ptr());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double e = rate * t * s.wave(i).norm();
        if (e > kWeightExponentLimit)
            throw Error(ErrorCode::Overflow, "weight exponent " + std::to_string(e) + " exceeds " +
                                                 std::to_string(kWeightExponentLimit));
        out[i] = std::exp(e) * s[i];
    }
    return out;
}

enum class Part { Re, Im };

inline const char* to_string(Part p) { return p == Part::Re ? "re" : "im"; }

template <int D>
struct Membership {
    bool inside = true;
    bool grazing = false;         ///< some ratio in (1, 1 + slack]
    std::optional<WaveVector<D>> worst_k;
    double worst_ratio = 0.0;     ///< max over |k| > K0 of |part| / env
    Part worst_part = Part::Re;
    double modulus_ratio = 0.0;   ///< max of |w_k| / env, secondary diagnostic
};

/// Componentwise check of |Re w_k|, |Im w_k| <= env(k, t) for |k| > K0. Ties
/// keep the lexicographically first canonical mode.
template <int D>
Membership<D> membership(const Spectrum<D>& s, const Envelope& env, double t = 0.0, double slack = kMembershipSlack) {
    Membership<D> m;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& k = s.wave(i);
        const double kn = k.norm();
        if (kn <= env.K0) continue;
        const auto parts = part_magnitudes(s[i]);
        for (int j = 0; j < 2; ++j) {
            const double q = env.ratio(parts[static_cast<std::size_t>(j)], kn, t);
            if (!m.worst_k || q > m.worst_ratio) {
                m.worst_ratio = q;
                m.worst_k = k;
                m.worst_part = j == 0 ? Part::Re : Part::Im;
            }
        }
        m.modulus_ratio = std::max(m.modulus_ratio, env.ratio(magnitude(s[i]), kn, t));
    }
    m.inside = m.worst_ratio <= 1.0 + slack;
    m.grazing = m.worst_ratio > 1.0 && m.inside;
    return m;
}

struct RatioRow {
    double t;
    double ratio;
};

/// (t, sup ratio) rows from observed memberships, in time order.
template <int D>
std::vector<RatioRow> envelope_ratio_series(const std::vector<std::pair<double, Membership<D>>>& observed) {
    std::vector<RatioRow> rows;
    rows.reserve(observed.size());
    for (const auto& [t, m] : observed) {
        if (!rows.empty() && t < rows.back().t) throw Error(ErrorCode::Domain, "observations out of time order");
        rows.push_back({t, m.worst_ratio});
    }
    return rows;
}

inline constexpr double kFitClip = 1e-300;

/// inf over |k| >= k_min of -ln(|w_k| |k|^r / D) / |k|; amplitudes below
/// 1e-300 are clipped to 1e-300.
template <int D>
double fitted_gamma(const Spectrum<D>& s, double r, double amplitude, double k_min) {
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double kn = s.wave(i).norm();
        if (kn < k_min) continue;
        any = true;
        const double a = std::max(magnitude(s[i]), kFitClip);
        const double g = -(std::log(a) + r * std::log(kn) - std::log(amplitude)) / kn;
        best = std::min(best, g);
    }
    if (!any) throw Error(ErrorCode::UndefinedEstimate, "no modes with |k| >= " + std::to_string(k_min));
    return best;
}

/// State with |w_k| = env(k, t) for every k in Z (|Re|, |Im| <= env) and a
/// seeded phase; in 3D the amplitude is along a seeded real direction
/// orthogonal to k.
template <int D>
Spectrum<D> saturated_state(TruncationPtr<D> z, const Envelope& env, std::uint64_t seed, double t = 0.0) {
    Spectrum<D> s(std::move(z));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& k = s.wave(i);
        const double a = env.D == 0.0 ? 0.0 : env.value(k, t);
        const Complex c = std::polar(a, phase(rng));
        if constexpr (D == 2) {
            s[i] = c;
        } else {
            s[i] = c * detail::transverse_direction(seed, k);
        }
    }
    return s;
}

} // namespace galerkin
