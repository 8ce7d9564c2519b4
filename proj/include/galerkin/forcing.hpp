#pragma once

// Deterministic forcing g = curl f given through its Fourier envelope:
// g_k(t) = envelope(|k|) * e^{i theta(k)} * m(t), |m| <= 1, with a seeded
// phase theta(-k) = -theta(k). In 3D the amplitude points along a seeded real
// unit vector orthogonal to k, so (k, g_k) = 0.

#include "galerkin/errors.hpp"
#include "galerkin/lattice.hpp"
#include "galerkin/state.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace galerkin {

enum class ForcingKind { Zero, PowerLaw, Exponential, TrigPoly };
enum class TemporalKind { Constant, Sinusoid };

inline const char* to_string(ForcingKind k) {
    switch (k) {
    case ForcingKind::Zero: return "zero";
    case ForcingKind::PowerLaw: return "power_law";
    case ForcingKind::Exponential: return "exponential";
    case ForcingKind::TrigPoly: return "trig_poly";
    }
    return "zero";
}

inline ForcingKind parse_forcing_kind(const std::string& s) {
    if (s == "zero") return ForcingKind::Zero;
    if (s == "power_law") return ForcingKind::PowerLaw;
    if (s == "exponential") return ForcingKind::Exponential;
    if (s == "trig_poly") return ForcingKind::TrigPoly;
    throw Error(ErrorCode::Configuration, "unknown forcing kind '" + s + "'");
}

struct ForcingSpec {
    ForcingKind kind = ForcingKind::Zero;
    double amplitude = 0.0; ///< G (also the per-mode amplitude of trig_poly)
    double r = 0.0;
    double epsilon = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double alpha_ref = 2.0;
    std::vector<std::vector<int>> band; ///< trig_poly modes; closed under k -> -k implicitly
    TemporalKind temporal = TemporalKind::Constant;
    double frequency = 0.0;
    std::uint64_t phase_seed = 0;

    /// Exponent r - alpha + epsilon of the algebraic factor.
    double decay_exponent() const { return r - alpha_ref + epsilon; }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <int D>
std::uint64_t hash_wave(std::uint64_t seed, const WaveVector<D>& k, std::uint64_t salt) {
    std::uint64_t h = splitmix64(seed ^ (salt * 0x632be59bd9b4e019ULL));
    for (int i = 0; i < D; ++i) h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(k[i])));
    return h;
}

inline double unit_interval(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

template <int D>
bool in_band(const ForcingSpec& spec, const WaveVector<D>& k) {
    for (const auto& b : spec.band) {
        if (b.size() != static_cast<std::size_t>(D)) continue;
        bool plus = true, minus = true;
        for (int i = 0; i < D; ++i) {
            plus = plus && b[static_cast<std::size_t>(i)] == k[i];
            minus = minus && b[static_cast<std::size_t>(i)] == -k[i];
        }
        if (plus || minus) return true;
    }
    return false;
}

inline Complex shrink_to(Complex v, double bound) {
    while (std::abs(v) > bound) v *= 1.0 - std::numeric_limits<double>::epsilon();
    return v;
}

inline CVec3 shrink_to(CVec3 v, double bound) {
    while (magnitude(v) > bound) v = (1.0 - std::numeric_limits<double>::epsilon()) * v;
    return v;
}

/// Seeded real unit vector orthogonal to k (k canonical).
inline CVec3 transverse_direction(std::uint64_t seed, const WaveVector3& k) {
    const double kn = k.norm();
    const double kh[3] = {k[0] / kn, k[1] / kn, k[2] / kn};
    int axis = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(kh[i]) < std::abs(kh[axis])) axis = i;
    double a[3] = {0, 0, 0};
    a[axis] = 1.0;
    double e1[3] = {kh[1] * a[2] - kh[2] * a[1], kh[2] * a[0] - kh[0] * a[2], kh[0] * a[1] - kh[1] * a[0]};
    double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (double& v : e1) v /= n1;
    double e2[3] = {kh[1] * e1[2] - kh[2] * e1[1], kh[2] * e1[0] - kh[0] * e1[2], kh[0] * e1[1] - kh[1] * e1[0]};
    const double phi = 2.0 * std::numbers::pi * unit_interval(hash_wave(seed, k, 2));
    const double c = std::cos(phi), s = std::sin(phi);
    CVec3 out;
    for (int i = 0; i < 3; ++i) out[i] = Complex(c * e1[i] + s * e2[i], 0.0);
    // exact transversality up to the projection's roundoff
    return project_transverse(k, out);
}

} // namespace detail

/// sup_t |g_k(t)| prescribed by the spec.
template <int D>
double forcing_envelope(const ForcingSpec& spec, const WaveVector<D>& k) {
    const double kn = k.norm();
    switch (spec.kind) {
    case ForcingKind::Zero: return 0.0;
    case ForcingKind::PowerLaw: return spec.amplitude / std::pow(kn, spec.decay_exponent());
    case ForcingKind::Exponential:
        return spec.amplitude * std::exp(-spec.gamma * std::pow(kn, 1.0 + spec.delta)) /
               std::pow(kn, spec.decay_exponent());
    case ForcingKind::TrigPoly: return detail::in_band(spec, k) ? spec.amplitude : 0.0;
    }
    return 0.0;
}

inline double forcing_modulation(const ForcingSpec& spec, double t) {
    if (spec.temporal == TemporalKind::Sinusoid) return std::cos(2.0 * std::numbers::pi * spec.frequency * t);
    return 1.0;
}

/// Time-independent factor envelope * e^{i theta} (* direction in 3D) for a
/// canonical k.
template <int D>
Amplitude<D> forcing_base(const ForcingSpec& spec, const WaveVector<D>& k) {
    const double env = forcing_envelope(spec, k);
    if (env == 0.0) return Amplitude<D>{};
    const double theta = 2.0 * std::numbers::pi * detail::unit_interval(detail::hash_wave(spec.phase_seed, k, 1));
    const Complex phasor = std::polar(env, theta);
    if constexpr (D == 2) {
        return detail::shrink_to(phasor, env);
    } else {
        return detail::shrink_to(phasor * detail::transverse_direction(spec.phase_seed, k), env);
    }
}

template <int D>
Amplitude<D> modulate(const Amplitude<D>& base, double env, double m) {
    if constexpr (D == 2) {
        return detail::shrink_to(m * base, env);
    } else {
        return detail::shrink_to(m * base, env);
    }
}

/// g_k(t); deterministic in (spec, k, t) and g_{-k} = conj(g_k) exactly.
template <int D>
Amplitude<D> sample_forcing(const ForcingSpec& spec, const WaveVector<D>& k, double t) {
    if (k.is_zero()) throw Error(ErrorCode::Domain, "forcing is undefined at k = 0");
    const WaveVector<D> kc = k.is_canonical() ? k : -k;
    const double env = forcing_envelope(spec, kc);
    if (env == 0.0) return Amplitude<D>{};
    const auto v = modulate<D>(forcing_base(spec, kc), env, forcing_modulation(spec, t));
    return k.is_canonical() ? v : conj(v);
}

/// Forcing evaluated on the canonical slots of a truncation.
template <int D>
class ForcingField {
public:
    ForcingField(const ForcingSpec& spec, const TruncationSet<D>& z) : spec_(spec) {
        env_.resize(z.canonical_count());
        base_.resize(z.canonical_count());
        for (std::size_t i = 0; i < z.canonical_count(); ++i) {
            env_[i] = forcing_envelope(spec, z.canonical(i));
            base_[i] = env_[i] == 0.0 ? Amplitude<D>{} : forcing_base(spec, z.canonical(i));
            active_ = active_ || env_[i] != 0.0;
        }
    }

    bool active() const { return active_; }
    const ForcingSpec& spec() const { return spec_; }

    Amplitude<D> at(std::size_t slot, double t) const {
        if (env_[slot] == 0.0) return Amplitude<D>{};
        return modulate<D>(base_[slot], env_[slot], forcing_modulation(spec_, t));
    }

private:
    ForcingSpec spec_;
    std::vector<double> env_;
    std::vector<Amplitude<D>> base_;
    bool active_ = false;
};

/// Upper bound of sup_t (sum_{k in Z} |g_k(t)|^2)^{1/2}. With `whole_lattice`
/// the sum runs over all of Z^d instead (enumeration to a fixed radius plus a
/// lattice tail bound), so the value does not depend on Z at all.
template <int D>
double g_star(const ForcingSpec& spec, const TruncationSet<D>& z, bool whole_lattice = false) {
    if (!whole_lattice) {
        double sum = 0.0;
        for (const auto& k : z.members()) {
            const double e = forcing_envelope(spec, k);
            sum += e * e;
        }
        return std::sqrt(sum);
    }

    switch (spec.kind) {
    case ForcingKind::Zero: return 0.0;
    case ForcingKind::TrigPoly: {
        double full = 0.0;
        for (const auto& b : spec.band) {
            if (b.size() != static_cast<std::size_t>(D)) continue;
            WaveVector<D> k;
            for (int i = 0; i < D; ++i) k[i] = b[static_cast<std::size_t>(i)];
            if (k.is_zero()) continue;
            // count each +-pair once even if both members are listed
            bool dup = false;
            for (const auto& c : spec.band) {
                if (&c == &b) break;
                WaveVector<D> kk;
                for (int i = 0; i < D; ++i) kk[i] = c[static_cast<std::size_t>(i)];
                if (kk == k || kk == -k) dup = true;
            }
            if (!dup) full += 2.0 * spec.amplitude * spec.amplitude;
        }
        return std::sqrt(full);
    }
    case ForcingKind::PowerLaw: {
        const double q2 = 2.0 * spec.decay_exponent();
        if (!(q2 > D))
            throw Error(ErrorCode::Infeasible, "g* needs 2(r - alpha + epsilon) > d for a whole-lattice bound");
        return spec.amplitude * std::sqrt(lattice_sum(D, q2, LatticeRegion::all()));
    }
    case ForcingKind::Exponential: {
        const double q2 = 2.0 * spec.decay_exponent();
        if (!(spec.gamma > 0.0) && !(q2 > D))
            throw Error(ErrorCode::Infeasible, "g* needs gamma > 0 or 2(r - alpha + epsilon) > d");
        return spec.amplitude * std::sqrt(weighted_lattice_sum(D, q2, 2.0 * spec.gamma, 1.0 + spec.delta));
    }
    }
    return 0.0;
}

} // namespace galerkin
