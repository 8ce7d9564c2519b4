#pragma once

// Computable constants behind the trapping arguments: enstrophy and energy
// bounds, the convolution-lemma bound, envelope amplitudes D' and the
// critical wavenumbers for each inward-pointing inequality.
//
// Every K_crit is the smallest integer K >= 2 for which the inequality holds
// at K and on a fine geometric grid up to 64 K.

#include "galerkin/errors.hpp"
#include "galerkin/lattice.hpp"
#include "galerkin/snapshot.hpp"
#include "galerkin/state.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace galerkin {

inline constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Quadratic quantities
// ---------------------------------------------------------------------------

/// sum over all of Z (both k and -k) of |w_k|^2.
template <int D>
double enstrophy(const Spectrum<D>& s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) acc += norm2(s[i]);
    return 2.0 * acc;
}

/// sum over all of Z of |u_k|^2, with |u_k| = |w_k| / (2 pi |k|).
template <int D>
double energy(const Spectrum<D>& s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        acc += norm2(s[i]) / (4.0 * kPi * kPi * static_cast<double>(s.wave(i).norm2()));
    return 2.0 * acc;
}

/// Uniform bound from dE/dt <= -8 pi^2 nu E + 2 g* sqrt(E) (|k| >= 1).
inline double enstrophy_bound(double e0, double g_star, double nu) {
    if (e0 < 0 || g_star < 0 || !(nu > 0)) throw Error(ErrorCode::Domain, "enstrophy_bound needs E0, g* >= 0, nu > 0");
    const double q = g_star / (4.0 * kPi * kPi * nu);
    return std::max(e0, q * q);
}

inline double energy_bound_3d(double e0, double g_star, double nu) { return enstrophy_bound(e0, g_star, nu); }

// ---------------------------------------------------------------------------
// Convolution lemma
// ---------------------------------------------------------------------------

/// Constants of the bound
///   sum_{l1+l2=k} |a_{l1}| |b_{l2}| |k|/|l2|
///     <= const (2^r |k| + 2^{r+1} (6|k|+1)^{d/2} + |k|^{d-1-r}/2) C^2/|k|^r
/// for |a_l|, |b_l| <= C/|l|^r:
///   c1 = sum |l|^{-(r+1)}                      (|l2| <= |k|/2)
///   c2 = (sum |l|^{-2r})^{1/2}                 (|k|/2 < |l2| <= 2|k|)
///   c3 = T_{2r+1} 2^{d-r-1}, the far shell being <= c3 |k|^{d-r} C^2/|k|^r
/// The far shell is absorbed into the first term (d - r < 1), so
/// const = max(c1 + c3 / 2^r, c2).
struct Lemma1Constants {
    int d = 2;
    double r = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double value = 0.0;
};

inline Lemma1Constants lemma1_constants(int d, double r) {
    if (!(r > d - 1)) throw Error(ErrorCode::DivergentSum, "convolution bound needs r > d - 1");
    static std::mutex mutex;
    static std::map<std::pair<int, double>, Lemma1Constants> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find({d, r});
        if (it != cache.end()) return it->second;
    }
    Lemma1Constants c;
    c.d = d;
    c.r = r;
    c.c1 = lattice_sum(d, r + 1.0, LatticeRegion::all());
    c.c2 = detail::round_up(std::sqrt(lattice_sum(d, 2.0 * r, LatticeRegion::all())));
    c.c3 = detail::round_up(tail_scaling_constant(d, 2.0 * r + 1.0) * std::pow(2.0, d - r - 1.0));
    c.value = detail::round_up(std::max(c.c1 + c.c3 / std::pow(2.0, r), c.c2));
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(std::make_pair(d, r), c);
    return c;
}

/// Bracket (2^r x + 2^{r+1} (6x+1)^{d/2} + x^{d-1-r}/2).
inline double lemma1_bracket(int d, double r, double x) {
    return std::pow(2.0, r) * x + std::pow(2.0, r + 1.0) * std::pow(6.0 * x + 1.0, 0.5 * d) +
           0.5 * std::pow(x, d - 1.0 - r);
}

template <int D>
double lemma1_bound(double C, double r, const WaveVector<D>& k) {
    if (k.is_zero()) throw Error(ErrorCode::Domain, "lemma bound needs k != 0");
    const auto c = lemma1_constants(D, r);
    const double x = k.norm();
    return c.value * lemma1_bracket(D, r, x) * C * C / std::pow(x, r);
}

// ---------------------------------------------------------------------------
// Envelope amplitudes
// ---------------------------------------------------------------------------

/// D' = max(G, sqrt(E*) K0^r): the low band |k| <= K0 (|w_k| <= sqrt(E*))
/// then sits under D'/|k|^r, and D' >= G.
inline double d_prime_algebraic(double K0, double e_star, double r, double G) {
    if (!(K0 >= 1.0)) throw Error(ErrorCode::Domain, "K0 must be at least 1");
    return std::max(G, std::sqrt(e_star) * std::pow(K0, r));
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct NamedConstant {
    std::string name;
    double value;
    std::string definition;
};

struct EstimateReport {
    std::string quantity;
    double value = 0.0;
    std::string inequality_id;
    std::vector<std::pair<std::string, double>> inputs;
    std::vector<NamedConstant> constants;
};

namespace detail {

inline std::string json_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        default: out += ch;
        }
    }
    return out;
}

inline std::string json_number(double x) {
    if (std::isfinite(x)) return format_double(x);
    return x > 0 ? "\"inf\"" : (x < 0 ? "\"-inf\"" : "\"nan\"");
}

} // namespace detail

inline std::string to_json(const EstimateReport& r) {
    std::string out = "{\"quantity\":\"" + detail::json_escape(r.quantity) + "\",\"value\":" + detail::json_number(r.value) +
                      ",\"inequality_id\":\"" + detail::json_escape(r.inequality_id) + "\",\"inputs\":{";
    for (std::size_t i = 0; i < r.inputs.size(); ++i) {
        if (i) out += ",";
        out += "\"" + detail::json_escape(r.inputs[i].first) + "\":" + detail::json_number(r.inputs[i].second);
    }
    out += "},\"constants\":[";
    for (std::size_t i = 0; i < r.constants.size(); ++i) {
        if (i) out += ",";
        const auto& c = r.constants[i];
        out += "{\"name\":\"" + detail::json_escape(c.name) + "\",\"value\":" + detail::json_number(c.value) +
               ",\"definition\":\"" + detail::json_escape(c.definition) + "\"}";
    }
    return out + "]}";
}

inline std::string to_json(const std::vector<EstimateReport>& reports) {
    std::string out = "[";
    for (std::size_t i = 0; i < reports.size(); ++i) out += (i ? ",\n" : "\n") + to_json(reports[i]);
    return out + "\n]\n";
}

// ---------------------------------------------------------------------------
// Inward-pointing inequalities and the K_crit search
// ---------------------------------------------------------------------------

/// An inequality lhs(x) < rhs(x) in x = |k_bar|. `scale_exponent` converts
/// (rhs - lhs) into a lower bound of the inward speed of the boundary
/// component: speed >= (rhs - lhs) env x^{scale_exponent}.
struct InwardCondition {
    std::string id;
    std::function<double(double)> lhs;
    std::function<double(double)> rhs;
    double scale_exponent = 0.0;
    double min_k = 2.0; ///< the search never returns less than this

    double margin(double x) const { return rhs(x) - lhs(x); }
    bool holds(double x) const { return lhs(x) < rhs(x); }
};

inline constexpr double kKcritGridRatio = 1.001;
inline constexpr double kKcritGridSpan = 64.0;
inline constexpr double kKcritLimit = 1e8;

/// Smallest integer K >= max(2, min_k) with the condition true at K and on
/// the geometric grid over [K, 64 K]. Runs of failing integers are crossed
/// by galloping and bisection, so the K returned always has K - 1 failing
/// (or is the lower limit).
inline double kcrit_search(const InwardCondition& c) {
    double K = std::max(2.0, std::ceil(c.min_k));
    while (K <= kKcritLimit) {
        if (!c.holds(K)) {
            double lo = K, step = 1.0;
            double hi = K + step;
            while (!c.holds(hi)) {
                lo = hi;
                step *= 2.0;
                hi = lo + step;
                if (lo > kKcritLimit) break;
            }
            if (lo > kKcritLimit) break;
            while (hi - lo > 1.0) {
                const double mid = std::floor(0.5 * (lo + hi));
                if (c.holds(mid)) hi = mid;
                else lo = mid;
            }
            K = hi;
        }
        double bad = -1.0;
        for (double x = K * kKcritGridRatio; x <= kKcritGridSpan * K; x *= kKcritGridRatio) {
            if (!c.holds(x)) bad = x;
        }
        if (bad < 0.0) return K;
        K = std::floor(bad) + 1.0;
    }
    throw Error(ErrorCode::Infeasible, "no critical wavenumber below " + std::to_string(kKcritLimit) + " for " + c.id);
}

struct KcritResult {
    double K = 2.0;
    InwardCondition condition;
    EstimateReport report;
};

// 2D algebraic envelope ------------------------------------------------------

/// B(x) with |N_k| <= B(|k|) D'/|k|^r on the trapping set (enstrophy <= E*,
/// |w_l| <= sqrt(2) D'/|l|^r):
///   B = 2^{r+1} c_H sqrt(E*) x sqrt(ln x) + 2^{r+2} sqrt(E*) (6x+1) + 2 sqrt(E*) c3' x
/// with c_H^2 = sup H(x/2)/ln x and c3' = T_{2r+2}^{1/2} 2^{-r}.
struct Thm1Constants {
    double c_h = 0.0;
    double c3p = 0.0;
    double cbar = 0.0; ///< 2 pi max_{x>=2} B(x) / (2^{r+2} E* x sqrt(ln x))
};

inline double thm1_majorant(double e_star, double r, double c_h, double c3p, double x) {
    const double s = std::sqrt(e_star);
    return std::pow(2.0, r + 1.0) * c_h * s * x * std::sqrt(std::log(x)) +
           std::pow(2.0, r + 2.0) * s * (6.0 * x + 1.0) + 2.0 * s * c3p * x;
}

inline Thm1Constants thm1_constants(double e_star, double r) {
    Thm1Constants c;
    c.c_h = detail::round_up(std::sqrt(log_shell_constant_sq()));
    c.c3p = detail::round_up(std::sqrt(tail_scaling_constant(2, 2.0 * r + 2.0)) * std::pow(2.0, -r));
    if (e_star == 0.0) return c;
    double best = 0.0;
    // each term of B / (x sqrt(ln x)) decreases for x >= 2; the grid only guards rounding
    for (double x = 2.0; x < 1e12; x *= 1.01) {
        const double v = thm1_majorant(e_star, r, c.c_h, c.c3p, x) / (x * std::sqrt(std::log(x)));
        best = std::max(best, v);
    }
    c.cbar = detail::round_up(2.0 * kPi * best / (std::pow(2.0, r + 2.0) * e_star));
    return c;
}

/// [2^{r+2} E* cbar x sqrt(ln x) / x^alpha + x^{-eps}] < factor, factor
/// defaulting to 4 pi nu.
inline KcritResult kcrit_2d_algebraic(double e_star, double r, double alpha, double eps, double nu,
                                      double factor = -1.0) {
    if (!(alpha > 1.0)) throw Error(ErrorCode::Infeasible, "needs alpha > 1");
    if (!(eps > 0.0)) throw Error(ErrorCode::Infeasible, "needs epsilon > 0");
    if (!(r > 1.0)) throw Error(ErrorCode::Infeasible, "needs r > 1");
    if (factor <= 0.0) factor = 4.0 * kPi * nu;
    const auto c = thm1_constants(e_star, r);
    const double lead = std::pow(2.0, r + 2.0) * e_star * c.cbar;
    KcritResult out;
    out.condition.id = "eq8_2d_algebraic";
    out.condition.lhs = [=](double x) { return lead * x * std::sqrt(std::log(x)) / std::pow(x, alpha) + std::pow(x, -eps); };
    out.condition.rhs = [=](double) { return factor; };
    out.condition.scale_exponent = alpha;
    out.K = kcrit_search(out.condition);
    out.report.quantity = "K_crit";
    out.report.value = out.K;
    out.report.inequality_id = out.condition.id;
    out.report.inputs = {{"E_star", e_star}, {"r", r}, {"alpha", alpha}, {"epsilon", eps}, {"nu", nu}, {"factor", factor}};
    out.report.constants = {
        {"c_H", c.c_h, "sqrt(sup_{x>=2} sum_{0<|l|<=x/2} |l|^-2 / ln x), 2D enumeration to |l|<=400 plus annulus bound"},
        {"c3_prime", c.c3p, "sqrt(T_{2r+2}) 2^-r, T_p = sup_{R>=1} R^{p-2} sum_{|l|>R} |l|^-p"},
        {"cbar", c.cbar, "2 pi max_{x>=2} B(x) / (2^{r+2} E* x sqrt(ln x))"},
    };
    return out;
}

// 2D exponential envelope ----------------------------------------------------

/// gamma2' = min(gamma K0^delta, ln(D2'/D_bar)/K0, gamma_initial): the forcing
/// weight ratio stays <= 1 for |k| >= K0, the low band fits under D2', and
/// the initial data start inside.
inline double gamma2_prime(double K0, double d_bar, double d2_prime, double gamma, double delta,
                           double gamma_initial = std::numeric_limits<double>::infinity()) {
    if (!(K0 >= 1.0)) throw Error(ErrorCode::Domain, "K0 must be at least 1");
    const double g = std::min({gamma * std::pow(K0, delta), std::log(d2_prime / d_bar) / K0, gamma_initial});
    if (!(g > 0.0)) throw Error(ErrorCode::Infeasible, "no positive gamma2' (need D2' > D_bar)");
    return g;
}

/// 2 pi c (2^{r+1} x + 2^{r+2}(6x+1) + 2 x^{1-r}) D2' + (G/D2') x^{alpha-eps} < 4 pi^2 nu x^alpha
/// with the forcing weight ratio bounded by 1.
inline KcritResult kcrit_2d_exponential(double d2_prime, double G, double gamma, double delta, double gamma2p,
                                        double r, double alpha, double eps, double nu) {
    if (d2_prime < G) throw Error(ErrorCode::Precondition, "D2' must be at least G");
    if (!(alpha > 1.0)) throw Error(ErrorCode::Infeasible, "needs alpha > 1");
    const auto lc = lemma1_constants(2, r);
    const double c = lc.value;
    KcritResult out;
    out.condition.id = "inward5_2d_exponential";
    out.condition.lhs = [=](double x) {
        return 2.0 * kPi * c *
                   (std::pow(2.0, r + 1.0) * x + std::pow(2.0, r + 2.0) * (6.0 * x + 1.0) + 2.0 * std::pow(x, 1.0 - r)) *
                   d2_prime +
               (G / d2_prime) * std::pow(x, alpha - eps);
    };
    out.condition.rhs = [=](double x) { return 4.0 * kPi * kPi * nu * std::pow(x, alpha); };
    out.condition.scale_exponent = 0.0;
    out.K = kcrit_search(out.condition);
    out.report.quantity = "K_crit";
    out.report.value = out.K;
    out.report.inequality_id = out.condition.id;
    out.report.inputs = {{"D2_prime", d2_prime}, {"G", G},   {"gamma", gamma}, {"delta", delta}, {"gamma2_prime", gamma2p},
                         {"r", r},               {"alpha", alpha}, {"epsilon", eps}, {"nu", nu}};
    out.report.constants = {
        {"lemma_c1", lc.c1, "sum_{l in Z^2, l!=0} |l|^-(r+1)"},
        {"lemma_c2", lc.c2, "(sum_{l in Z^2, l!=0} |l|^-2r)^(1/2)"},
        {"lemma_c3", lc.c3, "T_{2r+1} 2^{1-r}"},
        {"lemma_const", c, "max(c1 + c3 2^-r, c2)"},
    };
    return out;
}

// 2D time-growing (Gevrey) weight --------------------------------------------

/// gamma3 = min(gamma0, gamma K0^delta / t0, ln(D3'/D1')/(t0 K0)).
inline double gamma3(double K0, double t0, double gamma, double delta, double gamma0, double d_ratio = 2.0) {
    if (!(t0 > 0.0)) throw Error(ErrorCode::Domain, "t0 must be positive");
    if (!(K0 >= 1.0)) throw Error(ErrorCode::Domain, "K0 must be at least 1");
    const double g = std::min({gamma0, gamma * std::pow(K0, delta) / t0, std::log(d_ratio) / (t0 * K0)});
    if (!(g > 0.0)) throw Error(ErrorCode::Infeasible, "no positive gamma3");
    return g;
}

/// 4 pi^2 nu > gamma0 x^{1-alpha} + c D3' [2^{r+1} x + 2^{r+2} 7x + x^{1-r}] / x^alpha + (G/D3') x^{-eps}
inline KcritResult kcrit_2d_gevrey(double d3_prime, double G, double gamma0, double r, double alpha, double nu,
                                   double eps) {
    if (!(alpha > 1.0)) throw Error(ErrorCode::Infeasible, "needs alpha > 1");
    if (!(r > 2.0)) throw Error(ErrorCode::Infeasible, "needs r > 2");
    if (!(d3_prime > 0.0)) throw Error(ErrorCode::Precondition, "D3' must be positive");
    const auto lc = lemma1_constants(2, r);
    const double c = lc.value;
    KcritResult out;
    out.condition.id = "T3in2_gevrey";
    out.condition.lhs = [=](double x) {
        const double xa = std::pow(x, alpha);
        return gamma0 * x / xa +
               c * d3_prime * (std::pow(2.0, r + 1.0) * x + std::pow(2.0, r + 2.0) * 7.0 * x + std::pow(x, 1.0 - r)) / xa +
               (G / d3_prime) * std::pow(x, -eps);
    };
    out.condition.rhs = [=](double) { return 4.0 * kPi * kPi * nu; };
    out.condition.scale_exponent = alpha;
    out.K = kcrit_search(out.condition);
    out.report.quantity = "K_crit";
    out.report.value = out.K;
    out.report.inequality_id = out.condition.id;
    out.report.inputs = {{"D3_prime", d3_prime}, {"G", G}, {"gamma0", gamma0}, {"r", r}, {"alpha", alpha}, {"nu", nu},
                         {"epsilon", eps}};
    out.report.constants = {
        {"lemma_const", c, "max(c1 + c3 2^-r, c2) for d = 2"},
    };
    return out;
}

// 3D ---------------------------------------------------------------------------

/// Constant of |N_k| <= 8 pi c4 sqrt(E*) |k|^{5/2} D'/|k|^r on the 3D algebraic
/// trapping set with energy <= E*:
///   c4 = sqrt(2) [2^r sqrt(3.375) + 3 2^{r+1} 6.5^{3/2} + sqrt(T_{2r})] / 2.
inline double thm4_constant(double r) {
    const double t = tail_scaling_constant(3, 2.0 * r);
    return detail::round_up(std::sqrt(2.0) *
                            (std::pow(2.0, r) * std::sqrt(3.375) + 3.0 * std::pow(2.0, r + 1.0) * std::pow(6.5, 1.5) +
                             std::sqrt(t)) /
                            2.0);
}

enum class Variant3D { Thm4, Thm7 };

struct Kcrit3DOptions {
    Variant3D variant = Variant3D::Thm4;
    double gamma7 = 0.0;   ///< weight growth rate (thm7); 0 gives the static-weight case
    double d7_prime = 0.0; ///< envelope amplitude (thm7)
    double min_k = 2.0;    ///< e.g. one past the forcing band
};

inline KcritResult kcrit_3d(double e_star, double r, double alpha, double nu, const Kcrit3DOptions& opt) {
    KcritResult out;
    out.condition.min_k = opt.min_k;
    if (opt.variant == Variant3D::Thm4) {
        if (!(alpha > 2.5)) throw Error(ErrorCode::Infeasible, "thm4_3d condition needs alpha > 2.5");
        const double c4 = thm4_constant(r);
        const double s = std::sqrt(e_star);
        out.condition.id = "thm4_3d";
        out.condition.lhs = [=](double x) { return 8.0 * kPi * c4 * s * std::pow(x, 2.5); };
        out.condition.rhs = [=](double x) { return 4.0 * kPi * kPi * nu * std::pow(x, alpha); };
        out.condition.scale_exponent = 0.0;
        out.report.inputs = {{"E_star", e_star}, {"r", r}, {"alpha", alpha}, {"nu", nu}, {"min_k", opt.min_k}};
        out.report.constants = {{"thm4_const", c4, "sqrt(2)(2^r sqrt(3.375) + 3 2^{r+1} 6.5^{3/2} + sqrt(T_{2r}))/2, d = 3"}};
    } else {
        if (!(alpha > 1.5)) throw Error(ErrorCode::Infeasible, "thm7_3d condition needs alpha > 1.5");
        if (!(r > 2.0)) throw Error(ErrorCode::Infeasible, "thm7_3d condition needs r > 2");
        const auto lc = lemma1_constants(3, r);
        const double c = lc.value;
        const double d7 = opt.d7_prime;
        const double g7 = opt.gamma7;
        out.condition.id = "thm7_3d";
        out.condition.lhs = [=](double x) { return 8.0 * kPi * c * lemma1_bracket(3, r, x) * d7; };
        out.condition.rhs = [=](double x) { return 4.0 * kPi * kPi * nu * std::pow(x, alpha) - g7 * x; };
        out.condition.scale_exponent = 0.0;
        out.report.inputs = {{"E_star", e_star}, {"r", r},         {"alpha", alpha},     {"nu", nu},
                             {"gamma7", g7},     {"D7_prime", d7}, {"min_k", opt.min_k}};
        out.report.constants = {
            {"lemma_c1", lc.c1, "sum_{l in Z^3, l!=0} |l|^-(r+1)"},
            {"lemma_c2", lc.c2, "(sum_{l in Z^3, l!=0} |l|^-2r)^(1/2)"},
            {"lemma_c3", lc.c3, "T_{2r+1} 2^{2-r}"},
            {"lemma_const", c, "max(c1 + c3 2^-r, c2)"},
        };
    }
    out.K = kcrit_search(out.condition);
    out.report.quantity = "K_crit";
    out.report.value = out.K;
    out.report.inequality_id = out.condition.id;
    return out;
}

/// Amplitude of the 3D algebraic trapping set: the low band satisfies
/// |w_k| = 2 pi |k| |u_k| <= 2 pi K0 sqrt(E*), so D4' = max(D4, 2 pi K0^{r+1} sqrt(E*)).
inline double d_prime_3d_algebraic(double K0, double e_star, double r, double d4) {
    if (!(K0 >= 1.0)) throw Error(ErrorCode::Domain, "K0 must be at least 1");
    return std::max(d4, 2.0 * kPi * std::pow(K0, r + 1.0) * std::sqrt(e_star));
}

} // namespace galerkin
