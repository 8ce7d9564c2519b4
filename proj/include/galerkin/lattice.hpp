#pragma once

// Integer wave vectors, centrally-symmetric truncation sets, convolution
// pairs, shell decompositions and certified lattice sums.

#include "galerkin/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace galerkin {

template <int D>
struct WaveVector {
    static_assert(D == 2 || D == 3, "only the 2- and 3-torus are supported");
    static constexpr int dimension = D;

    std::array<int, D> c{};

    constexpr int operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    constexpr int& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

    constexpr std::int64_t norm2() const {
        std::int64_t s = 0;
        for (int v : c) s += static_cast<std::int64_t>(v) * v;
        return s;
    }
    double norm() const { return std::sqrt(static_cast<double>(norm2())); }

    constexpr bool is_zero() const {
        for (int v : c)
            if (v != 0) return false;
        return true;
    }

    /// Representative of the pair {k, -k}: first nonzero component positive.
    constexpr bool is_canonical() const {
        for (int v : c) {
            if (v > 0) return true;
            if (v < 0) return false;
        }
        return false;
    }

    constexpr WaveVector operator-() const {
        WaveVector r;
        for (int i = 0; i < D; ++i) r.c[i] = -c[i];
        return r;
    }
    constexpr WaveVector operator+(const WaveVector& o) const {
        WaveVector r;
        for (int i = 0; i < D; ++i) r.c[i] = c[i] + o.c[i];
        return r;
    }
    constexpr WaveVector operator-(const WaveVector& o) const {
        WaveVector r;
        for (int i = 0; i < D; ++i) r.c[i] = c[i] - o.c[i];
        return r;
    }

    constexpr auto operator<=>(const WaveVector&) const = default;
};

using WaveVector2 = WaveVector<2>;
using WaveVector3 = WaveVector<3>;

template <int D>
constexpr std::int64_t dot(const WaveVector<D>& a, const WaveVector<D>& b) {
    std::int64_t s = 0;
    for (int i = 0; i < D; ++i) s += static_cast<std::int64_t>(a[i]) * b[i];
    return s;
}

/// l^perp = (-l2, l1).
constexpr WaveVector2 perp(const WaveVector2& l) { return WaveVector2{{-l[1], l[0]}}; }

template <int D>
std::string to_string(const WaveVector<D>& k) {
    std::string s = "(";
    for (int i = 0; i < D; ++i) {
        if (i) s += ",";
        s += std::to_string(k[i]);
    }
    return s + ")";
}

enum class TruncationShape { Disk, Square };

inline const char* to_string(TruncationShape s) { return s == TruncationShape::Disk ? "disk" : "square"; }

inline TruncationShape parse_shape(const std::string& s) {
    if (s == "disk") return TruncationShape::Disk;
    if (s == "square") return TruncationShape::Square;
    throw Error(ErrorCode::Configuration, "unknown truncation shape '" + s + "'");
}

/// Finite centrally-symmetric mode set Z, 0 excluded, members in
/// lexicographic order. Each member maps onto a slot of the canonical half.
template <int D>
class TruncationSet {
public:
    struct Slot {
        std::size_t index; ///< position in the canonical half
        bool conjugate;    ///< member is -k of the canonical representative
    };

    TruncationSet(TruncationShape shape, double k_max) : shape_(shape), k_max_(k_max) {
        if (!(k_max >= 1.0)) throw Error(ErrorCode::EmptyTruncation, "K_max must be >= 1");
        half_ = static_cast<int>(std::floor(k_max));
        side_ = 2 * half_ + 1;
        std::size_t cells = 1;
        for (int i = 0; i < D; ++i) cells *= static_cast<std::size_t>(side_);
        lookup_.assign(cells, -1);

        const double r2 = k_max * k_max;
        WaveVector<D> k;
        for (int i = 0; i < D; ++i) k[i] = -half_;
        while (true) {
            if (!k.is_zero()) {
                bool keep = shape == TruncationShape::Square || static_cast<double>(k.norm2()) <= r2;
                if (keep) members_.push_back(k);
            }
            int i = D - 1;
            while (i >= 0 && k[i] == half_) {
                k[i] = -half_;
                --i;
            }
            if (i < 0) break;
            ++k[i];
        }
        // odometer order with the last component fastest is lexicographic
        for (std::size_t m = 0; m < members_.size(); ++m) lookup_[cell(members_[m])] = static_cast<std::int64_t>(m);

        slots_.resize(members_.size());
        for (std::size_t m = 0; m < members_.size(); ++m) {
            if (members_[m].is_canonical()) {
                slots_[m] = Slot{canonical_.size(), false};
                canonical_.push_back(m);
            }
        }
        for (std::size_t m = 0; m < members_.size(); ++m) {
            if (!members_[m].is_canonical()) {
                auto partner = index_of(-members_[m]);
                slots_[m] = Slot{slots_[*partner].index, true};
            }
        }
    }

    TruncationShape shape() const { return shape_; }
    double k_max() const { return k_max_; }
    /// Largest absolute component of any member.
    int half_width() const { return half_; }

    std::size_t size() const { return members_.size(); }
    const std::vector<WaveVector<D>>& members() const { return members_; }
    const WaveVector<D>& member(std::size_t m) const { return members_[m]; }

    std::optional<std::size_t> index_of(const WaveVector<D>& k) const {
        for (int i = 0; i < D; ++i)
            if (k[i] < -half_ || k[i] > half_) return std::nullopt;
        auto v = lookup_[cell(k)];
        if (v < 0) return std::nullopt;
        return static_cast<std::size_t>(v);
    }
    bool contains(const WaveVector<D>& k) const { return index_of(k).has_value(); }

    std::size_t canonical_count() const { return canonical_.size(); }
    const WaveVector<D>& canonical(std::size_t slot) const { return members_[canonical_[slot]]; }
    std::size_t canonical_member_index(std::size_t slot) const { return canonical_[slot]; }
    const Slot& slot_of(std::size_t member_index) const { return slots_[member_index]; }

    bool same_as(const TruncationSet& o) const { return shape_ == o.shape_ && k_max_ == o.k_max_; }

private:
    std::size_t cell(const WaveVector<D>& k) const {
        std::size_t idx = 0;
        for (int i = 0; i < D; ++i) idx = idx * static_cast<std::size_t>(side_) + static_cast<std::size_t>(k[i] + half_);
        return idx;
    }

    TruncationShape shape_;
    double k_max_;
    int half_ = 0;
    int side_ = 0;
    std::vector<WaveVector<D>> members_;
    std::vector<std::int64_t> lookup_;
    std::vector<std::size_t> canonical_;
    std::vector<Slot> slots_;
};

template <int D>
TruncationSet<D> build_truncation(TruncationShape shape, double k_max) {
    return TruncationSet<D>(shape, k_max);
}

template <int D>
using ConvolutionPair = std::pair<WaveVector<D>, WaveVector<D>>;

/// All ordered (l1, l2) in Z x Z with l1 + l2 = k, ordered by l1.
template <int D>
std::vector<ConvolutionPair<D>> convolution_pairs(const WaveVector<D>& k, const TruncationSet<D>& z) {
    std::vector<ConvolutionPair<D>> out;
    for (const auto& l1 : z.members()) {
        auto l2 = k - l1;
        if (z.contains(l2)) out.emplace_back(l1, l2);
    }
    return out;
}

enum class Shell { Near, Mid, Far };

/// Shell of l2 relative to k: |l2| <= |k|/2, |k|/2 < |l2| <= 2|k|, |l2| > 2|k|.
/// Compared on exact integer squares.
template <int D>
constexpr Shell classify_shell(const WaveVector<D>& k, const WaveVector<D>& l2) {
    const std::int64_t k2 = k.norm2();
    const std::int64_t n2 = l2.norm2();
    if (4 * n2 <= k2) return Shell::Near;
    if (n2 <= 4 * k2) return Shell::Mid;
    return Shell::Far;
}

template <int D>
struct ShellPartition {
    std::vector<ConvolutionPair<D>> near;
    std::vector<ConvolutionPair<D>> mid;
    std::vector<ConvolutionPair<D>> far;
};

template <int D>
ShellPartition<D> shell_partition(const WaveVector<D>& k, const std::vector<ConvolutionPair<D>>& pairs) {
    ShellPartition<D> out;
    for (const auto& p : pairs) {
        switch (classify_shell(k, p.second)) {
        case Shell::Near: out.near.push_back(p); break;
        case Shell::Mid: out.mid.push_back(p); break;
        case Shell::Far: out.far.push_back(p); break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lattice sums  sum_{l in region, l != 0} |l|^{-p}
// ---------------------------------------------------------------------------

enum class RegionKind { All, Ball, ComplementBall };

struct LatticeRegion {
    RegionKind kind = RegionKind::All;
    double radius = 0.0;

    static LatticeRegion all() { return {RegionKind::All, 0.0}; }
    static LatticeRegion ball(double r) { return {RegionKind::Ball, r}; }
    static LatticeRegion complement_ball(double r) { return {RegionKind::ComplementBall, r}; }
};

struct LatticeSumBracket {
    double lower;
    double upper;
};

namespace detail {

inline double sphere_area(int d) { return d == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi; }

inline double round_up(double x) { return x * (1.0 + 64.0 * std::numeric_limits<double>::epsilon()); }
inline double round_down(double x) { return x * (1.0 - 64.0 * std::numeric_limits<double>::epsilon()); }

/// Number of lattice points with |l|^2 == n, for n <= radius^2.
inline const std::vector<std::uint64_t>& norm_counts(int d, int radius) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::vector<std::uint64_t>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(d, radius);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const std::int64_t limit = static_cast<std::int64_t>(radius) * radius;
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(limit) + 1, 0);
    if (d == 2) {
        for (std::int64_t a = -radius; a <= radius; ++a)
            for (std::int64_t b = -radius; b <= radius; ++b) {
                auto n = a * a + b * b;
                if (n <= limit) ++counts[static_cast<std::size_t>(n)];
            }
    } else {
        for (std::int64_t a = -radius; a <= radius; ++a)
            for (std::int64_t b = -radius; b <= radius; ++b) {
                auto ab = a * a + b * b;
                if (ab > limit) continue;
                for (std::int64_t c = -radius; c <= radius; ++c) {
                    auto n = ab + c * c;
                    if (n <= limit) ++counts[static_cast<std::size_t>(n)];
                }
            }
    }
    counts[0] = 0;
    return cache.emplace(key, std::move(counts)).first->second;
}

/// sum over n_lo < |l|^2 <= n_hi of |l|^{-p}; summed from small terms up.
inline double shell_range_sum(int d, double p, std::int64_t n_lo, std::int64_t n_hi, int radius) {
    const auto& counts = norm_counts(d, radius);
    double s = 0.0;
    for (std::int64_t n = n_hi; n > n_lo; --n) {
        auto c = counts[static_cast<std::size_t>(n)];
        if (c) s += static_cast<double>(c) * std::pow(static_cast<double>(n), -0.5 * p);
    }
    return s;
}

/// Upper bound for sum_{|l| > R} |l|^{-p} by comparing each lattice term with
/// the integral over its unit cube (cubes lie in |x| > R - sqrt(d)/2).
inline double tail_upper(int d, double p, double r) {
    const double a = 0.5 * std::sqrt(static_cast<double>(d));
    return round_up(std::pow(1.0 + a / r, p) * sphere_area(d) * std::pow(r - a, d - p) / (p - d));
}

/// Lower bound for the same tail (cubes cover |x| > R + sqrt(d)/2).
inline double tail_lower(int d, double p, double r) {
    const double a = 0.5 * std::sqrt(static_cast<double>(d));
    return round_down(std::pow(1.0 - a / r, p) * sphere_area(d) * std::pow(r + a, d - p) / (p - d));
}

inline int default_cutoff(int d) { return d == 2 ? 400 : 64; }

inline std::int64_t floor_square(double r) {
    if (r < 0) return -1;
    auto n = static_cast<std::int64_t>(std::floor(r * r));
    // guard against r*r rounding below an exact integer square
    while (static_cast<double>(n + 1) <= r * r) ++n;
    return n;
}

} // namespace detail

/// Two-sided bracket of the lattice sum. `cutoff` is the enumeration radius
/// for infinite regions; the remainder is bounded by integral comparison.
inline LatticeSumBracket lattice_sum_bracket(int d, double p, LatticeRegion region, int cutoff = 0) {
    if (d != 2 && d != 3) throw Error(ErrorCode::Domain, "lattice sums need d in {2,3}");
    if (region.kind != RegionKind::Ball && !(p > d))
        throw Error(ErrorCode::DivergentSum, "sum of |l|^-p diverges for p <= d over an infinite region");
    if (cutoff <= 0) cutoff = detail::default_cutoff(d);

    if (region.kind == RegionKind::Ball) {
        const auto n_hi = detail::floor_square(region.radius);
        if (n_hi < 1) return {0.0, 0.0};
        const int rad = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_hi))));
        // finite enumeration; only tails are rounded outward
        const double s = detail::shell_range_sum(d, p, 0, n_hi, rad);
        return {s, s};
    }

    std::int64_t n_lo = 0;
    if (region.kind == RegionKind::ComplementBall) {
        n_lo = std::max<std::int64_t>(0, detail::floor_square(region.radius));
        const int need = static_cast<int>(std::ceil(2.0 * std::max(region.radius, 1.0)));
        cutoff = std::max(cutoff, need);
    }
    const std::int64_t n_hi = static_cast<std::int64_t>(cutoff) * cutoff;
    const double head = detail::shell_range_sum(d, p, n_lo, n_hi, cutoff);
    const double rc = static_cast<double>(cutoff);
    return {detail::round_down(head + detail::tail_lower(d, p, rc)),
            detail::round_up(head + detail::tail_upper(d, p, rc))};
}

/// Certified upper bound of sum_{l in region, l != 0} |l|^{-p}.
inline double lattice_sum(int d, double p, LatticeRegion region) { return lattice_sum_bracket(d, p, region).upper; }

/// T with  sum_{|l| > R} |l|^{-p} <= T R^{d-p}  for every R >= 1.
inline double tail_scaling_constant(int d, double p) {
    if (!(p > d)) throw Error(ErrorCode::DivergentSum, "tail constant needs p > d");
    static std::mutex mutex;
    static std::map<std::pair<int, double>, double> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find({d, p});
        if (it != cache.end()) return it->second;
    }
    const int rc = detail::default_cutoff(d);
    const double total = lattice_sum(d, p, LatticeRegion::all());
    const auto& counts = detail::norm_counts(d, rc);
    const std::int64_t n_max = static_cast<std::int64_t>(rc) * rc;

    double best = 0.0;
    double partial = 0.0;
    for (std::int64_t n = 1; n < n_max; ++n) {
        auto c = counts[static_cast<std::size_t>(n)];
        if (c) partial += static_cast<double>(c) * std::pow(static_cast<double>(n), -0.5 * p);
        // on sqrt(n) <= R < sqrt(n+1) the tail is constant and R^{p-d} is largest at the right end
        double tail = std::max(0.0, total - partial);
        best = std::max(best, tail * std::pow(static_cast<double>(n + 1), 0.5 * (p - d)));
    }
    // beyond the enumerated range the integral bound, scaled, decreases in R
    const double r = static_cast<double>(rc);
    best = std::max(best, detail::tail_upper(d, p, r) * std::pow(r, p - d));
    best = detail::round_up(best);

    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(std::make_pair(d, p), best);
    return best;
}

/// Upper bound of sum_{l != 0} e^{-a |l|^b} |l|^{-q} over all of Z^d (a >= 0):
/// direct enumeration to a radius R beyond which e^{-a x^b} x^{d+1-q} is
/// decreasing, plus that factor at R times sum_{|l| > R} |l|^{-(d+1)}. R is
/// doubled until the tail term is negligible or the enumeration gets large.
inline double weighted_lattice_sum(int d, double q, double a, double b) {
    if (!(a >= 0.0)) throw Error(ErrorCode::Domain, "weight rate must be nonnegative");
    if (a == 0.0) return lattice_sum(d, q, LatticeRegion::all());
    if (!(b > 0.0)) throw Error(ErrorCode::Domain, "weight exponent must be positive");
    const double m = d + 1.0 - q;
    const double r_cap = d == 2 ? 2048.0 : 256.0;
    auto head_sum = [&](int n) {
        const std::int64_t r2 = static_cast<std::int64_t>(n) * n;
        double head = 0.0;
        std::array<int, 3> c{0, 0, 0};
        auto visit = [&](auto&& self, int axis) -> void {
            if (axis == d) {
                std::int64_t n2 = 0;
                for (int i = 0; i < d; ++i)
                    n2 += static_cast<std::int64_t>(c[static_cast<std::size_t>(i)]) * c[static_cast<std::size_t>(i)];
                if (n2 == 0 || n2 > r2) return;
                const double x = std::sqrt(static_cast<double>(n2));
                head += std::exp(-a * std::pow(x, b)) * std::pow(x, -q);
                return;
            }
            for (int v = -n; v <= n; ++v) {
                c[static_cast<std::size_t>(axis)] = v;
                self(self, axis + 1);
            }
        };
        visit(visit, 0);
        return head;
    };
    double R = 16.0;
    while (a * b * std::pow(R, b) <= m) R *= 2.0;
    for (;;) {
        const double tail =
            std::exp(-a * std::pow(R, b)) * std::pow(R, m) * lattice_sum(d, d + 1.0, LatticeRegion::complement_ball(R));
        const double head = head_sum(static_cast<int>(R));
        if (tail <= 1e-13 * head || R >= r_cap) return detail::round_up(head + tail);
        R *= 2.0;
    }
}

/// c^2 with  sum_{0 < |l| <= x/2} |l|^{-2} <= c^2 ln x  for all x >= 2 (2D).
inline double log_shell_constant_sq() {
    static const double value = [] {
        const int rc = detail::default_cutoff(2);
        const auto& counts = detail::norm_counts(2, rc);
        const std::int64_t n_max = static_cast<std::int64_t>(rc) * rc;
        double h = 0.0;
        double best = 0.0;
        for (std::int64_t n = 1; n <= n_max; ++n) {
            auto c = counts[static_cast<std::size_t>(n)];
            if (!c) continue;
            h += static_cast<double>(c) / static_cast<double>(n);
            // H jumps at x/2 = sqrt(n); ln x is smallest there
            best = std::max(best, h / std::log(2.0 * std::sqrt(static_cast<double>(n))));
        }
        const double r = static_cast<double>(rc);
        const double a = 0.5 * std::sqrt(2.0);
        const double slope = std::pow(1.0 + a / r, 2.0) * 2.0 * std::numbers::pi;
        best = std::max(best, slope);
        for (double x = r; x < 1e15; x *= 1.01) {
            double bound = h + slope * std::log((x + a) / (r - a));
            best = std::max(best, bound / std::log(2.0 * x));
        }
        return detail::round_up(best);
    }();
    return value;
}

} // namespace galerkin
