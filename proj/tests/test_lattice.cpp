#include "galerkin/lattice.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace galerkin;

namespace {

// Oracle: count nonzero points of the bounding cube inside the disk.
int brute_disk_count(int d, double k_max) {
    const int h = static_cast<int>(std::floor(k_max));
    int count = 0;
    for (int a = -h; a <= h; ++a)
        for (int b = -h; b <= h; ++b)
            for (int c = (d == 3 ? -h : 0); c <= (d == 3 ? h : 0); ++c) {
                const long n = long(a) * a + long(b) * b + long(c) * c;
                if (n > 0 && n <= k_max * k_max) ++count;
            }
    return count;
}

double brute_ball_sum(int d, double p, double r_lo, double r_hi) {
    const int h = static_cast<int>(std::floor(r_hi));
    double s = 0.0;
    for (int a = -h; a <= h; ++a)
        for (int b = -h; b <= h; ++b)
            for (int c = (d == 3 ? -h : 0); c <= (d == 3 ? h : 0); ++c) {
                const double n = double(a) * a + double(b) * b + double(c) * c;
                if (n > r_lo * r_lo && n <= r_hi * r_hi) s += std::pow(n, -0.5 * p);
            }
    return s;
}

} // namespace

TEST(Truncation, UnitDisk) {
    auto z = build_truncation<2>(TruncationShape::Disk, 1.0);
    ASSERT_EQ(z.size(), 4u);
    std::set<WaveVector2> got(z.members().begin(), z.members().end());
    std::set<WaveVector2> want{{{1, 0}}, {{-1, 0}}, {{0, 1}}, {{0, -1}}};
    EXPECT_EQ(got, want);
}

TEST(Truncation, DiskOneAndAHalf) {
    auto z = build_truncation<2>(TruncationShape::Disk, 1.5);
    EXPECT_EQ(z.size(), 8u);
    EXPECT_TRUE(z.contains(WaveVector2{{1, 1}}));
    EXPECT_TRUE(z.contains(WaveVector2{{-1, 1}}));
}

TEST(Truncation, ThreeDimensionalDiskCountMatchesCubeEnumeration) {
    auto z = build_truncation<3>(TruncationShape::Disk, 2.0);
    EXPECT_EQ(static_cast<int>(z.size()), brute_disk_count(3, 2.0));
    EXPECT_EQ(z.size(), 32u);
}

TEST(Truncation, CountsMatchEnumerationForSeveralRadii) {
    for (double k : {1.0, 2.5, 3.2, 7.9, 12.0}) {
        EXPECT_EQ(static_cast<int>(build_truncation<2>(TruncationShape::Disk, k).size()), brute_disk_count(2, k)) << k;
        EXPECT_EQ(static_cast<int>(build_truncation<3>(TruncationShape::Disk, k).size()), brute_disk_count(3, k)) << k;
    }
}

TEST(Truncation, SquareCount) {
    EXPECT_EQ(build_truncation<2>(TruncationShape::Square, 3.0).size(), 48u);
    EXPECT_EQ(build_truncation<3>(TruncationShape::Square, 2.0).size(), 124u);
}

TEST(Truncation, RejectsSmallRadius) {
    try {
        build_truncation<2>(TruncationShape::Disk, 0.9);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyTruncation);
    }
}

TEST(Truncation, SymmetricOrderedWithoutZero) {
    auto z = build_truncation<3>(TruncationShape::Disk, 3.5);
    EXPECT_FALSE(z.contains(WaveVector3{}));
    EXPECT_TRUE(std::is_sorted(z.members().begin(), z.members().end()));
    for (const auto& k : z.members()) EXPECT_TRUE(z.contains(-k));
    EXPECT_EQ(2 * z.canonical_count(), z.size());
    for (std::size_t i = 0; i < z.canonical_count(); ++i) EXPECT_TRUE(z.canonical(i).is_canonical());
}

TEST(Truncation, LookupAgreesWithMembers) {
    auto z = build_truncation<2>(TruncationShape::Disk, 6.3);
    for (int a = -8; a <= 8; ++a)
        for (int b = -8; b <= 8; ++b) {
            WaveVector2 k{{a, b}};
            bool in = !k.is_zero() && a * a + b * b <= 6.3 * 6.3;
            ASSERT_EQ(z.contains(k), in);
            if (in) {
                EXPECT_EQ(z.member(*z.index_of(k)), k);
            }
        }
}

TEST(WaveVectorOps, PerpConvention) {
    EXPECT_EQ(perp(WaveVector2{{3, -2}}), (WaveVector2{{2, 3}}));
    EXPECT_DOUBLE_EQ((WaveVector3{{1, 2, 2}}).norm(), 3.0);
}

TEST(ConvolutionPairs, UnitDiskToDiagonal) {
    auto z = build_truncation<2>(TruncationShape::Disk, 1.0);
    auto pairs = convolution_pairs(WaveVector2{{1, 1}}, z);
    ASSERT_EQ(pairs.size(), 2u);
    EXPECT_EQ(pairs[0], std::make_pair(WaveVector2{{0, 1}}, WaveVector2{{1, 0}}));
    EXPECT_EQ(pairs[1], std::make_pair(WaveVector2{{1, 0}}, WaveVector2{{0, 1}}));
    EXPECT_TRUE(convolution_pairs(WaveVector2{{3, 0}}, z).empty());
}

TEST(ConvolutionPairs, MatchesDoubleLoop) {
    auto z = build_truncation<2>(TruncationShape::Disk, 1.5);
    for (WaveVector2 k : {WaveVector2{{2, 1}}, WaveVector2{{0, 0}}, WaveVector2{{-1, 2}}, WaveVector2{{2, 2}}}) {
        std::vector<ConvolutionPair<2>> brute;
        for (const auto& a : z.members())
            for (const auto& b : z.members())
                if (a + b == k) brute.emplace_back(a, b);
        EXPECT_EQ(convolution_pairs(k, z), brute);
    }
    EXPECT_EQ(convolution_pairs(WaveVector2{{2, 1}}, z).size(), 2u);
}

TEST(ConvolutionPairs, CentralSymmetry) {
    auto z = build_truncation<3>(TruncationShape::Disk, 2.5);
    for (WaveVector3 k : {WaveVector3{{1, 2, 0}}, WaveVector3{{0, 0, 3}}, WaveVector3{{2, -1, 1}}}) {
        auto plus = convolution_pairs(k, z);
        auto minus = convolution_pairs(-k, z);
        std::set<ConvolutionPair<3>> m(minus.begin(), minus.end());
        ASSERT_EQ(plus.size(), minus.size());
        for (const auto& [a, b] : plus) EXPECT_TRUE(m.count({-a, -b}));
    }
}

TEST(ShellPartition, Thresholds) {
    EXPECT_EQ(classify_shell(WaveVector2{{4, 0}}, WaveVector2{{1, 0}}), Shell::Near);
    EXPECT_EQ(classify_shell(WaveVector2{{4, 0}}, WaveVector2{{2, 0}}), Shell::Near);
    EXPECT_EQ(classify_shell(WaveVector2{{4, 0}}, WaveVector2{{4, 4}}), Shell::Mid);
    EXPECT_EQ(classify_shell(WaveVector2{{4, 0}}, WaveVector2{{8, 0}}), Shell::Mid);
    EXPECT_EQ(classify_shell(WaveVector2{{2, 0}}, WaveVector2{{5, 0}}), Shell::Far);
}

TEST(ShellPartition, PartitionsPairs) {
    auto z = build_truncation<2>(TruncationShape::Disk, 9.0);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> c(-10, 10);
    for (int trial = 0; trial < 30; ++trial) {
        WaveVector2 k{{c(rng), c(rng)}};
        auto pairs = convolution_pairs(k, z);
        auto part = shell_partition(k, pairs);
        std::vector<ConvolutionPair<2>> joined;
        for (auto* v : {&part.near, &part.mid, &part.far}) joined.insert(joined.end(), v->begin(), v->end());
        std::sort(joined.begin(), joined.end());
        auto sorted = pairs;
        std::sort(sorted.begin(), sorted.end());
        EXPECT_EQ(joined, sorted);
    }
}

TEST(LatticeSum, UnitBall) { EXPECT_EQ(lattice_sum(2, 4.0, LatticeRegion::ball(1.0)), 4.0); }

TEST(LatticeSum, UnitBallBracketContainsFour) {
    auto b = lattice_sum_bracket(2, 4.0, LatticeRegion::ball(1.0));
    EXPECT_LE(b.lower, 4.0);
    EXPECT_GE(b.upper, 4.0);
}

TEST(LatticeSum, TwoDimensionalCubicBracket) {
    auto b = lattice_sum_bracket(2, 3.0, LatticeRegion::all(), 200);
    const double head = brute_ball_sum(2, 3.0, 0.0, 200.0);
    EXPECT_GT(b.lower, head);
    EXPECT_LT(b.upper - b.lower, 1e-3);
    // tail beyond R is about 2 pi / R
    EXPECT_NEAR(b.upper - lattice_sum(2, 3.0, LatticeRegion::ball(200.0)), 2.0 * std::numbers::pi / 200.0, 1e-3);
}

TEST(LatticeSum, ComplementExceedsPartialEnumeration) {
    const double partial = brute_ball_sum(3, 4.0, 2.0, 100.0);
    EXPECT_GT(lattice_sum(3, 4.0, LatticeRegion::complement_ball(2.0)), partial);
}

TEST(LatticeSum, SplitAdditivity) {
    for (double R : {1.0, 3.5, 10.0, 50.0}) {
        auto all = lattice_sum_bracket(2, 3.5, LatticeRegion::all());
        auto in = lattice_sum_bracket(2, 3.5, LatticeRegion::ball(R));
        auto out = lattice_sum_bracket(2, 3.5, LatticeRegion::complement_ball(R));
        EXPECT_LE(in.lower + out.lower, all.upper);
        EXPECT_GE(in.upper + out.upper, all.lower);
    }
}

TEST(LatticeSum, DecreasingInExponent) {
    double prev = INFINITY;
    for (double p : {2.2, 2.5, 3.0, 4.0, 6.0}) {
        const double v = lattice_sum(2, p, LatticeRegion::all());
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(LatticeSum, DivergentExponent) {
    try {
        lattice_sum(3, 3.0, LatticeRegion::all());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DivergentSum);
    }
    EXPECT_NO_THROW(lattice_sum(3, 1.0, LatticeRegion::ball(4.0)));
}

TEST(LatticeSum, TailConstantDominatesTails) {
    for (int d : {2, 3}) {
        const double p = d + 1.5;
        const double T = tail_scaling_constant(d, p);
        for (double R : {1.0, 1.5, 2.0, 3.7, 8.0, 20.0}) {
            const double tail_lo = lattice_sum_bracket(d, p, LatticeRegion::complement_ball(R)).lower;
            EXPECT_GE(T * std::pow(R, d - p), tail_lo) << d << " " << R;
        }
    }
}

TEST(LatticeSum, LogShellConstant) {
    const double c2 = log_shell_constant_sq();
    double h = 0.0;
    // H(x/2) is a step function; compare just after each jump and at x = 2
    std::vector<std::pair<long, int>> shells;
    for (int a = -150; a <= 150; ++a)
        for (int b = -150; b <= 150; ++b) {
            long n = long(a) * a + long(b) * b;
            if (n > 0 && n <= 150L * 150) shells.emplace_back(n, 1);
        }
    std::sort(shells.begin(), shells.end());
    for (std::size_t i = 0; i < shells.size(); ++i) {
        h += 1.0 / shells[i].first;
        if (i + 1 < shells.size() && shells[i + 1].first == shells[i].first) continue;
        const double x = std::max(2.0, 2.0 * std::sqrt(double(shells[i].first)));
        EXPECT_LE(h, c2 * std::log(x));
    }
}

TEST(WeightedLatticeSum, MatchesEnumeration) {
    for (int d : {2, 3}) {
        const int n = d == 2 ? 200 : 60;
        double direct = 0.0;
        for (int a = -n; a <= n; ++a)
            for (int b = -n; b <= n; ++b)
                for (int c = (d == 3 ? -n : 0); c <= (d == 3 ? n : 0); ++c) {
                    const double x2 = double(a) * a + double(b) * b + double(c) * c;
                    if (x2 == 0.0) continue;
                    const double x = std::sqrt(x2);
                    direct += std::exp(-0.6 * x) * std::pow(x, -4.0);
                }
        const double w = weighted_lattice_sum(d, 4.0, 0.6, 1.0);
        EXPECT_GE(w, direct);
        EXPECT_LE(w, direct * (1.0 + 1e-9));
    }
    EXPECT_EQ(weighted_lattice_sum(2, 3.0, 0.0, 1.0), lattice_sum(2, 3.0, LatticeRegion::all()));
    // x^{d+1-q} e^{-a x} grows up to x = 2/a = 40, past the first radius
    const double grown = weighted_lattice_sum(2, 1.0, 0.05, 1.0);
    double direct = 0.0;
    for (int a = -1500; a <= 1500; ++a)
        for (int b = -1500; b <= 1500; ++b) {
            const double x2 = double(a) * a + double(b) * b;
            if (x2 > 0.0) direct += std::exp(-0.05 * std::sqrt(x2)) / std::sqrt(x2);
        }
    EXPECT_GE(grown, direct);
    EXPECT_LE(grown, direct * (1.0 + 1e-9));
}
