#include "galerkin/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace galerkin;

namespace {

constexpr double kFourPi2 = 4.0 * std::numbers::pi * std::numbers::pi;

template <int D>
std::vector<double> supported_on(const TruncationSet<D>& z, const WaveVector<D>& k, double v) {
    std::vector<double> out(z.size(), 0.0);
    out[*z.index_of(k)] = v;
    return out;
}

template <int D>
void expect_lemma_domination(double K_max, double r, int sequences, int waves_per_sequence, std::uint64_t seed) {
    auto z = make_truncation<D>(TruncationShape::Disk, K_max);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> comp(-32, 32);
    int violations = 0, checked = 0;
    double worst = 0.0;
    for (int n = 0; n < sequences; ++n) {
        const double C = 0.5 + n % 3;
        const auto a = random_envelope_sequence(*z, C, r, seed + 2 * n);
        const auto b = random_envelope_sequence(*z, C, r, seed + 2 * n + 1);
        for (int j = 0; j < waves_per_sequence;) {
            WaveVector<D> k;
            for (int i = 0; i < D; ++i) k[i] = comp(rng);
            const double kn = k.norm();
            if (kn < 2.0 || kn > 32.0) continue;
            ++j;
            ++checked;
            const auto sums = shell_sums_lookup(a, b, k, *z);
            const double bound = lemma1_bound(C, r, k);
            worst = std::max(worst, sums.total / bound);
            if (sums.total > bound) ++violations;
        }
    }
    EXPECT_EQ(violations, 0) << "d=" << D << " r=" << r << " worst ratio " << worst;
    EXPECT_GT(checked, 0);
}

struct Thm1Setup {
    double e_star = 1e-3;
    double r = 3.0;
    double alpha = 2.0;
    double eps = 0.5;
    PhysicalParams p{1.0, 2.0};
    KcritResult kc;
    Envelope env;
    ForcingSpec f;
    TruncationPtr<2> z;
};

Thm1Setup thm1_setup() {
    Thm1Setup s;
    s.kc = kcrit_2d_algebraic(s.e_star, s.r, s.alpha, s.eps, s.p.nu);
    const double K0 = s.kc.K;
    const double d_prime = d_prime_algebraic(K0, s.e_star, s.r, 0.0);
    s.env = Envelope::algebraic(d_prime, s.r, K0);
    s.f.kind = ForcingKind::PowerLaw;
    s.f.amplitude = 0.5 * d_prime;
    s.f.r = s.r;
    s.f.epsilon = s.eps;
    s.f.alpha_ref = s.alpha;
    s.f.phase_seed = 17;
    s.z = make_truncation<2>(TruncationShape::Disk, 12.0);
    return s;
}

} // namespace

TEST(ShellSums, ZeroSequences) {
    auto z = make_truncation<2>(TruncationShape::Disk, 4.0);
    std::vector<double> a(z->size(), 0.0);
    const auto s = brute_shell_sums(a, a, WaveVector2{{2, 1}}, *z);
    EXPECT_EQ(s.near, 0.0);
    EXPECT_EQ(s.mid, 0.0);
    EXPECT_EQ(s.far, 0.0);
    EXPECT_EQ(s.total, 0.0);
}

TEST(ShellSums, SinglePairOnInnerShellBoundary) {
    // |l2| = |k|/2 belongs to the inner shell
    auto z = make_truncation<2>(TruncationShape::Disk, 3.0);
    const WaveVector2 l{{1, 0}};
    const auto s = brute_shell_sums(supported_on(*z, l, 0.7), supported_on(*z, l, 1.3), WaveVector2{{2, 0}}, *z);
    EXPECT_DOUBLE_EQ(s.near, 2.0 * 0.7 * 1.3);
    EXPECT_EQ(s.mid, 0.0);
    EXPECT_EQ(s.far, 0.0);
    EXPECT_DOUBLE_EQ(s.total, s.near);
    const auto m = brute_shell_sums(supported_on(*z, l, 0.7), supported_on(*z, WaveVector2{{2, 0}}, 1.3),
                                    WaveVector2{{3, 0}}, *z);
    EXPECT_DOUBLE_EQ(m.mid, 1.5 * 0.7 * 1.3);
    EXPECT_EQ(m.near, 0.0);
}

TEST(ShellSums, PartitionAddsUpToDoubleLoop) {
    auto z = make_truncation<2>(TruncationShape::Disk, 9.0);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> comp(-14, 14);
    for (int n = 0; n < 20; ++n) {
        const auto a = random_envelope_sequence(*z, 1.0, 2.0, 100 + n);
        const auto b = random_envelope_sequence(*z, 1.0, 2.0, 200 + n);
        WaveVector2 k{{comp(rng), comp(rng)}};
        if (k.is_zero()) k = WaveVector2{{1, 0}};
        const auto s = brute_shell_sums(a, b, k, *z);
        EXPECT_NEAR(s.sum(), s.total, 1e-12 * std::max(1.0, s.total));
        const auto l = shell_sums_lookup(a, b, k, *z);
        EXPECT_NEAR(l.total, s.total, 1e-12 * std::max(1.0, s.total));
        EXPECT_NEAR(l.near, s.near, 1e-12 * std::max(1.0, s.total));
        EXPECT_NEAR(l.far, s.far, 1e-12 * std::max(1.0, s.total));
    }
}

TEST(ShellSums, DimensionMismatch) {
    auto z = make_truncation<2>(TruncationShape::Disk, 3.0);
    std::vector<double> a(z->size(), 1.0), b(z->size() - 1, 1.0);
    try {
        brute_shell_sums(a, b, WaveVector2{{1, 1}}, *z);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(ShellSums, DiskTwelveBelowLemmaBound) {
    auto z = make_truncation<2>(TruncationShape::Disk, 12.0);
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> comp(-20, 20);
    const double C = 1.0, r = 2.0;
    const auto a = random_envelope_sequence(*z, C, r, 1);
    const auto b = random_envelope_sequence(*z, C, r, 2);
    for (int j = 0; j < 20;) {
        const WaveVector2 k{{comp(rng), comp(rng)}};
        if (k.is_zero()) continue;
        ++j;
        const auto s = brute_shell_sums(a, b, k, *z);
        EXPECT_LE(s.sum(), lemma1_bound(C, r, k)) << to_string(k);
    }
}

TEST(LemmaDomination, TwoDimensions) {
    for (double r : {1.5, 2.0, 3.0}) expect_lemma_domination<2>(20.0, r, 1000, 4, 11);
}

TEST(LemmaDomination, ThreeDimensions) {
    // r = 1.5 and r = 2 violate r > d - 1
    EXPECT_THROW(lemma1_constants(3, 2.0), Error);
    expect_lemma_domination<3>(16.0, 3.0, 1000, 2, 13);
}

TEST(VerifyInward, PureDissipationMargin) {
    auto z = make_truncation<2>(TruncationShape::Disk, 6.0);
    const auto env = Envelope::algebraic(2.0, 2.5, 1.0);
    const PhysicalParams p{0.4, 2.2};
    const WaveVector2 kb{{3, 2}};
    Spectrum2D s(z);
    s.set(kb, Complex(0.3 * env.value(kb), -env.value(kb)));
    const auto chk = verify_inward(s, env, p, ForcingSpec{}, 0.0, kb, Part::Im, -1);
    const double want = kFourPi2 * p.nu * std::pow(kb.norm(), p.alpha) * env.value(kb);
    EXPECT_NEAR(chk.margin, want, 1e-12 * want);
    EXPECT_TRUE(chk.holds);
    EXPECT_FALSE(chk.sufficient_margin.has_value());
}

TEST(VerifyInward, ThreeDimensionalPureDissipation) {
    auto z = make_truncation<3>(TruncationShape::Disk, 3.0);
    const auto env = Envelope::algebraic(1.0, 2.0, 1.0);
    const PhysicalParams p{0.2, 2.5};
    const WaveVector3 kb{{2, 1, 0}};
    Spectrum3D s(z);
    const auto dir = project_transverse(kb, CVec3{Complex(0.0), Complex(0.0), Complex(1.0)});
    s.set(kb, (env.value(kb) / magnitude(dir)) * dir);
    const auto chk = verify_inward(s, env, p, ForcingSpec{}, 0.0, kb, Part::Re, 1);
    const double want = dissipation_rate(p, kb) * env.value(kb);
    EXPECT_NEAR(chk.margin, want, 1e-12 * want);
    EXPECT_THROW(verify_inward(s, env, p, ForcingSpec{}, 0.0, kb, Part::Re, -1), Error);
}

TEST(VerifyInward, SaturatedForcingBreaksInwardness) {
    const double G = 1.0;
    auto z = make_truncation<2>(TruncationShape::Disk, 4.0);
    const auto env = Envelope::algebraic(G, 3.0, 1.5);
    const PhysicalParams p{1e-3, 2.0};
    ForcingSpec f;
    f.kind = ForcingKind::PowerLaw;
    f.amplitude = G;
    f.r = 3.0;
    f.epsilon = 0.5;
    f.phase_seed = 4;
    // the boundary mode whose forcing is most aligned with one component
    WaveVector2 kb{};
    Part part = Part::Re;
    double best = -1.0;
    for (std::size_t i = 0; i < z->canonical_count(); ++i) {
        const auto& k = z->canonical(i);
        if (!(k.norm() > env.K0)) continue;
        const Complex g = sample_forcing<2>(f, k, 0.0);
        const double c = std::max(std::abs(g.real()), std::abs(g.imag())) / std::abs(g);
        if (c > best) {
            best = c;
            kb = k;
            part = std::abs(g.real()) >= std::abs(g.imag()) ? Part::Re : Part::Im;
        }
    }
    const Complex g = sample_forcing<2>(f, kb, 0.0);
    const double gc = part == Part::Re ? g.real() : g.imag();
    const int sign = gc > 0 ? 1 : -1;
    Spectrum2D s(z);
    s.set(kb, part == Part::Re ? Complex(sign * env.value(kb), 0.0) : Complex(0.0, sign * env.value(kb)));
    const double pull = dissipation_rate(p, kb) * env.value(kb);
    ASSERT_GT(std::abs(gc), pull);
    for (int rep = 0; rep < 3; ++rep) {
        const auto chk = verify_inward(s, env, p, f, 0.0, kb, part, sign);
        EXPECT_FALSE(chk.holds);
        EXPECT_NEAR(chk.margin, pull - std::abs(gc), 1e-12 * std::abs(gc));
    }
}

TEST(VerifyInward, RandomBoundaryAuditAtCriticalWavenumber) {
    const auto s = thm1_setup();
    ASSERT_EQ(s.kc.K, 7.0);
    const auto cands = boundary_candidates(*s.z, s.env, s.e_star, s.kc.K);
    ASSERT_FALSE(cands.empty());
    std::mt19937_64 rng(2024);
    int failures = 0, compared = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto& kb = cands[rng() % cands.size()];
        const Part part = rng() % 2 ? Part::Re : Part::Im;
        const int sign = rng() % 2 ? 1 : -1;
        const auto st = boundary_state(s.z, s.env, s.e_star, kb, part, sign, 9000 + trial);
        ASSERT_LE(enstrophy(st), s.e_star);
        const auto chk = verify_inward(st, s.env, s.p, s.f, 0.0, kb, part, sign, &s.kc.condition);
        if (!chk.holds) ++failures;
        ASSERT_TRUE(chk.sufficient_margin.has_value());
        EXPECT_GT(*chk.sufficient_margin, 0.0);
        if (*chk.sufficient_margin > 0.0) {
            ++compared;
            EXPECT_GE(chk.margin, *chk.sufficient_margin) << to_string(kb);
        }
    }
    EXPECT_EQ(failures, 0);
    EXPECT_EQ(compared, 200);
}

TEST(VerifyInward, GevreyWeightMovesTheBoundary) {
    auto z = make_truncation<2>(TruncationShape::Disk, 5.0);
    const PhysicalParams p{0.3, 2.0};
    const auto env = Envelope::gevrey(1.0, 2.0, 0.2, 1.0);
    const WaveVector2 kb{{4, 1}};
    const double t = 0.5;
    Spectrum2D s(z);
    s.set(kb, Complex(env.value(kb, t), 0.0));
    const auto chk = verify_inward(s, env, p, ForcingSpec{}, t, kb, Part::Re, 1);
    const double want = (dissipation_rate(p, kb) - 0.2 * kb.norm()) * env.value(kb, t);
    EXPECT_NEAR(chk.margin, want, 1e-12 * want);
}

TEST(VerifyInward, Preconditions) {
    auto z = make_truncation<2>(TruncationShape::Disk, 5.0);
    const auto env = Envelope::algebraic(1.0, 2.0, 2.0);
    const WaveVector2 kb{{3, 0}};
    Spectrum2D s(z);
    s.set(kb, Complex(env.value(kb), 0.0));
    const PhysicalParams p;
    auto code_of = [&](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Domain;
    };
    EXPECT_EQ(code_of([&] { verify_inward(s, env, p, ForcingSpec{}, 0.0, kb, Part::Re, 0); }), ErrorCode::Precondition);
    EXPECT_EQ(code_of([&] { verify_inward(s, env, p, ForcingSpec{}, 0.0, kb, Part::Im, 1); }), ErrorCode::Precondition);
    EXPECT_EQ(code_of([&] { verify_inward(s, env, p, ForcingSpec{}, 0.0, WaveVector2{{1, 1}}, Part::Re, 1); }),
              ErrorCode::Precondition);
    s.set(WaveVector2{{4, 0}}, Complex(2.0 * env.value(4.0), 0.0));
    EXPECT_EQ(code_of([&] { verify_inward(s, env, p, ForcingSpec{}, 0.0, kb, Part::Re, 1); }), ErrorCode::Precondition);
}

TEST(BoundaryState, OnEnvelopeAndWithinBudget) {
    const auto s = thm1_setup();
    const auto cands = boundary_candidates(*s.z, s.env, s.e_star, s.kc.K);
    ASSERT_FALSE(cands.empty());
    for (const auto& k : cands) {
        EXPECT_GE(k.norm(), s.kc.K);
        EXPECT_LE(8.0 * s.env.value(k) * s.env.value(k), s.e_star);
    }
    const auto kb = -cands.front();
    const auto st = boundary_state(s.z, s.env, s.e_star, kb, Part::Im, -1, 3);
    EXPECT_NEAR(st.at(kb).imag(), -s.env.value(kb), 1e-15);
    EXPECT_TRUE(membership(st, s.env).inside);
    EXPECT_LE(enstrophy(st), s.e_star);
}

TEST(BoundaryState, ThreeDimensionalEnergyBudget) {
    auto z = make_truncation<3>(TruncationShape::Disk, 4.0);
    const auto env = Envelope::algebraic(0.5, 3.0, 2.0);
    const double e_star = 2e-3;
    const auto cands = boundary_candidates(*z, env, e_star, 2.0);
    ASSERT_FALSE(cands.empty());
    const auto st = boundary_state(z, env, e_star, cands.back(), Part::Re, 1, 8);
    EXPECT_LE(energy(st), e_star);
    EXPECT_LE(transversality_defect(st), kTransversalityTolerance);
    EXPECT_NEAR(part_magnitudes(st.at(cands.back()))[0], env.value(cands.back()), 1e-15);
    EXPECT_TRUE(membership(st, env).inside);
}

TEST(BoundaryState, ModeAloneOverBudget) {
    auto z = make_truncation<2>(TruncationShape::Disk, 4.0);
    try {
        boundary_state(z, Envelope::algebraic(10.0, 1.0, 1.0), 1e-3, WaveVector2{{3, 0}}, Part::Re, 1, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Precondition);
    }
}

TEST(ConservationRates, ZeroAndSinglePair) {
    auto z = make_truncation<2>(TruncationShape::Disk, 5.0);
    const auto c0 = conservation_rates(Spectrum2D(z));
    EXPECT_EQ(c0.d_enstrophy, 0.0);
    EXPECT_EQ(c0.d_energy, 0.0);
    Spectrum2D s(z);
    s.set(WaveVector2{{2, 3}}, Complex(1.0, -0.5));
    const auto c1 = conservation_rates(s);
    EXPECT_EQ(c1.d_enstrophy, 0.0);
    EXPECT_EQ(c1.d_energy, 0.0);
}

TEST(ConservationRates, HundredStatesOnDiskEight) {
    auto z = make_truncation<2>(TruncationShape::Disk, 8.0);
    System2D sys(z, PhysicalParams{}, ForcingSpec{});
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto s = random_state<2>(z, 3000 + seed, 1.0, 0.5 * (seed % 5));
        const auto c = conservation_rates(sys, s);
        EXPECT_LE(std::abs(c.d_enstrophy), 1e-12 * c.enstrophy_scale);
        EXPECT_LE(std::abs(c.d_energy), 1e-12 * c.enstrophy_scale);
    }
}

TEST(ConservationRates, ThreeDimensionalEnergy) {
    auto z = make_truncation<3>(TruncationShape::Disk, 3.0);
    System3D sys(z, PhysicalParams{}, ForcingSpec{});
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto c = conservation_rates(sys, random_state<3>(z, 40 + seed));
        EXPECT_LE(std::abs(c.d_energy), 1e-12 * c.energy_scale);
    }
}
