#include "galerkin/dynamics.hpp"
#include "galerkin/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace galerkin;

namespace {

double max_rel_dev(const Spectrum2D& a, const Spectrum2D& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::abs(a[i] - b[i]));
        den = std::max(den, std::abs(b[i]));
    }
    return den == 0.0 ? num : num / den;
}

double max_rel_dev(const Spectrum3D& a, const Spectrum3D& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, magnitude(a[i] - b[i]));
        den = std::max(den, magnitude(b[i]));
    }
    return den == 0.0 ? num : num / den;
}

ForcingSpec decaying_forcing() {
    ForcingSpec f;
    f.kind = ForcingKind::PowerLaw;
    f.amplitude = 0.8;
    f.r = 3.0;
    f.epsilon = 0.5;
    f.temporal = TemporalKind::Sinusoid;
    f.frequency = 0.3;
    f.phase_seed = 5;
    return f;
}

} // namespace

TEST(Nonlinear2D, AxisModesCancelOnDiagonal) {
    auto z = make_truncation<2>(TruncationShape::Square, 1.0);
    Spectrum2D s(z);
    s.set(WaveVector2{{1, 0}}, Complex(0.3, -1.1));
    s.set(WaveVector2{{0, 1}}, Complex(-0.7, 0.4));
    EXPECT_EQ(nonlinear_2d(s).at(WaveVector2{{1, 1}}), Complex(0.0));
    EXPECT_EQ(nonlinear_2d_brute(s).at(WaveVector2{{1, 1}}), Complex(0.0));
}

TEST(Nonlinear2D, SinglePairIsStationary) {
    auto z = make_truncation<2>(TruncationShape::Disk, 3.0);
    Spectrum2D s(z);
    s.set(WaveVector2{{2, 1}}, Complex(1.5, 0.5));
    const auto n = nonlinear_2d(s);
    for (const auto& v : n.values()) EXPECT_EQ(v, Complex(0.0));
}

TEST(Nonlinear2D, TwoModeTriad) {
    auto z = make_truncation<2>(TruncationShape::Disk, 2.3);
    Spectrum2D s(z);
    const Complex a(0.6, -0.2), b(-0.3, 0.9);
    s.set(WaveVector2{{1, 0}}, a);
    s.set(WaveVector2{{1, 1}}, b);
    // coefficients -1/2 (l2 = (1,1)) and +1 (l2 = (1,0)); real-valued in this form
    const Complex want = 0.5 * a * b;
    const Complex got = nonlinear_2d(s).at(WaveVector2{{2, 1}});
    EXPECT_NEAR(std::abs(got - want), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(nonlinear_2d_brute(s).at(WaveVector2{{2, 1}}) - want), 0.0, 1e-16);
}

TEST(Nonlinear2D, MatchesDoubleLoop) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto s = random_state<2>(make_truncation<2>(TruncationShape::Disk, 5.0), seed);
        EXPECT_LE(max_rel_dev(nonlinear_2d(s), nonlinear_2d_brute(s)), 1e-13);
    }
}

TEST(Nonlinear2D, MatchesAdvectionInPhysicalForm) {
    // -(u . grad w)_k computed from velocities, for a few modes
    auto s = random_state<2>(make_truncation<2>(TruncationShape::Disk, 3.0), 9);
    const auto& z = s.truncation();
    const auto u = velocity_from_vorticity_2d(s);
    auto u_at = [&](const WaveVector2& l) {
        const auto sl = z.slot_of(*z.index_of(l));
        return sl.conjugate ? conj(u.values[sl.index]) : u.values[sl.index];
    };
    const auto n = nonlinear_2d(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& k = s.wave(i);
        Complex adv = 0.0;
        for (const auto& l1 : z.members()) {
            const auto l2 = k - l1;
            if (!z.contains(l2)) continue;
            const auto v = u_at(l2);
            adv += (v[0] * Complex(0.0, 2.0 * std::numbers::pi * l1[0]) + v[1] * Complex(0.0, 2.0 * std::numbers::pi * l1[1])) * s.at(l1);
        }
        EXPECT_NEAR(std::abs(n[i] + adv), 0.0, 1e-12 * (1.0 + std::abs(adv)));
    }
}

TEST(Nonlinear2D, ConservesEnstrophyAndEnergy) {
    for (auto shape : {TruncationShape::Disk, TruncationShape::Square})
        for (double K : {2.0, 4.5, 7.0})
            for (std::uint64_t seed : {1u, 2u, 3u}) {
                auto s = random_state<2>(make_truncation<2>(shape, K), seed);
                const auto c = conservation_rates(s);
                EXPECT_LE(std::abs(c.d_enstrophy), 1e-12 * c.enstrophy_scale);
                EXPECT_LE(std::abs(c.d_energy), 1e-12 * c.energy_scale);
            }
}

TEST(Rhs2D, IsolatedModeDecays) {
    auto z = make_truncation<2>(TruncationShape::Disk, 2.0);
    Spectrum2D s(z);
    s.set(WaveVector2{{1, 0}}, Complex(2.0, 1.0));
    const auto r = rhs_2d(s, PhysicalParams{1.0, 2.0}, ForcingSpec{}, 0.0);
    EXPECT_NEAR(std::abs(r.at(WaveVector2{{1, 0}}) + 4 * std::numbers::pi * std::numbers::pi * Complex(2.0, 1.0)), 0.0, 1e-12);
    for (const auto& k : z->members()) {
        if (k.norm2() != 1) {
            EXPECT_EQ(r.at(k), Complex(0.0));
        }
    }
}

TEST(Rhs2D, RestStateIsEquilibrium) {
    Spectrum2D s(make_truncation<2>(TruncationShape::Disk, 4.0));
    const auto r = rhs_2d(s, PhysicalParams{}, ForcingSpec{}, 1.0);
    for (const auto& v : r.values()) EXPECT_EQ(v, Complex(0.0));
}

TEST(Rhs2D, RecompositionIsExact) {
    auto s = random_state<2>(make_truncation<2>(TruncationShape::Disk, 6.0), 4);
    const PhysicalParams p{0.3, 2.5};
    const auto f = decaying_forcing();
    const double t = 0.7;
    const auto r = rhs_2d(s, p, f, t);
    const auto n = nonlinear_2d(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& k = s.wave(i);
        const Complex want = n[i] + (-dissipation_rate(p, k)) * s[i] + sample_forcing<2>(f, k, t);
        EXPECT_EQ(r[i], want);
    }
}

TEST(Rhs2D, AgreesWithSingleModeOracle) {
    auto s = random_state<2>(make_truncation<2>(TruncationShape::Disk, 4.0), 21);
    const PhysicalParams p{0.1, 1.5};
    const auto f = decaying_forcing();
    const auto r = rhs_2d(s, p, f, 0.2);
    for (std::size_t i = 0; i < s.size(); ++i)
        EXPECT_LE(std::abs(r[i] - tendency_at(s, p, f, 0.2, s.wave(i))), 1e-12 * (1.0 + std::abs(r[i])));
}

TEST(RealSplit, AgreesWithComplexPath) {
    const PhysicalParams p{0.05, 2.0};
    const auto f = decaying_forcing();
    auto z = make_truncation<2>(TruncationShape::Disk, 4.0);
    System2D sys(z, p, f);
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto s = random_state<2>(z, 1000 + seed, 1.0, 1.0);
        const auto want = split(rhs_2d(s, p, f, 0.1 * seed));
        const auto got = rhs_2d_real_split(sys, split(s), 0.1 * seed);
        double scale = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) scale = std::max({scale, std::abs(want.re[i]), std::abs(want.im[i])});
        for (std::size_t i = 0; i < s.size(); ++i)
            worst = std::max({worst, std::abs(got.re[i] - want.re[i]) / scale, std::abs(got.im[i] - want.im[i]) / scale});
    }
    EXPECT_LE(worst, 1e-12);
}

TEST(RealSplit, PurelyRealSpectrumSignPattern) {
    // real w gives real products, so the imaginary tendency is -lambda * 0 = 0
    auto z = make_truncation<2>(TruncationShape::Disk, 3.0);
    Spectrum2D s(z);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = Complex(1.0 / (1.0 + i), 0.0);
    const auto out = rhs_2d_real_split(split(s), z, PhysicalParams{}, ForcingSpec{}, 0.0);
    for (double v : out.im) EXPECT_EQ(v, 0.0);
    // purely imaginary w: every product is real, so only the real part is driven
    Spectrum2D q(z);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = Complex(0.0, 1.0 / (1.0 + i));
    const auto nq = rhs_2d_real_split(split(q), z, PhysicalParams{}, ForcingSpec{}, 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) EXPECT_EQ(nq.im[i], -dissipation_rate(PhysicalParams{}, q.wave(i)) * q[i].imag());
}

TEST(RealSplit, ZeroStateZeroTendency) {
    auto z = make_truncation<2>(TruncationShape::Disk, 3.0);
    const auto out = rhs_2d_real_split(split(Spectrum2D(z)), z, PhysicalParams{}, ForcingSpec{}, 0.0);
    for (std::size_t i = 0; i < out.re.size(); ++i) {
        EXPECT_EQ(out.re[i], 0.0);
        EXPECT_EQ(out.im[i], 0.0);
    }
}

TEST(Nonlinear3D, SinglePairAndZero) {
    auto z = make_truncation<3>(TruncationShape::Disk, 2.0);
    Spectrum3D s(z);
    const auto n0 = nonlinear_3d(s);
    for (const auto& v : n0.values()) EXPECT_EQ(v, (CVec3{}));
    s.set(WaveVector3{{1, 1, 0}}, CVec3{Complex(0.0, 1.0), Complex(0.0, -1.0), Complex(2.0, 0.0)});
    const auto n1 = nonlinear_3d(s);
    for (const auto& v : n1.values()) EXPECT_LE(magnitude(v), 1e-15);
}

TEST(Nonlinear3D, TwoModeStateMatchesUnreducedForm) {
    auto z = make_truncation<3>(TruncationShape::Disk, 2.0);
    Spectrum3D s(z);
    s.set(WaveVector3{{1, 0, 0}}, CVec3{0.0, Complex(0.5, 0.2), Complex(-0.1, 0.7)});
    s.set(WaveVector3{{0, 1, 1}}, project_transverse(WaveVector3{{0, 1, 1}}, CVec3{Complex(0.3), Complex(0.0, 1.0), 0.4}));
    EXPECT_LE(max_rel_dev(nonlinear_3d(s), nonlinear_3d_unreduced(s)), 1e-12);
}

TEST(Nonlinear3D, FormsAgreeOnRandomStates) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        auto s = random_state<3>(make_truncation<3>(TruncationShape::Disk, 2.5), seed);
        EXPECT_LE(max_rel_dev(nonlinear_3d(s), nonlinear_3d_unreduced(s)), 1e-12);
    }
}

TEST(Nonlinear3D, ConservesEnergy) {
    for (double K : {2.0, 3.0})
        for (std::uint64_t seed : {7u, 8u}) {
            auto s = random_state<3>(make_truncation<3>(TruncationShape::Disk, K), seed);
            const auto c = conservation_rates(s);
            EXPECT_LE(std::abs(c.d_energy), 1e-12 * c.energy_scale);
        }
}

TEST(Nonlinear3D, RejectsLongitudinalInput) {
    auto z = make_truncation<3>(TruncationShape::Disk, 1.0);
    Spectrum3D s(z);
    s.set(WaveVector3{{0, 0, 1}}, CVec3{0.0, 0.0, 1.0});
    EXPECT_THROW(nonlinear_3d(s), Error);
}

TEST(Rhs3D, IsolatedModeDecay) {
    auto z = make_truncation<3>(TruncationShape::Disk, 2.0);
    Spectrum3D s(z);
    const CVec3 w{0.0, Complex(1.0, 1.0), 0.0};
    s.set(WaveVector3{{1, 0, 0}}, w);
    const PhysicalParams p{0.5, 2.5};
    const auto r = rhs_3d(s, p, ForcingSpec{}, 0.0);
    EXPECT_LE(magnitude(r.at(WaveVector3{{1, 0, 0}}) + 2.0 * std::numbers::pi * kPi * w), 1e-12);
}

TEST(Rhs3D, TendencyIsTransversalAndRecomposes) {
    auto s = random_state<3>(make_truncation<3>(TruncationShape::Disk, 2.5), 3);
    ForcingSpec f;
    f.kind = ForcingKind::TrigPoly;
    f.amplitude = 0.4;
    f.band = {{1, 1, 0}, {0, 0, 2}};
    const PhysicalParams p{0.2, 2.0};
    const auto r = rhs_3d(s, p, f, 0.0);
    const auto n = nonlinear_3d(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& k = s.wave(i);
        EXPECT_LE(std::abs(dot(r[i], k)), 1e-13 * (1.0 + magnitude(r[i])));
        const CVec3 want = project_transverse(k, n[i] + (-dissipation_rate(p, k)) * s[i] + sample_forcing<3>(f, k, 0.0));
        EXPECT_EQ(r[i], want);
        EXPECT_LE(magnitude(r[i] - tendency_at(s, p, f, 0.0, k)), 1e-12 * (1.0 + magnitude(r[i])));
    }
}

TEST(Dissipation, NonIntegerExponent) {
    EXPECT_NEAR(dissipation_rate(PhysicalParams{0.5, 1.5}, WaveVector2{{3, 4}}), 2.0 * std::numbers::pi * kPi * std::pow(5.0, 1.5), 1e-10);
    EXPECT_THROW((PhysicalParams{0.0, 2.0}).validate(), Error);
    EXPECT_THROW((PhysicalParams{1.0, 1.0}).validate(), Error);
}
