#include <kgbohm/oracle.hpp>
#include <kgbohm/quadrature.hpp>
#include <kgbohm/wavepacket.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace kgbohm;

namespace {
const PhysConfig fig1 = validate(PhysConfig{10.0, 1.0, 0.83});
}

TEST(MomentumAmplitude, PeakOfSinglePacketIsTheNormalization)
{
    const PhysConfig c = validate(PhysConfig{10.0, 1.0, 1.0});
    EXPECT_DOUBLE_EQ(momentum_amplitude(c, 10.0), momentum_normalization(c));
}

TEST(MomentumAmplitude, SymmetricMixtureAtZero)
{
    const PhysConfig c = validate(PhysConfig{10.0, 1.0, 0.5});
    const double expected = std::sqrt(0.5) * momentum_normalization(c) * 2.0 * std::exp(-25.0);
    EXPECT_NEAR(momentum_amplitude(c, 0.0), expected, 1e-12 * expected);
}

TEST(MomentumAmplitude, IsNormalized)
{
    const double K = fig1.k0 + 12.0 * fig1.sigma;
    const auto r = integrate_adaptive<1>(
        [&](double k) {
            const double f = momentum_amplitude(fig1, k);
            return ComplexVec<1>{complex(f * f, 0.0)};
        },
        {-K, 0.0, K}, 1e-13, 200);
    EXPECT_NEAR(r.value[0].real(), 1.0, 1e-10);
}

TEST(PsiClosed, PeakOfRightMover)
{
    const PhysConfig c = validate(PhysConfig{10.0, 1.0, 1.0});
    for (double t : {-1.0, 0.0, 0.7}) {
        const complex psi = psi_closed(c, {t, t}).psi;
        EXPECT_NEAR(std::abs(psi), std::pow(2.0 / std::numbers::pi, 0.25), 1e-15);
        EXPECT_NEAR(psi.imag(), 0.0, 1e-15);
    }
}

TEST(PsiClosed, SolvesTheWaveEquation)
{
    // second differences of psi in t and x agree (box psi = 0)
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    const double h = 1e-3;
    for (int n = 0; n < 20; ++n) {
        const SpacetimePoint p{d(rng), d(rng)};
        auto psi = [&](double t, double x) { return psi_closed(fig1, {t, x}).psi; };
        const complex tt = psi(p.t + h, p.x) - 2.0 * psi(p.t, p.x) + psi(p.t - h, p.x);
        const complex xx = psi(p.t, p.x + h) - 2.0 * psi(p.t, p.x) + psi(p.t, p.x - h);
        EXPECT_LT(std::abs(tt - xx) / (h * h), 1e-5);
    }
}

TEST(PsiClosed, DerivativesMatchFiniteDifferences)
{
    const SpacetimePoint p{0.31, -0.27};
    const double h = 1e-6;
    const PsiJet jet = psi_closed(fig1, p);
    const complex dt = (psi_closed(fig1, {p.t + h, p.x}).psi - psi_closed(fig1, {p.t - h, p.x}).psi)
        / (2.0 * h);
    const complex dx = (psi_closed(fig1, {p.t, p.x + h}).psi - psi_closed(fig1, {p.t, p.x - h}).psi)
        / (2.0 * h);
    EXPECT_LT(std::abs(jet.d_t - dt), 1e-7 * std::abs(jet.d_t));
    EXPECT_LT(std::abs(jet.d_x - dx), 1e-7 * std::abs(jet.d_x));
}

TEST(PsiClosed, MatchesQuadratureOracle)
{
    double worst = 0.0, peak = 0.0;
    for (int i = 0; i < 11; ++i)
        for (int k = 0; k < 11; ++k) {
            const SpacetimePoint p{-3.0 + 0.6 * i, -3.0 + 0.6 * k};
            const complex a = psi_closed(fig1, p).psi;
            worst = std::max(worst, std::abs(a - psi_quadrature(fig1, p).value()));
            peak = std::max(peak, std::abs(a));
        }
    EXPECT_LT(worst, 1e-8 * peak);
}

TEST(PsiClosed, IncoherentBoundDominates)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int n = 0; n < 200; ++n) {
        const PsiJet jet = psi_closed(fig1, {d(rng), d(rng)});
        EXPECT_LE(std::abs(jet.psi), jet.incoherent * (1.0 + 1e-15));
    }
}
