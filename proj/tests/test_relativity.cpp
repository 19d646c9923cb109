#include <kgbohm/relativity.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace kgbohm;

namespace {
const PhysConfig fig1 = validate(PhysConfig{10.0, 1.0, 0.83});
const PhysConfig right_only = validate(PhysConfig{10.0, 1.0, 1.0});
const BoostFrame frame(0.4);

std::vector<Trajectory> figure_trajectories(const PhysConfig& c, int n)
{
    StepControl ctrl;
    ctrl.x_min = -4.0;
    ctrl.x_max = 4.0;
    return integrate_ensemble(c, initial_positions(c, n, -2.0, -4.0, 4.0), -2.0, 3.0, ctrl);
}
}

TEST(BoostFrame, Validation)
{
    EXPECT_THROW(BoostFrame(1.0), ConfigError);
    EXPECT_THROW(BoostFrame(-1.2), ConfigError);
    EXPECT_THROW(BoostFrame(std::nan("")), ConfigError);
    EXPECT_NEAR(frame.gamma(), 1.09109, 1e-5);
}

TEST(BoostFrame, CompositionIsVelocityAddition)
{
    const BoostFrame total = BoostFrame(0.4).then(BoostFrame(0.5));
    EXPECT_NEAR(total.theta(), 0.9 / 1.2, 1e-15);
    EXPECT_NEAR(frame.then(frame.inverse()).theta(), 0.0, 1e-16);
}

TEST(BoostPoint, Values)
{
    EXPECT_EQ(boost_point(frame, {0.0, 0.0}), (SpacetimePoint{0.0, 0.0}));
    const auto p = boost_point(frame, {1.0, 0.0});
    EXPECT_NEAR(p.t, 1.09109, 1e-5);
    EXPECT_NEAR(p.x, -0.43644, 1e-5);
}

TEST(BoostPoint, IntervalInvariance)
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int n = 0; n < 100; ++n) {
        const SpacetimePoint p{d(rng), d(rng)};
        const SpacetimePoint q = boost_point(frame, p);
        EXPECT_NEAR(q.t * q.t - q.x * q.x, p.t * p.t - p.x * p.x, 1e-12);
        const SpacetimePoint back = boost_point(frame.inverse(), q);
        EXPECT_NEAR(back.t, p.t, 1e-14);
        EXPECT_NEAR(back.x, p.x, 1e-14);
    }
}

TEST(BoostVelocity, Values)
{
    for (double th : {-0.9, -0.4, 0.0, 0.4, 0.9})
        EXPECT_DOUBLE_EQ(boost_velocity(BoostFrame(th), 1.0), 1.0);
    EXPECT_DOUBLE_EQ(boost_velocity(frame, 0.0), -0.4);
    EXPECT_NEAR(boost_velocity(frame, 0.9), 0.78125, 1e-15);
}

TEST(BoostVelocity, PolesAndInfiniteInput)
{
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_EQ(boost_velocity(frame, 2.5), inf);
    EXPECT_DOUBLE_EQ(boost_velocity(frame, inf), -2.5);
    EXPECT_DOUBLE_EQ(boost_velocity(frame, -inf), -2.5);
    EXPECT_LT(boost_velocity(frame, 2.6), 0.0);
}

TEST(BoostCurrent, Values)
{
    const double g = frame.gamma();
    const auto null = boost_current(frame, {1.0, 1.0, Mode::exact});
    EXPECT_NEAR(null.rho, g * 0.6, 1e-15);
    EXPECT_NEAR(null.j, g * 0.6, 1e-15);
    const auto rest = boost_current(frame, {1.0, 0.0, Mode::exact});
    EXPECT_NEAR(rest.rho, 1.09109, 1e-5);
    EXPECT_NEAR(rest.j, -0.43644, 1e-5);
    EXPECT_THROW((void)boost_current(frame, {1.0, 0.0, Mode::printed}), ConfigError);
}

TEST(BoostCurrent, MassDensityIsInvariant)
{
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int n = 0; n < 200; ++n) {
        const auto cs = current(fig1, {d(rng), d(rng)});
        const auto b = boost_current(frame, cs);
        EXPECT_NEAR((b.rho - b.j) * (b.rho + b.j), (cs.rho - cs.j) * (cs.rho + cs.j), 1e-12);
    }
}

TEST(CurrentInFrame, AgreesWithBoostedCurrent)
{
    // Differentiating the scalar field in primed coordinates reproduces the
    // vector transformation of the lab current.
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int n = 0; n < 200; ++n) {
        const SpacetimePoint lab{d(rng), d(rng)};
        const auto expected = boost_current(frame, current(fig1, lab));
        const auto got = current_in_frame(fig1, frame, boost_point(frame, lab));
        EXPECT_NEAR(got.rho, expected.rho, 1e-12);
        EXPECT_NEAR(got.j, expected.j, 1e-12);
    }
}

TEST(BoostTrajectory, NullLineStaysNull)
{
    const auto lab = integrate(right_only, 0.2, -2.0, 2.0, {});
    const auto b = boost_trajectory(frame, lab);
    for (const auto& s : b.samples) {
        EXPECT_DOUBLE_EQ(s.v, 1.0);
        EXPECT_GT(s.dt_ds, 0.0);
        EXPECT_NEAR(s.dt_ds, s.dx_ds, 1e-15);
    }
    EXPECT_TRUE(detect_retropropagation(frame, b).empty());
    EXPECT_TRUE(detect_retropropagation(BoostFrame(-0.9), boost_trajectory(BoostFrame(-0.9), lab))
                    .empty());
}

TEST(BoostTrajectory, IdentityBoost)
{
    const auto lab = integrate(fig1, 0.1, -2.0, 2.0, {});
    const BoostFrame id(0.0);
    const auto b = boost_trajectory(id, lab);
    ASSERT_EQ(b.samples.size(), lab.samples.size());
    for (std::size_t i = 0; i < lab.samples.size(); ++i) {
        EXPECT_EQ(b.samples[i].t, lab.samples[i].t);
        EXPECT_EQ(b.samples[i].x, lab.samples[i].x);
        EXPECT_EQ(b.samples[i].rho, lab.samples[i].rho);
        EXPECT_EQ(b.samples[i].j, lab.samples[i].j);
    }
    EXPECT_TRUE(detect_retropropagation(id, b).empty());
}

TEST(Retropropagation, FigureTwoIntervalsHaveNegativeDensity)
{
    std::size_t intervals = 0;
    for (const auto& lab : figure_trajectories(fig1, 40)) {
        const auto b = boost_trajectory(frame, lab);
        for (const auto& iv : detect_retropropagation(frame, b)) {
            ++intervals;
            EXPECT_LT(iv.max_rho_prime, 0.0);
            EXPECT_LT(iv.max_mbar_sq, 0.0);
            EXPECT_LE(iv.s_start, iv.s_end);
            for (std::size_t k = iv.first; k <= iv.last; ++k) {
                EXPECT_LT(b.samples[k].dt_ds, 0.0);
                EXPECT_LT(current_in_frame(fig1, frame, {b.samples[k].t, b.samples[k].x}).rho, 0.0);
            }
        }
    }
    EXPECT_GT(intervals, 0u);
}

TEST(Retropropagation, CompositionRestoresSamples)
{
    for (const auto& lab : figure_trajectories(fig1, 10)) {
        const auto back = boost_trajectory(frame.inverse(), boost_trajectory(frame, lab));
        for (std::size_t i = 0; i < lab.samples.size(); ++i) {
            EXPECT_NEAR(back.samples[i].t, lab.samples[i].t, 1e-12);
            EXPECT_NEAR(back.samples[i].x, lab.samples[i].x, 1e-12);
            EXPECT_NEAR(back.samples[i].rho, lab.samples[i].rho, 1e-12);
            EXPECT_NEAR(back.samples[i].j, lab.samples[i].j, 1e-12);
        }
    }
}

TEST(IntegrateInFrame, ReproducesBoostedWorldline)
{
    // Integrate directly in the primed frame over a stretch free of
    // retropropagation and compare with the boosted lab worldline.
    const auto lab = integrate(fig1, -3.2, -2.0, 0.0, {});
    const auto b = boost_trajectory(frame, lab);
    const auto primed = integrate_in_frame(fig1, frame, {b.samples.front().t, b.samples.front().x},
                                           1.0, 0.002);
    EXPECT_EQ(primed.termination, Termination::completed);
    EXPECT_LT(max_deviation_from(lab, frame, primed), 1e-5);
}
