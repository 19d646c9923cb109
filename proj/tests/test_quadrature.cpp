#include <kgbohm/quadrature.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace kgbohm;

TEST(GK21, WeightsSumToTwo)
{
    double k = 0.0, g = 0.0;
    for (std::size_t i = 0; i < gk21::wgk.size(); ++i)
        k += (i == gk21::wgk.size() - 1 ? 1.0 : 2.0) * gk21::wgk[i];
    for (double w : gk21::wg)
        g += 2.0 * w;
    EXPECT_NEAR(k, 2.0, 1e-15);
    EXPECT_NEAR(g, 2.0, 1e-15);
}

TEST(GK21, IntegratesPolynomialsExactly)
{
    // Kronrod 21 is exact through degree 31.
    for (int deg : {0, 1, 5, 17, 30, 31}) {
        const auto r = integrate_adaptive<1>(
            [&](double x) { return ComplexVec<1>{complex(std::pow(x, deg), 0.0)}; }, {0.0, 1.0},
            1.0, 1);
        EXPECT_NEAR(r.value[0].real(), 1.0 / (deg + 1), 1e-15) << "degree " << deg;
    }
}

TEST(Adaptive, OscillatoryGaussian)
{
    // int exp(-x^2) cos(10 x) dx = sqrt(pi) exp(-25)
    const auto r = integrate_adaptive<1>(
        [](double x) { return ComplexVec<1>{std::polar(std::exp(-x * x), 10.0 * x)}; },
        {-12.0, 0.0, 12.0}, 1e-14, 200);
    EXPECT_NEAR(r.value[0].real(), std::sqrt(std::numbers::pi) * std::exp(-25.0), 1e-14);
    EXPECT_NEAR(r.value[0].imag(), 0.0, 1e-14);
    EXPECT_LE(r.error, 1e-14);
}

TEST(Adaptive, KinkOnBreakPointConvergesFast)
{
    const auto r = integrate_adaptive<1>(
        [](double x) { return ComplexVec<1>{complex(std::abs(x), 0.0)}; }, {-1.0, 0.0, 1.0}, 1e-14,
        2);
    EXPECT_NEAR(r.value[0].real(), 1.0, 1e-15);
    EXPECT_EQ(r.intervals, 2);
}

TEST(Adaptive, VectorComponentsShareSubdivision)
{
    const auto r = integrate_adaptive<2>(
        [](double x) {
            return ComplexVec<2>{complex(std::exp(x), 0.0), complex(0.0, std::sin(x))};
        },
        {0.0, std::numbers::pi}, 1e-13, 50);
    EXPECT_NEAR(r.value[0].real(), std::exp(std::numbers::pi) - 1.0, 1e-12);
    EXPECT_NEAR(r.value[1].imag(), 2.0, 1e-13);
}

TEST(Adaptive, ThrowsWhenSubdivisionBudgetIsExhausted)
{
    auto f = [](double x) { return ComplexVec<1>{complex(std::sqrt(std::abs(x - 0.3)), 0.0)}; };
    try {
        (void)integrate_adaptive<1>(f, {0.0, 1.0}, 1e-15, 4);
        FAIL() << "expected QuadratureError";
    } catch (const QuadratureError<1>& e) {
        EXPECT_EQ(e.best.intervals, 4);
        EXPECT_NEAR(e.best.value[0].real(), (2.0 / 3.0) * (std::pow(0.3, 1.5) + std::pow(0.7, 1.5)),
                    1e-3);
    }
}

TEST(QuadratureSpec, Validation)
{
    EXPECT_NO_THROW(validate(QuadratureSpec{}));
    EXPECT_THROW(validate(QuadratureSpec{0.0, 12.0, 60}), ConfigError);
    EXPECT_THROW(validate(QuadratureSpec{1e-10, -1.0, 60}), ConfigError);
    EXPECT_THROW(validate(QuadratureSpec{1e-10, 12.0, 0}), ConfigError);
}
