#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dbar/errors.hpp"
#include "dbar/sharpness.hpp"
#include "oracles.hpp"

using namespace dbar;

namespace {

constexpr double pi = std::numbers::pi;

// int over |beta| < acos(eps/2) of an even g(beta), the angular range of the punctured disc about
// z2 = 1. The integrand changes on the scale eps next to the endpoint, so panels shrink geometrically there.
double beta_integral(double eps, const std::function<double(double)>& g)
{
    const double b0 = std::acos(eps / 2.0);
    double s = 0.0, lo = 0.0, gap = b0 / 2.0;
    while (gap > 1e-4 * eps) {
        s += oracle::integrate(g, lo, b0 - gap, 8, 20);
        lo = b0 - gap;
        gap /= 2.0;
    }
    s += oracle::integrate(g, lo, b0, 4, 20);
    return 2.0 * s;
}

} // namespace

TEST(Sharpness, DatumValuesOnTheBranch)
{
    SharpnessConfig c;
    EXPECT_NEAR(std::abs(datum(c, 0.0) - cplx(0.0, 1.0)), 0.0, 1e-15);
    c.p = 2.0;
    c.q = {1.5};
    EXPECT_NEAR(std::abs(datum(c, 0.0) - cplx(0.0, pi)), 0.0, 1e-15);
    EXPECT_THROW(datum(c, 1.0), DomainError);
}

TEST(Sharpness, DatumIsContinuousAcrossTheRealAxis)
{
    for (double p : {2.0, 4.0, 6.0}) {
        SharpnessConfig c;
        c.p = p;
        c.k = 2;
        c.q = {1.5};
        for (double x : {-0.9, 0.0, 0.5, 0.99})
            EXPECT_NEAR(std::abs(datum(c, cplx(x, 1e-12)) - datum(c, cplx(x, -1e-12))), 0.0, 1e-9) << p << " " << x;
    }
}

TEST(Sharpness, DerivativesMatchFiniteDifferences)
{
    for (double p : {2.0, 4.0}) {
        SharpnessConfig c;
        c.p = p;
        c.k = 3;
        c.q = {1.5};
        const cplx z(-0.3, 0.4);
        const double h = 1e-4;
        for (int j = 1; j <= 3; ++j) {
            // holomorphic: the derivative along the real direction is d/dz2
            const cplx fd = (-datum_derivative(c, z + 2 * h, j - 1) + 8.0 * datum_derivative(c, z + h, j - 1) -
                             8.0 * datum_derivative(c, z - h, j - 1) + datum_derivative(c, z - 2 * h, j - 1)) /
                            (12 * h);
            EXPECT_NEAR(std::abs(datum_derivative(c, z, j) - fd), 0.0, 1e-8 * std::abs(fd)) << p << " " << j;
        }
    }
}

TEST(PuncturedDisc, AreaMatchesLensFormula)
{
    for (double e : {0.5, 1e-2, 1e-5}) {
        // unit disc minus the lens it shares with the disc of radius e about 1
        const double lens = e * e * std::acos(e / 2.0) + std::acos(1.0 - e * e / 2.0) - 0.5 * e * std::sqrt(4.0 - e * e);
        EXPECT_NEAR(punctured_disc_integral([](cplx) { return 1.0; }, e, 16), pi - lens, 1e-12);
    }
}

TEST(PuncturedDisc, InverseSquareMatchesRadialIntegral)
{
    for (double e : {1e-2, 1e-5}) {
        const double expected = beta_integral(e, [e](double b) { return std::log(2.0 * std::cos(b) / e); });
        EXPECT_NEAR(punctured_disc_integral([](cplx z) { return 1.0 / std::norm(z - 1.0); }, e, 16), expected,
                    1e-11 * expected);
    }
}

TEST(Sharpness, DatumNormsMatchAnalyticRadialIntegrals)
{
    SharpnessConfig c; // k = 1, p = 4, so f = (z2 - 1)^{1/2}, f' = (z2 - 1)^{-1/2} / 2
    const auto rows = datum_sobolev_norms(c);
    ASSERT_EQ(rows.size(), 12u);
    for (const auto& r : rows) {
        const double q = r.q, e = r.eps;
        const double expected = pi * beta_integral(e, [&](double b) {
            const double R = 2.0 * std::cos(b);
            const double a = q / 2.0 + 2.0, s = 2.0 - q / 2.0;
            const double tail = s == 0.0 ? std::log(R / e) : (std::pow(R, s) - std::pow(e, s)) / s;
            return (std::pow(R, a) - std::pow(e, a)) / a + std::pow(2.0, -q) * tail;
        });
        EXPECT_NEAR(r.norm_q, expected, 1e-10 * expected) << q << " " << e;
        EXPECT_EQ(r.diagnostic, q == 4.0);
    }
}

TEST(Sharpness, ObstructionMatchesAnalyticIntegral)
{
    const SharpnessConfig c;
    for (const auto& r : circle_average_obstruction(c)) {
        const double z2 = beta_integral(r.eps, [&](double b) { return std::log(2.0 * std::cos(b) / r.eps); });
        EXPECT_NEAR(r.norm_p, z2 / 9.0, 1e-11 * r.norm_p);
    }
}

TEST(Sharpness, LogFitRecoversExactLine)
{
    std::vector<ObstructionRow> rows;
    for (double e : {1e-1, 1e-2, 1e-3})
        rows.push_back({e, 0.7 + 0.25 * std::log(1.0 / e)});
    const auto f = fit_log_growth(rows);
    EXPECT_NEAR(f.a, 0.7, 1e-13);
    EXPECT_NEAR(f.b, 0.25, 1e-13);
    EXPECT_NEAR(f.r2, 1.0, 1e-13);
    EXPECT_ANY_THROW(fit_log_growth({rows[0]}));
}

TEST(Sharpness, VerdictOnDefaultConfiguration)
{
    const auto rep = sharpness_verdict(SharpnessConfig{});
    EXPECT_TRUE(rep.pass) << rep.detail;
    EXPECT_GT(rep.fit.b, 0.0);
    EXPECT_GE(rep.fit.r2, 0.99);
    EXPECT_NEAR(rep.fit.b, pi / 9.0, 2e-3);
    EXPECT_LT(rep.cauchy_residual, 1e-10);
    EXPECT_TRUE(rep.monotone);
    for (double t : rep.tail_change)
        EXPECT_LE(t, 0.01);
}

TEST(Sharpness, ConfigValidation)
{
    SharpnessConfig c;
    c.q = {4.5};
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.eps = {0.0};
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.p = 1.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.eps.clear();
    EXPECT_THROW(c.validate(), ConfigError);
}
