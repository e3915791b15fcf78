#include <gtest/gtest.h>

#include <cmath>

#include "dbar/density.hpp"
#include "dbar/errors.hpp"
#include "oracles.hpp"

using namespace dbar;

namespace {

ExactDensity sample_density()
{
    ExactDensity f(2, 3);
    f.accumulate(Monomial{{2, 1}, {0, 3}}, GaussianRational(1, 2, 3));
    f.accumulate(Monomial{{1, 1}, {1, 0}}, GaussianRational(-5, 0, 4));
    f.accumulate(Monomial{{0, 0}, {0, 0}}, GaussianRational(0, 1));
    return f;
}

} // namespace

TEST(MonomialDensity, DegreeBoundIsEnforced)
{
    ExactDensity f(1, 2);
    EXPECT_THROW(f.accumulate(Monomial{{3, 0}}, GaussianRational(1)), ShapeError);
    EXPECT_THROW(f.accumulate(Monomial{{1, 0}, {0, 0}}, GaussianRational(1)), ShapeError);
    EXPECT_THROW(ExactDensity(0, 2), ShapeError);
}

TEST(MonomialDensity, CancellationDropsTerms)
{
    const auto f = sample_density();
    EXPECT_TRUE((f - f).is_zero());
    EXPECT_EQ(f.size(), 3u);
    EXPECT_EQ(f.actual_degree(), 3);
}

TEST(MonomialDensity, WirtingerDerivativesMatchFiniteDifferences)
{
    const auto f = sample_density();
    const std::vector<cplx> z{{0.3, -0.2}, {-0.1, 0.4}};
    const double h = 1e-5;
    for (std::size_t j = 0; j < 2; ++j) {
        auto at = [&](cplx d) {
            auto w = z;
            w[j] += d;
            return f.evaluate(w);
        };
        const cplx fx = (at(h) - at(-h)) / (2 * h);
        const cplx fy = (at(cplx(0, h)) - at(cplx(0, -h))) / (2 * h);
        const cplx d = 0.5 * (fx - cplx(0, 1) * fy);
        const cplx db = 0.5 * (fx + cplx(0, 1) * fy);
        EXPECT_NEAR(std::abs(dz(f, j).evaluate(z) - d), 0.0, 1e-9);
        EXPECT_NEAR(std::abs(dzbar(f, j).evaluate(z) - db), 0.0, 1e-9);
    }
}

TEST(MonomialDensity, LaplacianOfModulusSquared)
{
    const auto r2 = ExactDensity::monomial(Monomial{{1, 1}}, GaussianRational(1));
    EXPECT_EQ(laplacian(r2, 0), ExactDensity::constant(1, GaussianRational(4)));
}

TEST(MonomialDensity, ConjugateEvaluatesToConjugate)
{
    const auto f = sample_density();
    const std::vector<cplx> z{{0.3, -0.2}, {-0.1, 0.4}};
    EXPECT_NEAR(std::abs(conjugate(f).evaluate(z) - std::conj(f.evaluate(z))), 0.0, 1e-15);
}

TEST(InnerProduct, MonomialsMatchQuadrature)
{
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b) {
            const auto u = FloatDensity::monomial(Monomial{{a, b}}, 1.0);
            const auto v = FloatDensity::monomial(Monomial{{b, a}}, 1.0);
            const cplx q = oracle::disc_integral_about(0.0, [&](cplx w, double rho, double) {
                return rho * std::pow(w, a) * std::pow(std::conj(w), b) * std::conj(std::pow(w, b) * std::pow(std::conj(w), a));
            });
            EXPECT_NEAR(std::abs(inner_product(u, v).value() - q), 0.0, 1e-10) << a << "," << b;
        }
}

TEST(InnerProduct, ExactOnBidiscIsConjugateSymmetric)
{
    const auto f = sample_density();
    auto g = ExactDensity::monomial(Monomial{{1, 0}, {0, 2}}, GaussianRational(2, -1, 7), 3);
    g.accumulate(Monomial{{2, 2}, {1, 1}}, GaussianRational(3));
    const auto fg = inner_product(f, g);
    const auto gf = inner_product(g, f);
    EXPECT_EQ(fg.pi_power, 2);
    EXPECT_EQ(fg.coefficient, gf.coefficient.conj());
    // |z1|^2 over the bidisc integrates to pi^2 / 2
    const auto r2 = ExactDensity::monomial(Monomial{{1, 1}, {0, 0}}, GaussianRational(1));
    const auto one = ExactDensity::constant(2, GaussianRational(1));
    EXPECT_EQ(inner_product(r2, one).coefficient, GaussianRational(1, 0, 2));
    EXPECT_THROW(inner_product(r2, ExactDensity::constant(1, GaussianRational(1))), ShapeError);
}

TEST(MonomialDensity, ExactPathRejectsConformalSlices)
{
    EXPECT_THROW(require_disc(SliceDomain::conformal({0.0, 1.0, 0.1}), "test"), RepresentationError);
    EXPECT_NO_THROW(require_disc(SliceDomain::unit_disc(), "test"));
}
