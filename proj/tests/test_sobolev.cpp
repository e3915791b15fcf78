#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dbar/errors.hpp"
#include "dbar/sobolev.hpp"
#include "oracles.hpp"

using namespace dbar;

namespace {

constexpr double pi = std::numbers::pi;

FloatDensity fmono(Monomial m, cplx c = 1.0) { return FloatDensity::monomial(m, c); }

} // namespace

TEST(SobolevIndex, Validation)
{
    EXPECT_THROW(SobolevIndex(-1, 2.0), IndexError);
    EXPECT_THROW(SobolevIndex(1, 1.0), IndexError);
    EXPECT_THROW(SobolevIndex(1, 0.5), IndexError);
    EXPECT_THROW(SobolevIndex(1, INFINITY), IndexError);
    EXPECT_THROW(SobolevIndex(1, NAN), IndexError);
    EXPECT_NO_THROW(SobolevIndex(0, 1.5));
}

TEST(DerivativeIndices, CountsAndOrdering)
{
    EXPECT_EQ(derivative_indices(1, 1).size(), 3u);
    EXPECT_EQ(derivative_indices(2, 2).size(), 15u);
    const auto g = derivative_indices(2, 1);
    EXPECT_EQ(order(g.front()), 0);
    EXPECT_EQ(to_string(g.front()), "id");
    EXPECT_EQ(to_string(DerivativeIndex{1, 0, 0, 2}), "d1^1db2^2");
}

TEST(SobolevNorm, HandComputedValues)
{
    EXPECT_NEAR(sobolev_norm(FloatDensity::constant(1, 1.0), {0, 2.0}).total, std::sqrt(pi), 1e-15);
    EXPECT_NEAR(sobolev_norm(fmono(Monomial{{1, 0}}), {0, 4.0}).total, std::pow(pi / 3.0, 0.25), 1e-15);
    // z1 zbar2: |u|^2 -> pi^2/4, d1 u = zbar2 -> pi^2/2, dbar2 u = z1 -> pi^2/2
    const auto u = ExactDensity::monomial(Monomial{{1, 0}, {0, 1}}, GaussianRational(1));
    const auto rep = sobolev_norm(u, {1, 2.0});
    EXPECT_NEAR(rep.total, std::sqrt(1.25) * pi, 1e-14);
    EXPECT_EQ(rep.mode, Mode::exact);
    EXPECT_EQ(rep.derivatives.size(), rep.contributions.size());
}

TEST(SobolevNorm, NonEvenExponentMatchesQuadrature)
{
    FloatDensity f(1, 2);
    f.accumulate(Monomial{{1, 0}}, 1.0);
    f.accumulate(Monomial{{0, 2}}, cplx(0.5, -0.25));
    const auto ev = [](cplx w) { return w + cplx(0.5, -0.25) * std::conj(w) * std::conj(w); };
    const cplx I = oracle::disc_integral_about(0.0, [&](cplx w, double rho, double) {
        return rho * std::pow(std::abs(ev(w)), 3.0);
    }, 256, 96);
    const auto rep = sobolev_norm(f, {0, 3.0});
    EXPECT_EQ(rep.resolution, "grid");
    EXPECT_NEAR(rep.total, std::cbrt(I.real()), 1e-10);
}

TEST(SobolevNorm, GridAgreesWithClosedForm)
{
    Rng rng(12);
    const auto f = random_density<cplx>(rng, 2, 3);
    const auto grid = ProductGrid::make({SliceDomain::unit_disc(), SliceDomain::unit_disc()}, GridSpec{16, 32});
    const auto g = sample_to_grid(f, grid);
    for (const SobolevIndex idx : {SobolevIndex{0, 2.0}, SobolevIndex{1, 4.0}, SobolevIndex{2, 2.0}}) {
        const double e = sobolev_norm(f, idx).total;
        EXPECT_NEAR(sobolev_norm(g, idx).total, e, 1e-10 * e);
    }
}

TEST(SobolevNorm, NumericDerivativeOrderCap)
{
    const auto grid = ProductGrid::make({SliceDomain::unit_disc()}, GridSpec{8, 16});
    const GridFunction u(grid);
    EXPECT_THROW(weak_derivative(u, DerivativeIndex{3, 2}), ResolutionError);
    EXPECT_NO_THROW(weak_derivative(u, DerivativeIndex{2, 2}));
    EXPECT_THROW(weak_derivative(u, DerivativeIndex{1, 0, 0, 0}), ShapeError);
    EXPECT_THROW(sobolev_norm(u, {5, 2.0}), ResolutionError);
}

TEST(Families, SeededAndInRange)
{
    Rng a(9), b(9);
    const auto fa = random_density<GaussianRational>(a, 2, 4);
    const auto fb = random_density<GaussianRational>(b, 2, 4);
    EXPECT_EQ(fa, fb);
    for (const auto& [m, c] : fa.terms()) {
        EXPECT_LE(m.total_degree(), 4);
        EXPECT_EQ(256 % c.den(), 0);
        EXPECT_LT(std::abs(c.to_complex()), 1.0);
    }
    Rng h(4);
    const auto hol = random_holomorphic<cplx>(h, 2, 3);
    EXPECT_GT(hol.size(), 0u);
    for (const auto& [m, c] : hol.terms())
        EXPECT_EQ(m.zbar(0) + m.zbar(1), 0);
    Rng r(2);
    EXPECT_EQ(check_dbar_closed(random_closed_form<GaussianRational>(r, 3, 4)), 0.0);
}

TEST(NormSweep, ColumnsAndDeterminism)
{
    FamilySpec fam;
    fam.degrees = {2, 4};
    fam.count = 2;
    const std::vector<SobolevIndex> idx{{1, 2.0}, {1, 4.0}};
    const auto a = norm_ratio_sweep(SweepTag::slice_T, fam, idx);
    const auto b = norm_ratio_sweep(SweepTag::slice_T, fam, idx);
    ASSERT_EQ(a.size(), 4u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].ratio_max, b[i].ratio_max);
        EXPECT_LE(a[i].ratio_mean, a[i].ratio_max);
        EXPECT_GT(a[i].ratio_mean, 0.0);
        EXPECT_EQ(a[i].seed, 42u);
    }
}

TEST(NormSweep, TagsAndOrders)
{
    EXPECT_EQ(parse_sweep_tag("T-product"), SweepTag::product_T);
    EXPECT_THROW(parse_sweep_tag("Q"), ConfigError);
    EXPECT_EQ(sweep_orders(SweepTag::slice_T, 1), std::make_pair(1, 2));
    EXPECT_EQ(sweep_orders(SweepTag::slice_G, 1), std::make_pair(0, 2));
    EXPECT_EQ(sweep_orders(SweepTag::product_T, 2), std::make_pair(2, 2));
    EXPECT_THROW(sweep_orders(SweepTag::slice_G, 0), IndexError);
}

TEST(FormNorm, CombinesComponents)
{
    const Form01<FloatDensity> f({FloatDensity::constant(2, 1.0), FloatDensity::constant(2, 1.0)});
    // each component has L^2 norm pi on the bidisc
    EXPECT_NEAR(form_norm(f, {0, 2.0}), std::sqrt(2.0) * pi, 1e-14);
}
