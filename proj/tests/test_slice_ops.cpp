#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "dbar/errors.hpp"
#include "dbar/slice_ops.hpp"
#include "oracles.hpp"

using namespace dbar;

namespace {

const SliceDomain& shaped()
{
    static const SliceDomain s = SliceDomain::conformal({0.05, 1.0, {0.2, 0.1}});
    return s;
}

ExactDensity mono(int m, int n) { return ExactDensity::monomial(Monomial{{m, n}}, GaussianRational(1)); }

std::function<cplx(cplx)> as_function(int m, int n)
{
    return [m, n](cplx w) { return std::pow(w, m) * std::pow(std::conj(w), n); };
}

const std::vector<cplx> probes{{0.0, 0.0}, {0.3, -0.45}, {-0.7, 0.2}, {0.05, 0.93}};

// physical-coordinate test density on the conformal slice
cplx g_phys(cplx w) { return std::conj(w) * w * w + std::exp(0.5 * w); }

double worst_on_grid(const GridFunction& u, const std::function<cplx(cplx)>& ref, int stride = 97)
{
    const auto& grid = *u.grid();
    double e = 0.0;
    for (std::size_t i = 0; i < u.size(); i += stride)
        e = std::max(e, std::abs(u[i] - ref(grid.zeta(0)[i])));
    return e;
}

} // namespace

TEST(ExactSliceOps, MatchDirectQuadrature)
{
    const auto d = SliceDomain::unit_disc();
    for (auto [m, n] : std::vector<std::pair<int, int>>{{0, 0}, {3, 1}, {1, 3}, {4, 4}, {6, 2}}) {
        const auto f = mono(m, n);
        const auto fn = as_function(m, n);
        for (cplx z : probes) {
            const std::vector<cplx> p{z};
            EXPECT_NEAR(std::abs(dirichlet_G(f, d).evaluate(p) - oracle::dirichlet_G(fn, z)), 0.0, 1e-9) << m << n;
            EXPECT_NEAR(std::abs(canonical_T(f, d).evaluate(p) - oracle::canonical_T(fn, z)), 0.0, 1e-11) << m << n;
            EXPECT_NEAR(std::abs(cauchy_Ttilde(f, d).evaluate(p) - oracle::cauchy_transform(fn, z)), 0.0, 1e-11) << m << n;
            EXPECT_NEAR(std::abs(bergman_P(f, d).evaluate(p) - oracle::bergman_P(fn, z)), 0.0, 1e-11) << m << n;
        }
    }
}

TEST(ExactSliceOps, DefiningIdentities)
{
    const auto d = SliceDomain::unit_disc();
    for (int m = 0; m <= 8; ++m)
        for (int n = 0; n <= 8; ++n) {
            const auto f = mono(m, n);
            EXPECT_EQ(dzbar(canonical_T(f, d), 0), f.with_max_degree(9));
            EXPECT_EQ(dzbar(cauchy_Ttilde(f, d), 0), f.with_max_degree(9));
            EXPECT_EQ(laplacian(dirichlet_G(f, d), 0), f.scaled(Rational(4)).with_max_degree(9));
            EXPECT_EQ(dz(dirichlet_G(f, d), 0), canonical_T(f, d));
            EXPECT_EQ(spencer_residual(f, d), 0.0);
            const auto p = bergman_P(f, d);
            EXPECT_EQ(bergman_P(p, d), p);
            const auto tt = cauchy_Ttilde(f, d);
            EXPECT_EQ(canonical_T(f, d), tt - bergman_P(tt, d));
        }
}

TEST(ExactSliceOps, GVanishesOnTheCircle)
{
    const auto g = dirichlet_G(mono(5, 2), SliceDomain::unit_disc());
    for (int k = 0; k < 16; ++k)
        EXPECT_NEAR(std::abs(g.evaluate(std::polar(1.0, 0.4 * k))), 0.0, 1e-15);
}

TEST(ExactSliceOps, RejectConformalSlices)
{
    EXPECT_THROW(canonical_T(mono(1, 1), shaped()), RepresentationError);
    EXPECT_THROW(bergman_P(mono(1, 1), shaped()), RepresentationError);
}

TEST(NumericSliceOps, DiscAgreesWithExactPath)
{
    const auto grid = ProductGrid::make({SliceDomain::unit_disc()}, GridSpec{});
    const auto d = SliceDomain::unit_disc();
    for (auto [m, n] : std::vector<std::pair<int, int>>{{0, 0}, {2, 5}, {8, 8}, {7, 1}}) {
        const auto f = mono(m, n);
        const auto fg = sample_to_grid(f, grid);
        EXPECT_LT((canonical_T(fg) - sample_to_grid(canonical_T(f, d), grid)).max_abs(), 1e-12);
        EXPECT_LT((cauchy_Ttilde(fg) - sample_to_grid(cauchy_Ttilde(f, d), grid)).max_abs(), 1e-12);
        EXPECT_LT((dirichlet_G(fg) - sample_to_grid(dirichlet_G(f, d), grid)).max_abs(), 1e-12);
        EXPECT_LT((bergman_P(fg) - sample_to_grid(bergman_P(f, d), grid)).max_abs(), 1e-12);
        EXPECT_LT(spencer_residual(fg), 1e-6);
    }
}

TEST(NumericSliceOps, ConformalSliceMatchesPulledBackQuadrature)
{
    const auto& s = shaped();
    const oracle::Map phi{s.map_coeffs()};
    const auto grid = ProductGrid::make({s}, GridSpec{48, 96});
    const auto f = sample_function(grid, [](std::span<const cplx> p) { return g_phys(p[0]); });
    EXPECT_LT(worst_on_grid(cauchy_Ttilde(f), [&](cplx zeta) { return oracle::cauchy_transform(phi, g_phys, zeta); }), 1e-9);
    EXPECT_LT(worst_on_grid(canonical_T(f), [&](cplx zeta) { return oracle::canonical_T(phi, g_phys, zeta); }), 1e-9);
    EXPECT_LT(worst_on_grid(dirichlet_G(f), [&](cplx zeta) { return oracle::dirichlet_G(phi, g_phys, zeta); }), 1e-8);
    EXPECT_LT(worst_on_grid(bergman_P(f), [&](cplx zeta) {
        return oracle::disc_integral_about(zeta, [&](cplx eta, double rho, double) {
                   const cplx d = 1.0 - zeta * std::conj(eta);
                   return rho * g_phys(phi(eta)) * phi.d1(eta) / (oracle::pi * d * d);
               }, 768, 160) / phi.d1(zeta);
    }), 1e-9);
}

TEST(NumericSliceOps, ReportsCarryDefiningResiduals)
{
    const auto grid = ProductGrid::make({shaped()}, GridSpec{48, 96});
    const auto f = sample_function(grid, [](std::span<const cplx> p) { return g_phys(p[0]); });
    const auto g = slice_report(OperatorTag::G, f);
    EXPECT_LT(g.residuals.at("boundary"), 1e-10);
    EXPECT_LT(g.residuals.at("laplacian"), 1e-6);
    const auto t = slice_report(OperatorTag::T, f);
    EXPECT_LT(t.residuals.at("dbar"), 1e-8);
    EXPECT_LT(t.residuals.at("orthogonality"), 1e-10);
    const auto tt = slice_report(OperatorTag::Ttilde, f);
    EXPECT_LT(tt.residuals.at("T_vs_I_minus_P"), 1e-10);
    const auto p = slice_report(OperatorTag::P, f);
    EXPECT_LT(p.residuals.at("kernel_vs_spencer"), 1e-8);
    EXPECT_LT(p.residuals.at("idempotence"), 1e-10);
    EXPECT_STREQ(to_string(p.tag), "P");
}

TEST(NumericSliceOps, SliceIndexOutOfRange)
{
    const auto grid = ProductGrid::make({SliceDomain::unit_disc()}, GridSpec{8, 16});
    const GridFunction f(grid);
    EXPECT_ANY_THROW(canonical_T(f, 1));
    EXPECT_THROW(canonical_T(mono(1, 0), SliceDomain::unit_disc(), 1), ShapeError);
}
