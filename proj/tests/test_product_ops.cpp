#include <gtest/gtest.h>

#include "dbar/errors.hpp"
#include "dbar/product_ops.hpp"
#include "dbar/random.hpp"
#include "dbar/sobolev.hpp"

using namespace dbar;

namespace {

std::vector<SliceDomain> bidisc() { return {SliceDomain::unit_disc(), SliceDomain::unit_disc()}; }

ExactDensity term(Monomial m, GaussianRational c = GaussianRational(1), int deg = 2)
{
    return ExactDensity::monomial(m, c, deg);
}

Form01<GridFunction> sample_form(const Form01<ExactDensity>& f, const GridPtr& grid)
{
    std::vector<GridFunction> comps;
    for (const auto& c : f.components())
        comps.push_back(sample_to_grid(c, grid));
    return Form01<GridFunction>(std::move(comps));
}

} // namespace

TEST(ProductSolve, HandComputedBidiscExample)
{
    // zbar2 dzbar1 + zbar1 dzbar2 = dbar(zbar1 zbar2), which is already orthogonal to holomorphic functions
    const Form01<ExactDensity> f({term(Monomial{{0, 0}, {0, 1}}), term(Monomial{{0, 1}, {0, 0}})});
    EXPECT_EQ(check_dbar_closed(f), 0.0);
    const auto sol = canonical_solution_product(f, bidisc());
    EXPECT_EQ(sol.u, term(Monomial{{0, 1}, {0, 1}}));
    // z1 dzbar1: the canonical solution of dbar u = z1 is |z1|^2 - 1/2
    const Form01<ExactDensity> g({term(Monomial{{1, 0}, {0, 0}}), ExactDensity(2, 2)});
    const auto ug = canonical_solution_product(g, bidisc()).u;
    EXPECT_EQ(ug, term(Monomial{{1, 1}, {0, 0}}) - term(Monomial{{0, 0}, {0, 0}}, GaussianRational(1, 0, 2)));
}

TEST(ProductSolve, EqualsPotentialMinusItsProjection)
{
    for (std::size_t n : {std::size_t{2}, std::size_t{3}}) {
        const std::vector<SliceDomain> slices(n, SliceDomain::unit_disc());
        for (int i = 0; i < 5; ++i) {
            Rng rng(100 + i);
            const auto v = random_density<GaussianRational>(rng, n, n == 2 ? 5 : 3);
            std::vector<ExactDensity> comps;
            for (std::size_t j = 0; j < n; ++j)
                comps.push_back(dzbar(v, j));
            const Form01<ExactDensity> f(std::move(comps));
            const auto sol = canonical_solution_product(f, slices);
            const auto expected = v - bergman_projection_product(v, slices);
            EXPECT_EQ((sol.u - expected).max_abs_coefficient(), 0.0);
            EXPECT_EQ(dbar_residual(sol.u, f), 0.0);
            EXPECT_EQ(orthogonality_residual(sol.u, 6), 0.0);
        }
    }
}

TEST(ProductSolve, OrderOfCompositionDoesNotMatter)
{
    Rng rng(5);
    const auto f = random_closed_form<GaussianRational>(rng, 3, 3);
    const std::vector<SliceDomain> slices(3, SliceDomain::unit_disc());
    const auto a = canonical_solution_product(f, slices).u;
    const auto b = canonical_solution_product(f, slices, {2, 0, 1}).u;
    EXPECT_EQ(a, b);
    EXPECT_THROW(canonical_solution_product(f, slices, {0, 0, 1}), std::exception);
}

TEST(ProductSolve, RejectsNonClosedForms)
{
    const Form01<ExactDensity> f({term(Monomial{{0, 0}, {0, 1}}), ExactDensity(2, 2)});
    EXPECT_GT(check_dbar_closed(f), 0.0);
    try {
        (void)canonical_solution_product(f, bidisc());
        FAIL() << "expected PreconditionError";
    } catch (const PreconditionError& e) {
        EXPECT_GT(e.residual(), 0.0);
    }
}

TEST(ProductSolve, ShapeErrors)
{
    EXPECT_THROW(Form01<ExactDensity>({ExactDensity(2, 1)}), ShapeError);
    const Form01<ExactDensity> f({ExactDensity(2, 1), ExactDensity(2, 1)});
    EXPECT_THROW(canonical_solution_product(f, {SliceDomain::unit_disc()}), ShapeError);
    const auto g1 = ProductGrid::make(bidisc(), GridSpec{8, 16});
    const auto g2 = ProductGrid::make(bidisc(), GridSpec{8, 18});
    EXPECT_THROW(Form01<GridFunction>({GridFunction(g1), GridFunction(g2)}), ShapeError);
}

TEST(ProductSolve, NumericBidiscAgreesWithExact)
{
    const auto grid = ProductGrid::make(bidisc(), auto_grid_spec(6));
    for (int i = 0; i < 3; ++i) {
        Rng rng(7 + i);
        const auto f = random_closed_form<GaussianRational>(rng, 2, 6);
        const auto exact = canonical_solution_product(f, bidisc());
        const auto num = canonical_solution_product(sample_form(f, grid));
        EXPECT_LT((num.u - sample_to_grid(exact.u, grid)).max_abs(), 1e-11);
        EXPECT_LT(num.residuals.at("dbar"), 1e-8);
        EXPECT_LT(orthogonality_residual(num.u, 6), 1e-8);
    }
}

TEST(ProductSolve, NumericOnConformalTimesDisc)
{
    const std::vector<SliceDomain> slices{SliceDomain::conformal({0.0, 1.0, {0.15, -0.1}}), SliceDomain::unit_disc()};
    const auto grid = ProductGrid::make(slices, GridSpec{24, 40});
    // dbar of v = z1 zbar1^2 + zbar1 zbar2 + z2^2 zbar2 in physical coordinates
    auto comp = [&](int j) {
        return sample_function(grid, [j](std::span<const cplx> p) {
            const cplx z1 = p[0], z2 = p[1];
            return j == 0 ? 2.0 * std::conj(z1) * z1 + std::conj(z2) : std::conj(z1) + z2 * z2;
        });
    };
    const Form01<GridFunction> f({comp(0), comp(1)});
    EXPECT_LT(check_dbar_closed(f), 1e-8);
    const auto sol = canonical_solution_product(f);
    EXPECT_LT(dbar_residual(sol.u, f), 1e-8);
    EXPECT_LT(orthogonality_residual(sol.u, 6), 1e-8);
    EXPECT_LT((canonical_solution_product(f, {1, 0}).u - sol.u).max_abs(), 1e-8);
}

TEST(ProductProjection, NumericMatchesExactAndIsIdempotent)
{
    const auto grid = ProductGrid::make(bidisc(), auto_grid_spec(6));
    Rng rng(3);
    const auto v = random_density<GaussianRational>(rng, 2, 6);
    const auto pv = bergman_projection_product(v, bidisc());
    EXPECT_EQ(bergman_projection_product(pv, bidisc()), pv);
    const auto num = bergman_projection_product(sample_to_grid(v, grid));
    EXPECT_LT((num - sample_to_grid(pv, grid)).max_abs(), 1e-11);
    const auto spencer = bergman_projection_product(sample_to_grid(v, grid), BergmanRoute::spencer);
    EXPECT_LT((num - spencer).max_abs(), 1e-8);
}
