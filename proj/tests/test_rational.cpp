#include <gtest/gtest.h>

#include <limits>

#include "dbar/errors.hpp"
#include "dbar/rational.hpp"

using dbar::GaussianRational;
using dbar::Rational;

TEST(Rational, ReducesAndNormalisesSign)
{
    const Rational r(6, -4);
    EXPECT_EQ(r.num(), -3);
    EXPECT_EQ(r.den(), 2);
    EXPECT_EQ(Rational(0, 7), Rational(0));
}

TEST(Rational, FieldOperations)
{
    const Rational a(1, 3), b(1, 6);
    EXPECT_EQ(a + b, Rational(1, 2));
    EXPECT_EQ(a - b, Rational(1, 6));
    EXPECT_EQ(a * b, Rational(1, 18));
    EXPECT_EQ(a / b, Rational(2));
    EXPECT_DOUBLE_EQ((a + b).to_double(), 0.5);
}

TEST(Rational, ZeroDenominatorThrows)
{
    EXPECT_THROW(Rational(1, 0), std::domain_error);
    EXPECT_THROW(Rational(1) / Rational(0), std::domain_error);
}

TEST(Rational, OverflowIsReported)
{
    const Rational big(std::numeric_limits<std::int64_t>::max() / 2, 1);
    EXPECT_THROW(big * big, dbar::ArithmeticOverflow);
    const Rational tiny(1, std::numeric_limits<std::int64_t>::max() / 3);
    EXPECT_THROW(tiny * Rational(1, 7), dbar::ArithmeticOverflow);
}

TEST(GaussianRational, ArithmeticMatchesComplexDoubles)
{
    const GaussianRational a(3, -2, 5), b(-1, 4, 3);
    const auto ca = a.to_complex(), cb = b.to_complex();
    EXPECT_NEAR(std::abs((a + b).to_complex() - (ca + cb)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs((a * b).to_complex() - ca * cb), 0.0, 1e-15);
    EXPECT_NEAR(std::abs((a / b).to_complex() - ca / cb), 0.0, 1e-15);
    EXPECT_EQ(a * b / b, a);
    EXPECT_EQ(a.conj().conj(), a);
    EXPECT_EQ((a * a.conj()).imag(), Rational(0));
}

TEST(GaussianRational, CommonDenominatorIsReduced)
{
    const GaussianRational g(4, 6, 8);
    EXPECT_EQ(g.re_num(), 2);
    EXPECT_EQ(g.im_num(), 3);
    EXPECT_EQ(g.den(), 4);
    EXPECT_TRUE((g - g).is_zero());
}
