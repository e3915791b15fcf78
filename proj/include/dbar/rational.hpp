#pragma once

#include <complex>
#include <cstdint>
#include <ostream>
#include <string>

#include "dbar/errors.hpp"

namespace dbar {

namespace detail {

using i128 = __int128;

inline std::int64_t narrow(i128 v)
{
    constexpr i128 hi = INT64_MAX;
    constexpr i128 lo = INT64_MIN;
    if (v > hi || v < lo)
        throw ArithmeticOverflow("exact coefficient exceeds the 64-bit range");
    return static_cast<std::int64_t>(v);
}

inline i128 abs128(i128 v) { return v < 0 ? -v : v; }

inline i128 gcd128(i128 a, i128 b)
{
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline i128 mul(i128 a, i128 b)
{
    i128 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw ArithmeticOverflow("exact coefficient product overflows");
    return r;
}

inline i128 add(i128 a, i128 b)
{
    i128 r;
    if (__builtin_add_overflow(a, b, &r))
        throw ArithmeticOverflow("exact coefficient sum overflows");
    return r;
}

inline i128 sub(i128 a, i128 b)
{
    i128 r;
    if (__builtin_sub_overflow(a, b, &r))
        throw ArithmeticOverflow("exact coefficient difference overflows");
    return r;
}

} // namespace detail

/// Reduced fraction num/den with den > 0.
class Rational
{
public:
    constexpr Rational() = default;
    Rational(std::int64_t n) : num_(n), den_(1) {} // NOLINT: implicit from integers is intended
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    bool is_zero() const noexcept { return num_ == 0; }
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rational operator+(const Rational& a, const Rational& b)
    {
        using namespace detail;
        Rational r;
        r.assign(add(mul(a.num_, b.den_), mul(b.num_, a.den_)), mul(a.den_, b.den_));
        return r;
    }
    friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b)
    {
        Rational r;
        r.assign(detail::mul(a.num_, b.num_), detail::mul(a.den_, b.den_));
        return r;
    }
    friend Rational operator/(const Rational& a, const Rational& b)
    {
        if (b.num_ == 0)
            throw std::domain_error("rational division by zero");
        Rational r;
        r.assign(detail::mul(a.num_, b.den_), detail::mul(a.den_, b.num_));
        return r;
    }
    friend bool operator==(const Rational&, const Rational&) = default;

private:
    void assign(detail::i128 n, detail::i128 d)
    {
        if (d == 0)
            throw std::domain_error("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const auto g = detail::gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        num_ = detail::narrow(n);
        den_ = detail::narrow(d);
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// Gaussian rational (re + i im) / den: Gaussian-integer numerator over a positive common denominator.
class GaussianRational
{
public:
    constexpr GaussianRational() = default;
    GaussianRational(std::int64_t re) : re_(re) {} // NOLINT
    GaussianRational(const Rational& r) : re_(r.num()), den_(r.den()) {} // NOLINT
    GaussianRational(std::int64_t re, std::int64_t im, std::int64_t den = 1) { assign(re, im, den); }

    std::int64_t re_num() const noexcept { return re_; }
    std::int64_t im_num() const noexcept { return im_; }
    std::int64_t den() const noexcept { return den_; }

    bool is_zero() const noexcept { return re_ == 0 && im_ == 0; }
    Rational real() const { return Rational(re_, den_); }
    Rational imag() const { return Rational(im_, den_); }

    std::complex<double> to_complex() const noexcept
    {
        const auto d = static_cast<double>(den_);
        return {static_cast<double>(re_) / d, static_cast<double>(im_) / d};
    }

    GaussianRational conj() const
    {
        GaussianRational r;
        r.re_ = re_;
        r.im_ = -im_;
        r.den_ = den_;
        return r;
    }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b)
    {
        using namespace detail;
        GaussianRational r;
        r.assign(add(mul(a.re_, b.den_), mul(b.re_, a.den_)),
                 add(mul(a.im_, b.den_), mul(b.im_, a.den_)),
                 mul(a.den_, b.den_));
        return r;
    }
    friend GaussianRational operator-(const GaussianRational& a)
    {
        GaussianRational r;
        r.re_ = -a.re_;
        r.im_ = -a.im_;
        r.den_ = a.den_;
        return r;
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) { return a + (-b); }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b)
    {
        using namespace detail;
        GaussianRational r;
        r.assign(sub(mul(a.re_, b.re_), mul(a.im_, b.im_)),
                 add(mul(a.re_, b.im_), mul(a.im_, b.re_)),
                 mul(a.den_, b.den_));
        return r;
    }
    friend GaussianRational operator*(const GaussianRational& a, const Rational& s)
    {
        using namespace detail;
        GaussianRational r;
        r.assign(mul(a.re_, s.num()), mul(a.im_, s.num()), mul(a.den_, s.den()));
        return r;
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b)
    {
        using namespace detail;
        if (b.is_zero())
            throw std::domain_error("Gaussian rational division by zero");
        // a/b = a * conj(b) * den_b / |num_b|^2
        const i128 norm = add(mul(b.re_, b.re_), mul(b.im_, b.im_));
        const i128 re = sub(mul(a.re_, b.re_), mul(-a.im_, b.im_));
        const i128 im = add(mul(a.im_, b.re_), mul(a.re_, -b.im_));
        GaussianRational r;
        r.assign(mul(re, b.den_), mul(im, b.den_), mul(a.den_, norm));
        return r;
    }
    friend bool operator==(const GaussianRational&, const GaussianRational&) = default;

    friend std::ostream& operator<<(std::ostream& os, const GaussianRational& g)
    {
        os << '(' << g.re_ << (g.im_ < 0 ? "-" : "+") << (g.im_ < 0 ? -g.im_ : g.im_) << "i)";
        if (g.den_ != 1)
            os << '/' << g.den_;
        return os;
    }

private:
    void assign(detail::i128 re, detail::i128 im, detail::i128 den)
    {
        if (den == 0)
            throw std::domain_error("Gaussian rational with zero denominator");
        if (den < 0) {
            re = -re;
            im = -im;
            den = -den;
        }
        if (re == 0 && im == 0) {
            re_ = 0;
            im_ = 0;
            den_ = 1;
            return;
        }
        const auto g = detail::gcd128(detail::gcd128(re, im), den);
        if (g > 1) {
            re /= g;
            im /= g;
            den /= g;
        }
        re_ = detail::narrow(re);
        im_ = detail::narrow(im);
        den_ = detail::narrow(den);
    }

    std::int64_t re_ = 0;
    std::int64_t im_ = 0;
    std::int64_t den_ = 1;
};

} // namespace dbar
